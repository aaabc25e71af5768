# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled twin of ``_search``: same algorithm, 64-bit label masks."""

from libc.stdint cimport uint64_t, int64_t
from libc.string cimport memcpy
from libcpp.vector cimport vector
from libcpp.string cimport string
from libcpp.unordered_map cimport unordered_map
from libcpp.utility cimport pair
from cython.operator cimport dereference as deref

import time

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

cdef double ACT_TOL = 1e-9
cdef int64_t CHECK_EVERY = 2048
# cache caps; both caches only prune, so clearing them is always safe
cdef size_t MEMO_CAP = 2000000
cdef size_t SUF_CAP_DOUBLES = 4000000
# more candidate rows than this in one interval counts as an exhausted budget
cdef size_t CHOICE_CAP = 1 << 15


cdef inline int pc(uint64_t x) nogil:
    return __builtin_popcountll(x)


cdef inline int low_index(uint64_t x) nogil:
    return __builtin_ctzll(x)


cdef int clique_cover_bound(uint64_t pool, const uint64_t* adj):
    cdef int count = 0
    cdef uint64_t low, q, u
    while pool:
        low = pool & (~pool + 1)
        pool ^= low
        q = adj[low_index(low)] & pool
        while q:
            u = q & (~q + 1)
            pool ^= u
            q &= adj[low_index(u)]
        count += 1
    return count


cdef class _MIS:
    cdef const uint64_t* adj
    cdef uint64_t best
    cdef int best_size
    cdef bint found, timed_out
    cdef double deadline
    cdef int64_t nodes

    cdef void rec(self, uint64_t chosen, int size, uint64_t pool):
        cdef uint64_t p, low, bit
        cdef int v, i, d, vd
        if self.timed_out:
            return
        self.nodes += 1
        if self.found and self.deadline > 0 and self.nodes % 1024 == 0 and time.monotonic() > self.deadline:
            self.timed_out = True
            return
        while pool:
            v = -1
            p = pool
            while p:
                low = p & (~p + 1)
                i = low_index(low)
                if pc(self.adj[i] & pool) <= 1:
                    v = i
                    break
                p ^= low
            if v < 0:
                break
            chosen |= (<uint64_t>1) << v
            size += 1
            pool &= ~(((<uint64_t>1) << v) | self.adj[v])
        if size + pc(pool) <= self.best_size:
            return
        if not pool:
            self.best = chosen
            self.best_size = size
            self.found = True
            return
        if size + clique_cover_bound(pool, self.adj) <= self.best_size:
            return
        v = -1
        vd = -1
        p = pool
        while p:
            low = p & (~p + 1)
            i = low_index(low)
            d = pc(self.adj[i] & pool)
            if d > vd:
                v = i
                vd = d
            p ^= low
        bit = (<uint64_t>1) << v
        self.rec(chosen | bit, size + 1, pool & ~(bit | self.adj[v]))
        self.rec(chosen, size, pool & ~bit)


cdef uint64_t mis_budget(uint64_t cands, const uint64_t* adj, double deadline, bint* optimal):
    # solve each connected component of the induced graph on its own;
    # deadline <= 0 means no limit
    cdef _MIS s = _MIS()
    cdef uint64_t rest = cands, comp, frontier, low, nb, result = 0
    s.adj = adj
    s.deadline = deadline
    optimal[0] = True
    while rest:
        comp = rest & (~rest + 1)
        frontier = comp
        while frontier:
            low = frontier & (~frontier + 1)
            frontier ^= low
            nb = adj[low_index(low)] & rest & ~comp
            comp |= nb
            frontier |= nb
        rest &= ~comp
        s.best = 0
        s.best_size = 0
        s.found = False
        s.timed_out = False
        s.nodes = 0
        s.rec(0, 0, comp)
        if s.timed_out:
            optimal[0] = False
        result |= s.best
    return result


cdef uint64_t mis_c(uint64_t cands, const uint64_t* adj):
    cdef bint optimal
    return mis_budget(cands, adj, 0.0, &optimal)


cdef vector[uint64_t] _adj_vector(adj):
    cdef vector[uint64_t] a
    for v in adj:
        a.push_back(<uint64_t>v)
    if a.size() == 0:
        a.push_back(0)
    return a


def max_independent_set(cands, adj):
    cdef vector[uint64_t] a = _adj_vector(adj)
    return int(mis_c(<uint64_t>cands, a.data()))


def max_independent_set_budget(cands, adj, time_limit):
    cdef vector[uint64_t] a = _adj_vector(adj)
    cdef bint optimal
    cdef uint64_t S = mis_budget(<uint64_t>cands, a.data(), time.monotonic() + time_limit, &optimal)
    return int(S), bool(optimal)


cdef class _Sweep:
    cdef int m, n, k, K2
    cdef bint lexi, timed_out, has_best, use_lag
    cdef uint64_t full
    cdef vector[double] lengths
    cdef vector[uint64_t] allowed
    cdef vector[uint64_t] adj          # m * n
    cdef vector[double] csuf
    cdef vector[double] lagF
    cdef vector[uint64_t] Rbuf         # (m + 1) * K2
    cdef vector[uint64_t] rows
    cdef vector[uint64_t] best_rows
    cdef double best_act
    cdef int64_t best_runs
    cdef int64_t nodes
    cdef double deadline
    cdef unordered_map[string, pair[double, int64_t]] memo
    cdef unordered_map[uint64_t, vector[double]] suf_cache
    cdef vector[vector[uint64_t]] chbuf
    cdef vector[int] order
    cdef vector[uint64_t] out

    cdef const double* suffix(self, uint64_t alive):
        cdef unordered_map[uint64_t, vector[double]].iterator it = self.suf_cache.find(alive)
        cdef vector[double] row
        cdef double acc = 0.0
        cdef int j
        if it != self.suf_cache.end():
            return &(self.suf_cache[alive][0])
        row.resize(self.m + 1, 0.0)
        for j in range(self.m - 1, -1, -1):
            acc += self.lengths[j] * pc(mis_c(self.allowed[j] & alive, &self.adj[j * self.n]))
            row[j] = acc
        if self.suf_cache.size() * <size_t>(self.m + 1) > SUF_CAP_DOUBLES:
            self.suf_cache.clear()
        self.suf_cache[alive] = row
        return &(self.suf_cache[alive][0])

    cdef bint better(self, double act, int64_t runs):
        if act > self.best_act + ACT_TOL:
            return True
        if self.lexi and act >= self.best_act - ACT_TOL and runs < self.best_runs:
            return True
        return False

    cdef void gen(self, int t, uint64_t S, uint64_t cont, uint64_t forced, const uint64_t* adjj):
        cdef uint64_t rest, low, bit
        cdef int i
        if self.timed_out:
            return
        if t == <int>self.order.size():
            rest = cont & ~S
            while rest:
                low = rest & (~rest + 1)
                if not (adjj[low_index(low)] & S):
                    return
                rest ^= low
            self.out.push_back(S)
            if self.out.size() >= CHOICE_CAP:
                self.timed_out = True
            return
        i = self.order[t]
        bit = (<uint64_t>1) << i
        if not (adjj[i] & S):
            self.gen(t + 1, S | bit, cont, forced, adjj)
        if not (forced & bit):
            self.gen(t + 1, S, cont, forced, adjj)

    cdef void choices(self, int j, uint64_t A, uint64_t Z, const uint64_t* R):
        cdef vector[uint64_t]* res = &self.chbuf[j]
        cdef uint64_t allow = self.allowed[j]
        cdef const uint64_t* adjj = &self.adj[j * self.n]
        cdef const uint64_t* adjp
        cdef uint64_t forced = R[self.k + 1]
        cdef uint64_t can_start, cont, start, p, low, prev_allow, S
        cdef int i, ka0, ka1, kb0, kb1
        cdef size_t x, y
        res.clear()
        if forced & ~allow:
            return
        can_start = (self.full & ~R[self.k]) | (Z & ~R[self.k + 1])
        cont = A & allow
        if j == 0:
            start = allow
        else:
            prev_allow = self.allowed[j - 1]
            adjp = &self.adj[(j - 1) * self.n]
            start = 0
            p = allow & ~A & can_start
            while p:
                low = p & (~p + 1)
                i = low_index(low)
                p ^= low
                if not ((prev_allow >> i) & 1) or (adjp[i] & A):
                    start |= low
        self.order.clear()
        p = cont
        while p:
            low = p & (~p + 1)
            self.order.push_back(low_index(low))
            p ^= low
        p = start
        while p:
            low = p & (~p + 1)
            self.order.push_back(low_index(low))
            p ^= low
        self.out.clear()
        self.gen(0, 0, cont, forced, adjj)
        # stable insertion sort by (-|S|, -|S & A|)
        for x in range(self.out.size()):
            S = self.out[x]
            ka0 = -pc(S)
            ka1 = -pc(S & A)
            y = x
            while y > 0:
                kb0 = -pc(self.out[y - 1])
                kb1 = -pc(self.out[y - 1] & A)
                if kb0 > ka0 or (kb0 == ka0 and kb1 > ka1):
                    self.out[y] = self.out[y - 1]
                    y -= 1
                else:
                    break
            self.out[y] = S
        for x in range(self.out.size()):
            res.push_back(self.out[x])

    cdef void rec(self, int j, uint64_t A, uint64_t Z, double g, int64_t q):
        cdef const uint64_t* R = &self.Rbuf[j * self.K2]
        cdef uint64_t* NR
        cdef uint64_t p, low, can_start, S, starts
        cdef int i, t, r
        cdef int64_t runs
        cdef double ub, lb, length
        cdef const double* suf
        cdef string key
        cdef unordered_map[string, pair[double, int64_t]].iterator it
        cdef size_t c, nch
        cdef int64_t base
        cdef pair[double, int64_t] prev
        if self.timed_out:
            return
        self.nodes += 1
        if self.nodes % CHECK_EVERY == 0 and time.monotonic() > self.deadline:
            self.timed_out = True
            return
        if j == self.m:
            p = A & self.allowed[0] & ~Z
            while p:
                low = p & (~p + 1)
                if not (self.adj[low_index(low)] & Z):
                    return
                p ^= low
            p = Z & ~A
            while p:
                low = p & (~p + 1)
                i = low_index(low)
                if ((self.allowed[self.m - 1] >> i) & 1) and not (self.adj[(self.m - 1) * self.n + i] & A):
                    return
                p ^= low
            runs = q - pc(Z & A & R[2])
            if not self.has_best or self.better(g, runs):
                self.best_act = g
                self.best_runs = runs
                self.best_rows = self.rows
                self.has_best = True
            return
        can_start = (self.full & ~R[self.k]) | (Z & ~R[self.k + 1])
        suf = self.suffix((A | can_start) & self.full)
        ub = g + suf[j]
        if self.use_lag:
            lb = self.csuf[j]
            base = <int64_t>j * self.n
            for i in range(self.n):
                r = 0
                for t in range(1, self.k + 2):
                    r += (R[t] >> i) & 1
                lb += self.lagF[((((base + i) << 1) | ((A >> i) & 1)) * (self.k + 2) + r) * 2 + ((Z >> i) & 1)]
            if g + lb < ub:
                ub = g + lb
        if self.has_best:
            if ub < self.best_act - ACT_TOL:
                return
            if ub <= self.best_act + ACT_TOL:
                if not self.lexi:
                    return
                if q - pc(Z) >= self.best_runs:
                    return
        key.resize(8 * (3 + self.K2))
        memcpy(&key[0], &j, sizeof(int))
        memcpy(&key[8], &A, 8)
        memcpy(&key[16], &Z, 8)
        memcpy(&key[24], R, 8 * self.K2)
        it = self.memo.find(key)
        if it != self.memo.end():
            prev = deref(it).second
            if prev.first >= g - ACT_TOL and (not self.lexi or prev.second <= q):
                return
        elif self.memo.size() >= MEMO_CAP:
            self.memo.clear()
        self.memo[key] = pair[double, int64_t](g, q)
        length = self.lengths[j]
        self.choices(j, A, Z, R)
        if self.timed_out:
            return
        nch = self.chbuf[j].size()
        NR = &self.Rbuf[(j + 1) * self.K2]
        for c in range(nch):
            S = self.chbuf[j][c]
            starts = S & ~A
            NR[0] = R[0]
            for t in range(1, self.K2):
                NR[t] = R[t]
            if starts:
                for t in range(self.k + 1, 0, -1):
                    NR[t] |= starts & NR[t - 1]
            self.rows[j] = S
            self.rec(j + 1, S, S if j == 0 else Z, g + length * pc(S), q + pc(starts))
            if self.timed_out:
                return


def sweep_search(lengths, allowed, adj, n, k, lexi, inc_act, inc_runs, inc_rows, time_limit, lag=None):
    """See ``_search.sweep_search``; requires ``n <= 64``."""
    cdef _Sweep s = _Sweep()
    cdef int j, i
    if n > 64:
        raise ValueError("compiled kernel handles at most 64 labels")
    s.m = len(lengths)
    s.n = n
    s.k = k
    s.K2 = k + 2
    s.lexi = bool(lexi)
    s.full = ((<uint64_t>1) << n) - 1 if n < 64 else <uint64_t>0xFFFFFFFFFFFFFFFF
    for j in range(s.m):
        s.lengths.push_back(lengths[j])
        s.allowed.push_back(<uint64_t>allowed[j])
        for i in range(n):
            s.adj.push_back(<uint64_t>adj[j][i])
    if s.adj.size() == 0:
        s.adj.push_back(0)
    s.use_lag = lag is not None
    if s.use_lag:
        for v in lag[0]:
            s.csuf.push_back(v)
        for v in lag[1]:
            s.lagF.push_back(v)
    s.Rbuf.resize((s.m + 1) * s.K2, 0)
    s.Rbuf[0] = s.full
    s.rows.resize(s.m, 0)
    s.chbuf.resize(s.m + 1)
    s.best_act = inc_act
    s.best_runs = inc_runs
    s.has_best = inc_rows is not None
    if s.has_best:
        for v in inc_rows:
            s.best_rows.push_back(<uint64_t>v)
    s.nodes = 0
    s.timed_out = False
    s.deadline = time.monotonic() + time_limit
    s.rec(0, 0, 0, 0.0, 0)
    optimal = not s.timed_out
    if not s.has_best:
        return 0.0, 0, [0] * s.m, optimal, s.nodes
    return s.best_act, s.best_runs, [int(v) for v in s.best_rows], optimal, s.nodes
