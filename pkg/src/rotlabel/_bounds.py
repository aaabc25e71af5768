"""Lagrangian upper bounds for the sweep search.

The per-interval clique constraints ``sum_{i in Q} x_i^j <= 1`` are moved
into the objective with multipliers ``mu >= 0``.  What remains splits into
one problem per label: pick at most ``k`` circular runs maximizing the
reduced weights, solved by a small DP over (previous active, runs started,
active in interval 0).  The DP tables are indexed by exactly the per-label
state the sweep carries, so a node's bound is a sum of ``n`` lookups plus a
constant suffix.  Multipliers are tuned once at the root by subgradient
steps.
"""
from __future__ import annotations

import time

import numpy as np

NEG = -1e300


def clique_cover(allowed: int, adj: list[int], n: int) -> list[int]:
    """Cliques (bitmasks, size >= 2) covering every edge among ``allowed``."""
    todo = set()
    for i in range(n):
        if not (allowed >> i) & 1:
            continue
        nb = adj[i] & allowed
        for j in range(i + 1, n):
            if (nb >> j) & 1:
                todo.add((i, j))
    out = []
    while todo:
        i, j = min(todo)
        q = (1 << i) | (1 << j)
        cand = adj[i] & adj[j] & allowed
        # prefer vertices that cover most uncovered edges
        while cand:
            best, best_gain = -1, -1
            c = cand
            while c:
                low = c & -c
                v = low.bit_length() - 1
                c ^= low
                gain = sum(1 for u in range(n) if (q >> u) & 1 and (min(u, v), max(u, v)) in todo)
                if gain > best_gain:
                    best, best_gain = v, gain
            q |= 1 << best
            cand &= adj[best]
            cand &= ~(1 << best)
        members = [u for u in range(n) if (q >> u) & 1]
        for a in members:
            for b in members:
                if a < b:
                    todo.discard((a, b))
        out.append(q)
    return out


class LabelDP:
    """Transition structure of the per-label k-run DP."""

    def __init__(self, k: int):
        self.k = k
        self.S = 2 * (k + 2) * 2
        S = self.S
        # transitions for j > 0 and j == 0 (where z is set by the choice)
        self.t0 = [np.zeros(S, dtype=np.int64) for _ in range(2)]
        self.t1 = [np.zeros(S, dtype=np.int64) for _ in range(2)]
        self.p0 = [np.zeros(S) for _ in range(2)]
        self.p1 = [np.zeros(S) for _ in range(2)]
        for first in (0, 1):
            for p in (0, 1):
                for r in range(k + 2):
                    for z in (0, 1):
                        s = self.index(p, r, z)
                        # x = 0
                        zz = 0 if first else z
                        self.t0[first][s] = self.index(0, r, zz)
                        if r == k + 1:
                            self.p0[first][s] = NEG
                        # x = 1
                        zz = 1 if first else z
                        if p:
                            self.t1[first][s] = self.index(1, r, zz)
                        else:
                            nr = r + 1
                            if nr <= k or (nr == k + 1 and zz == 1):
                                self.t1[first][s] = self.index(1, nr, zz)
                            else:
                                self.p1[first][s] = NEG
        self.end = np.full(S, NEG)
        for p in (0, 1):
            for r in range(k + 2):
                for z in (0, 1):
                    if r <= k or (p == 1 and z == 1):
                        self.end[self.index(p, r, z)] = 0.0

    def index(self, p: int, r: int, z: int) -> int:
        return (p * (self.k + 2) + r) * 2 + z

    def tables(self, w: np.ndarray, allow: np.ndarray) -> np.ndarray:
        """F[j, i, s]: best reduced weight of label i from interval j on."""
        n, m = w.shape
        F = np.empty((m + 1, n, self.S))
        F[m] = self.end
        for j in range(m - 1, -1, -1):
            first = 1 if j == 0 else 0
            nxt = F[j + 1]
            v0 = nxt[:, self.t0[first]] + self.p0[first]
            v1 = nxt[:, self.t1[first]] + self.p1[first] + w[:, j : j + 1]
            v1 = np.where(allow[:, j : j + 1], v1, NEG)
            F[j] = np.maximum(np.maximum(v0, v1), NEG)
        return F

    def argmax(self, F: np.ndarray, w: np.ndarray, allow: np.ndarray) -> np.ndarray:
        """0/1 activity of each label's best plan from the root state."""
        n, m = w.shape
        rows = np.arange(n)
        s = np.full(n, self.index(0, 0, 0), dtype=np.int64)
        x = np.zeros((n, m), dtype=bool)
        for j in range(m):
            first = 1 if j == 0 else 0
            nxt = F[j + 1]
            t0 = self.t0[first][s]
            t1 = self.t1[first][s]
            v0 = nxt[rows, t0] + self.p0[first][s]
            v1 = np.where(allow[:, j], nxt[rows, t1] + self.p1[first][s] + w[:, j], NEG)
            on = v1 > v0
            x[:, j] = on
            s = np.where(on, t1, t0)
        return x


def lagrangian_tables(lengths, allowed, adj, n, k, target, iters=150, deadline=None):
    """Tuned bound tables for the sweep.

    Tuning stops at ``deadline`` (a ``time.monotonic`` value); if the clique
    cover alone overruns it, None is returned and the sweep goes without.
    Returns ``(csuf, F)`` with ``csuf[j]`` the multiplier constant from
    interval ``j`` on and ``F`` flattened as ``[((j*n + i)*2 + p)*(k+2) + r)*2 + z]``.
    ``target`` is a known lower bound (the incumbent) used for step sizes.
    """
    m = len(lengths)
    L = np.asarray(lengths, dtype=float)
    allow = np.array([[(allowed[j] >> i) & 1 for j in range(m)] for i in range(n)], dtype=bool)
    cq_j, cq_mem = [], []
    for j in range(m):
        if deadline is not None and time.monotonic() > deadline:
            return None
        for q in clique_cover(allowed[j], adj[j], n):
            cq_j.append(j)
            cq_mem.append([i for i in range(n) if (q >> i) & 1])
    nq = len(cq_j)
    dp = LabelDP(k)
    if nq == 0:
        F = dp.tables(np.tile(L, (n, 1)), allow)
        return [0.0] * (m + 1), F.ravel().tolist()
    qj = np.array(cq_j)
    inc_q = np.concatenate([[q] * len(mem) for q, mem in enumerate(cq_mem)]).astype(np.int64)
    inc_i = np.concatenate(cq_mem).astype(np.int64)
    inc_j = qj[inc_q]
    mu = L[qj] * 0.5

    def evaluate(mu):
        w = np.tile(L, (n, 1))
        np.subtract.at(w, (inc_i, inc_j), mu[inc_q])
        F = dp.tables(w, allow)
        bound = mu.sum() + F[0, :, dp.index(0, 0, 0)].sum()
        return bound, w, F

    best_bound, w, F = evaluate(mu)
    best = (mu.copy(), F)
    theta = 2.0
    stall = 0
    for _ in range(iters):
        if best_bound <= target + 1e-9:
            break
        if deadline is not None and time.monotonic() > deadline:
            break
        x = dp.argmax(F, w, allow)
        g = 1.0 - np.bincount(inc_q, weights=x[inc_i, inc_j].astype(float), minlength=nq)
        g = np.where((mu <= 0) & (g > 0), 0.0, g)
        norm = float(g @ g)
        if norm == 0.0:
            break
        cur_bound = mu.sum() + F[0, :, dp.index(0, 0, 0)].sum()
        gap = max(cur_bound - target, 1e-6)
        mu = np.maximum(0.0, mu - theta * gap / norm * g)
        bound, w, F = evaluate(mu)
        if bound < best_bound - 1e-9:
            best_bound = bound
            best = (mu.copy(), F)
            stall = 0
        else:
            stall += 1
            if stall >= 5:
                theta *= 0.5
                stall = 0
                if theta < 1e-3:
                    break
    mu, F = best
    const = np.zeros(m)
    np.add.at(const, qj, mu)
    csuf = np.concatenate([np.cumsum(const[::-1])[::-1], [0.0]])
    return csuf.tolist(), F.ravel().tolist()
