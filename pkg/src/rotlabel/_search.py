"""Pure-Python exact search kernel.

Depth-first branch-and-bound that sweeps the atomic intervals of one
connected component in circular order and picks, per interval, the set of
active labels.  Labels are bits of an int.  State after interval ``j``:

* ``A``  -- labels active in interval ``j``
* ``Z``  -- labels active in interval 0 (their first run may merge with the
  last one around the circle)
* ``R``  -- thermometer code of linear run counts: ``R[t]`` holds the labels
  that have started at least ``t`` runs, ``t = 1..k+1``

Two dominance rules keep the branching small and never discard every
optimum: a label active in ``j-1`` keeps running unless a label chosen in
``j`` conflicts with it, and a run may only start in ``j`` if the label was
blocked (forbidden or conflicting) in ``j-1``.  Both are applied around
the wrap at the leaves.  States already reached with an equal or better
partial value are cut.

The compiled twin in ``_csearch.pyx`` implements the same algorithm and
must return identical results.
"""
from __future__ import annotations

import sys
import time

ACT_TOL = 1e-9
CHECK_EVERY = 2048
# cache caps; both caches only prune, so clearing them is always safe
MEMO_CAP = 2_000_000
SUF_CAP_DOUBLES = 4_000_000
# more candidate rows than this in one interval counts as an exhausted budget
CHOICE_CAP = 1 << 15


class _Timeout(Exception):
    pass


def popcount(x: int) -> int:
    return bin(x).count("1")


def split_components(cands: int, adj) -> list[int]:
    """Connected components of the graph induced on ``cands``, lowest bit first."""
    out = []
    rest = cands
    while rest:
        comp = frontier = rest & -rest
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            nb = adj[low.bit_length() - 1] & rest & ~comp
            comp |= nb
            frontier |= nb
        out.append(comp)
        rest &= ~comp
    return out


def clique_cover_bound(pool: int, adj) -> int:
    """Size of a greedy clique partition of ``pool``: an upper bound on its MIS."""
    count = 0
    while pool:
        low = pool & -pool
        pool ^= low
        q = adj[low.bit_length() - 1] & pool
        while q:
            u = q & -q
            pool ^= u
            q &= adj[u.bit_length() - 1]
        count += 1
    return count


def max_independent_set(cands: int, adj, deadline: float | None = None) -> int:
    """Maximum independent set inside ``cands`` (bitmask); deterministic.

    Raises ``_Timeout`` once ``deadline`` (``time.monotonic``) has passed.
    """
    result = 0
    for comp in split_components(cands, adj):
        best, done = _mis_connected(comp, adj, deadline)
        if not done:
            raise _Timeout
        result |= best
    return result


def max_independent_set_budget(cands: int, adj, time_limit: float) -> tuple[int, bool]:
    """Like :func:`max_independent_set`, but keeps the best set found on expiry.

    Returns ``(set, optimal)``.  Each component finishes at least one greedy
    descent, so the set is maximal even when the budget runs out.
    """
    deadline = time.monotonic() + time_limit
    result = 0
    optimal = True
    for comp in split_components(cands, adj):
        best, done = _mis_connected(comp, adj, deadline)
        optimal &= done
        result |= best
    return result, optimal


def _mis_connected(cands: int, adj, deadline: float | None) -> tuple[int, bool]:
    best = 0
    best_size = 0
    found = False
    nodes = 0

    def rec(chosen: int, size: int, pool: int):
        nonlocal best, best_size, found, nodes
        nodes += 1
        if found and deadline is not None and nodes % 1024 == 0 and time.monotonic() > deadline:
            raise _Timeout
        # vertices of degree <= 1 inside the pool are always safe to take
        while pool:
            v = -1
            p = pool
            while p:
                low = p & -p
                i = low.bit_length() - 1
                if popcount(adj[i] & pool) <= 1:
                    v = i
                    break
                p ^= low
            if v < 0:
                break
            chosen |= 1 << v
            size += 1
            pool &= ~((1 << v) | adj[v])
        if size + popcount(pool) <= best_size:
            return
        if not pool:
            best, best_size, found = chosen, size, True
            return
        if size + clique_cover_bound(pool, adj) <= best_size:
            return
        # branch on the highest-degree vertex (lowest index on ties)
        v = -1
        vd = -1
        p = pool
        while p:
            low = p & -p
            i = low.bit_length() - 1
            d = popcount(adj[i] & pool)
            if d > vd:
                v, vd = i, d
            p ^= low
        bit = 1 << v
        rec(chosen | bit, size + 1, pool & ~(bit | adj[v]))
        rec(chosen, size, pool & ~bit)

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 2 * popcount(cands) + 500))
    try:
        rec(0, 0, cands)
    except _Timeout:
        return best, False
    finally:
        sys.setrecursionlimit(old_limit)
    return best, True


def evaluate_rows(lengths, rows, k):
    """Activity and circular range count of per-interval active masks.

    Returns ``(activity, ranges)``; ``ranges`` is None when some label
    exceeds ``k`` ranges (``k <= 0`` means unlimited).
    """
    m = len(lengths)
    act = 0.0
    for j in range(m):
        act += lengths[j] * popcount(rows[j])
    labels = 0
    for r in rows:
        labels |= r
    total = 0
    while labels:
        low = labels & -labels
        i = low.bit_length() - 1
        labels ^= low
        on = [(rows[j] >> i) & 1 for j in range(m)]
        if all(on):
            cnt = 1
        else:
            cnt = sum(1 for j in range(m) if on[j] and not on[j - 1])
        if k > 0 and cnt > k:
            return act, None
        total += cnt
    return act, total


def sweep_search(lengths, allowed, adj, n, k, lexi, inc_act, inc_runs, inc_rows, time_limit, lag=None):
    """Exact optimum of one component under the kR-model.

    Parameters
    ----------
    lengths : list of float
        Atomic interval lengths, in sweep order.
    allowed : list of int
        Per interval, labels that may be active (not hard-forbidden).
    adj : list of list of int
        ``adj[j][i]``: labels conflicting with ``i`` during interval ``j``.
    n, k : int
        Label count and range budget.
    lexi : bool
        Break activity ties (within ``ACT_TOL``) by fewer ranges.
    inc_act, inc_runs, inc_rows
        Incumbent solution (rows may be None for "nothing yet").
    time_limit : float
        Seconds; on expiry the incumbent is returned with optimal=False.
    lag : (csuf, F), optional
        Lagrangian bound tables from :func:`_bounds.lagrangian_tables`.

    Returns
    -------
    (activity, ranges, rows, optimal, nodes)
    """
    m = len(lengths)
    full = (1 << n) - 1
    deadline = time.monotonic() + time_limit

    # suffix bounds per mask of labels that can still be active
    suf_cache: dict = {}

    def suffix(alive):
        row = suf_cache.get(alive)
        if row is None:
            row = [0.0] * (m + 1)
            acc = 0.0
            for j in range(m - 1, -1, -1):
                if time.monotonic() > deadline:
                    raise _Timeout
                acc += lengths[j] * popcount(max_independent_set(allowed[j] & alive, adj[j], deadline))
                row[j] = acc
            if len(suf_cache) * (m + 1) > SUF_CAP_DOUBLES:
                suf_cache.clear()
            suf_cache[alive] = row
        return row

    if lag is not None:
        csuf, lagF = lag

    best = {"act": inc_act, "runs": inc_runs, "rows": list(inc_rows) if inc_rows is not None else None}
    memo: dict = {}
    rows = [0] * m
    nodes = 0

    def better(act, runs):
        if act > best["act"] + ACT_TOL:
            return True
        if lexi and act >= best["act"] - ACT_TOL and runs < best["runs"]:
            return True
        return False

    def choices(j, A, Z, R):
        allow = allowed[j]
        adjj = adj[j]
        forced = R[k + 1]
        if forced & ~allow:
            return []
        can_start = (full & ~R[k]) | (Z & ~R[k + 1])
        cont = A & allow
        if j == 0:
            start = allow
        else:
            prev_allow = allowed[j - 1]
            adjp = adj[j - 1]
            start = 0
            p = allow & ~A & can_start
            while p:
                low = p & -p
                i = low.bit_length() - 1
                p ^= low
                if not (prev_allow >> i) & 1 or adjp[i] & A:
                    start |= low
        order = []
        p = cont
        while p:
            low = p & -p
            order.append(low.bit_length() - 1)
            p ^= low
        p = start
        while p:
            low = p & -p
            order.append(low.bit_length() - 1)
            p ^= low
        out = []
        no = len(order)

        def gen(t, S):
            if t == no:
                rest = cont & ~S
                while rest:
                    low = rest & -rest
                    if not adjj[low.bit_length() - 1] & S:
                        return
                    rest ^= low
                out.append(S)
                if len(out) >= CHOICE_CAP:
                    raise _Timeout
                return
            i = order[t]
            bit = 1 << i
            if not adjj[i] & S:
                gen(t + 1, S | bit)
            if not forced & bit:
                gen(t + 1, S)

        gen(0, 0)
        out.sort(key=lambda S: (-popcount(S), -popcount(S & A)))
        return out

    def rec(j, A, Z, R, g, q):
        nonlocal nodes
        nodes += 1
        if nodes % CHECK_EVERY == 0 and time.monotonic() > deadline:
            raise _Timeout
        if j == m:
            # wrap-around dominance: interval 0 follows interval m-1
            p = A & allowed[0] & ~Z
            while p:
                low = p & -p
                if not adj[0][low.bit_length() - 1] & Z:
                    return
                p ^= low
            p = Z & ~A
            while p:
                low = p & -p
                i = low.bit_length() - 1
                if (allowed[m - 1] >> i) & 1 and not adj[m - 1][i] & A:
                    return
                p ^= low
            runs = q - popcount(Z & A & R[2])
            if best["rows"] is None or better(g, runs):
                best["act"], best["runs"], best["rows"] = g, runs, list(rows)
            return
        can_start = (full & ~R[k]) | (Z & ~R[k + 1])
        ub = g + suffix((A | can_start) & full)[j]
        if lag is not None:
            lb = csuf[j]
            base = j * n
            for i in range(n):
                r = 0
                for t in range(1, k + 2):
                    r += (R[t] >> i) & 1
                lb += lagF[((((base + i) << 1) | ((A >> i) & 1)) * (k + 2) + r) * 2 + ((Z >> i) & 1)]
            if g + lb < ub:
                ub = g + lb
        if best["rows"] is not None:
            if ub < best["act"] - ACT_TOL:
                return
            if ub <= best["act"] + ACT_TOL:
                if not lexi:
                    return
                if q - popcount(Z) >= best["runs"]:
                    return
        key = (j, A, Z, R)
        prev = memo.get(key)
        if prev is not None:
            pg, pq = prev
            if pg >= g - ACT_TOL and (not lexi or pq <= q):
                return
        elif len(memo) >= MEMO_CAP:
            memo.clear()
        memo[key] = (g, q)
        length = lengths[j]
        for S in choices(j, A, Z, R):
            starts = S & ~A
            if starts:
                nr = list(R)
                for t in range(k + 1, 0, -1):
                    nr[t] |= starts & nr[t - 1]
                nr = tuple(nr)
            else:
                nr = R
            rows[j] = S
            rec(j + 1, S, S if j == 0 else Z, nr, g + length * popcount(S), q + popcount(starts))

    R0 = (full,) + (0,) * (k + 1)
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * m + 200))
    optimal = True
    try:
        rec(0, 0, 0, R0, 0.0, 0)
    except _Timeout:
        optimal = False
    finally:
        sys.setrecursionlimit(old_limit)
    if best["rows"] is None:
        return 0.0, 0, [0] * m, optimal, nodes
    return best["act"], best["runs"], best["rows"], optimal, nodes
