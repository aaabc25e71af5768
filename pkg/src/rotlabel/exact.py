"""Exact optimization over atomic intervals.

Activity is constant on every atomic interval (the gap between two
consecutive events), so an optimal labeling can be searched for as one
active set per interval.  Components of the conflict graph are solved
independently; inside a component, consecutive atomic intervals with the
same constraint pattern are merged before the search.
"""
from __future__ import annotations

import logging
import math
import time
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Mapping, Optional

from . import kernels
from ._bounds import lagrangian_tables
from ._search import evaluate_rows, popcount
from .angular import TWO_PI, AngularSet
from .geometry import ConflictStructure
from .greedy import GreedyStrategy, greedy_solve
from .model import ModelConfig, RangeKind, RotationLabeling, total_activity

log = logging.getLogger(__name__)

DEFAULT_TIME_LIMIT = 60.0


@dataclass(frozen=True)
class AtomicIntervalModel:
    """Binary program over atomic intervals.

    ``conflict_rows[(a, b)]`` lists the intervals on which labels ``a`` and
    ``b`` may not both be active; ``fixed_zero[i]`` lists the intervals on
    which label ``i`` is forbidden (hard mode).  In the 0/1-model only
    ``pairs`` and ``excluded`` matter.
    """

    cfg: ModelConfig
    minimize_ranges: bool
    labels: tuple[int, ...]
    events: tuple[float, ...]
    conflict_rows: Mapping[tuple[int, int], tuple[int, ...]]
    fixed_zero: Mapping[int, tuple[int, ...]]
    pairs: tuple[tuple[int, int], ...]
    excluded: tuple[int, ...] = ()
    cs: Optional[ConflictStructure] = field(default=None, repr=False, compare=False)

    @property
    def m(self) -> int:
        return len(self.events) - 1

    @property
    def lengths(self) -> list[float]:
        e = self.events
        return [e[j + 1] - e[j] for j in range(len(e) - 1)]

    @property
    def s(self) -> float:
        return min(self.lengths)

    @property
    def k(self) -> Optional[int]:
        return self.cfg.max_ranges

    @property
    def zero_one(self) -> bool:
        return self.cfg.ranges is RangeKind.ZERO_ONE

    @property
    def n_activity_vars(self) -> int:
        if self.zero_one:
            return len(self.labels)
        return self.m * len(self.labels)

    @property
    def n_begin_vars(self) -> int:
        if self.cfg.ranges is RangeKind.K_RANGES:
            return self.m * len(self.labels)
        return 0

    @property
    def n_conflict_constraints(self) -> int:
        if self.zero_one:
            return len(self.pairs)
        return sum(len(v) for v in self.conflict_rows.values())

    @property
    def n_run_constraints(self) -> int:
        return self.n_begin_vars

    @property
    def n_budget_constraints(self) -> int:
        return len(self.labels) if self.cfg.ranges is RangeKind.K_RANGES else 0

    def components(self) -> list[list[int]]:
        """Connected components of the pairs that conflict somewhere."""
        nb: dict[int, list[int]] = {i: [] for i in self.labels}
        edges = self.pairs if self.zero_one else [p for p, rows in self.conflict_rows.items() if rows]
        for a, b in edges:
            nb[a].append(b)
            nb[b].append(a)
        seen: set[int] = set()
        out = []
        for s in self.labels:
            if s in seen:
                continue
            seen.add(s)
            stack, comp = [s], []
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in nb[v]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            out.append(sorted(comp))
        out.sort()
        return out


@dataclass
class ExactSolution:
    labeling: RotationLabeling
    objective: float
    ranges: int
    optimal: dict[int, bool]
    nodes: int = 0
    components: int = 0
    penalty: float = 0.0

    @property
    def proven(self) -> bool:
        return all(self.optimal.values())

    @property
    def penalized(self) -> float:
        """Activity minus the per-range penalty (equals objective when unused)."""
        return self.objective - self.penalty * self.ranges


def _rows_in(set_: AngularSet, mids: list[float]) -> tuple[int, ...]:
    out: list[int] = []
    for lo, hi in set_.pieces:
        out.extend(range(bisect_left(mids, lo), bisect_left(mids, hi)))
    return tuple(sorted(set(out)))


def build_model(cs: ConflictStructure, cfg: ModelConfig, minimize_ranges: bool = False) -> AtomicIntervalModel:
    if cfg.ranges is RangeKind.K_RANGES and cfg.k <= 0:
        raise ValueError("kR model needs k >= 1")
    if minimize_ranges and cfg.ranges is not RangeKind.K_RANGES:
        raise ValueError("range minimization applies to the kR-model only")
    events = tuple(cs.events)
    mids = [(events[j] + events[j + 1]) / 2 for j in range(len(events) - 1)]
    labels = tuple(sorted(cs.ids))
    rows = {}
    pairs = []
    for pc in cs.pairs:
        rows[(pc.i, pc.j)] = _rows_in(pc.soft, mids)
        pairs.append((pc.i, pc.j))
    fixed: dict[int, tuple[int, ...]] = {}
    excluded: tuple[int, ...] = ()
    if cfg.hard:
        for i in labels:
            r = _rows_in(cs.forbidden[i], mids)
            if r:
                fixed[i] = r
        excluded = tuple(i for i in labels if not cs.forbidden[i].is_empty)
    return AtomicIntervalModel(
        cfg=cfg,
        minimize_ranges=minimize_ranges,
        labels=labels,
        events=events,
        conflict_rows=rows,
        fixed_zero=fixed,
        pairs=tuple(sorted(pairs)),
        excluded=excluded,
        cs=cs,
    )


# -- per-component preparation ---------------------------------------------


@dataclass
class _Component:
    labels: list[int]
    blocks: list[tuple[int, int]]  # [first, last] atomic interval, inclusive
    lengths: list[float]
    allowed: list[int]
    adj: list[list[int]]


def _prepare(model: AtomicIntervalModel, comp: list[int]) -> _Component:
    m = model.m
    index = {lid: t for t, lid in enumerate(comp)}
    n = len(comp)
    cset = set(comp)
    crow = [(index[a], index[b], set(r)) for (a, b), r in model.conflict_rows.items() if a in cset and r]
    frow = [(index[i], set(model.fixed_zero[i])) for i in comp if i in model.fixed_zero]
    cuts = {0}
    for rowset in [r for _, _, r in crow] + [r for _, r in frow]:
        for j in rowset:
            if j - 1 not in rowset:
                cuts.add(j)
            if j + 1 not in rowset and j + 1 < m:
                cuts.add(j + 1)
    starts = sorted(cuts)
    lengths_all = model.lengths
    full = (1 << n) - 1
    blocks, lengths, allowed, adj = [], [], [], []
    for t, s in enumerate(starts):
        e = starts[t + 1] - 1 if t + 1 < len(starts) else m - 1
        blocks.append((s, e))
        lengths.append(math.fsum(lengths_all[s : e + 1]))
        al = full
        for li, r in frow:
            if s in r:
                al &= ~(1 << li)
        ad = [0] * n
        for a, b, r in crow:
            if s in r:
                ad[a] |= 1 << b
                ad[b] |= 1 << a
        allowed.append(al)
        adj.append(ad)
    return _Component(list(comp), blocks, lengths, allowed, adj)


def _count_independent(pool: int, adj: list[int], cap: int) -> int:
    count = 0
    stack = [pool]
    while stack:
        p = stack.pop()
        if not p:
            count += 1
            if count >= cap:
                return cap
            continue
        low = p & -p
        v = low.bit_length() - 1
        stack.append(p & ~low)
        stack.append(p & ~low & ~adj[v])
    return count


def _start_block(comp: _Component) -> int:
    """Block whose active-set choices are fewest; the sweep starts there."""
    best, best_cnt = 0, None
    cap = 512 if len(comp.labels) <= 64 else 32  # counting is costly on big components
    for b in range(len(comp.blocks)):
        cnt = _count_independent(comp.allowed[b], comp.adj[b], cap)
        if best_cnt is None or cnt < best_cnt:
            best, best_cnt = b, cnt
    return best


def _rows_from_labeling(comp: _Component, events, phi: RotationLabeling) -> list[int]:
    rows = []
    for s, e in comp.blocks:
        mid = (events[s] + events[e + 1]) / 2
        mask = 0
        for t, lid in enumerate(comp.labels):
            if mid in phi[lid]:
                mask |= 1 << t
        rows.append(mask)
    return rows


def _rows_feasible(comp: _Component, rows: list[int]) -> bool:
    for b, S in enumerate(rows):
        if S & ~comp.allowed[b]:
            return False
        p = S
        while p:
            low = p & -p
            if comp.adj[b][low.bit_length() - 1] & S:
                return False
            p ^= low
    return True


def _solve_component_kr(model, comp: _Component, k, lexi, warm, time_limit, backend):
    nb = len(comp.blocks)
    n = len(comp.labels)
    max_runs = 1 if nb == 1 else nb // 2
    if not lexi and k >= max_runs:
        return _solve_component_unlimited(comp, backend, time_limit)
    inc_rows = None
    inc_act, inc_runs = 0.0, 0
    if warm is not None:
        rows = _rows_from_labeling(comp, model.events, warm)
        if _rows_feasible(comp, rows):
            act, runs = evaluate_rows(comp.lengths, rows, k)
            if runs is not None:
                inc_rows, inc_act, inc_runs = rows, act, runs
    b0 = _start_block(comp)
    rot = lambda seq: list(seq[b0:]) + list(seq[:b0])  # noqa: E731
    lengths, allowed, adj = rot(comp.lengths), rot(comp.allowed), rot(comp.adj)
    # bound tuning may use half the budget; the search gets the rest
    t0 = time.monotonic()
    lag = lagrangian_tables(lengths, allowed, adj, n, k, inc_act, deadline=t0 + time_limit / 2) if n > 1 else None
    remaining = time_limit - (time.monotonic() - t0)
    if remaining <= 0:
        return (list(inc_rows) if inc_rows is not None else [0] * nb), False, 0
    act, runs, rows, optimal, nodes = kernels.sweep_search(
        lengths,
        allowed,
        adj,
        n,
        k,
        lexi,
        inc_act,
        inc_runs,
        rot(inc_rows) if inc_rows is not None else None,
        remaining,
        lag,
        backend=backend,
    )
    rows = list(rows[nb - b0 :]) + list(rows[: nb - b0]) if b0 else list(rows)
    return rows, optimal, nodes


def _solve_component_unlimited(comp: _Component, backend, time_limit: float = DEFAULT_TIME_LIMIT):
    n = len(comp.labels)
    deadline = time.monotonic() + time_limit
    rows = []
    optimal = True
    for b in range(len(comp.blocks)):
        # an expired budget still gets a maximal set for every block
        left = max(deadline - time.monotonic(), 0.0)
        S, done = kernels.max_independent_set_budget(comp.allowed[b], comp.adj[b], n, left, backend)
        rows.append(S)
        optimal &= done
    return rows, optimal, len(rows)


def _labeling_from_rows(model, comps_rows, meta) -> RotationLabeling:
    ev = model.events
    pieces: dict[int, list[tuple[float, float]]] = {i: [] for i in model.labels}
    for comp, rows in comps_rows:
        for b, S in enumerate(rows):
            s, e = comp.blocks[b]
            for t, lid in enumerate(comp.labels):
                if (S >> t) & 1:
                    pieces[lid].append((ev[s], ev[e + 1]))
    active = {i: AngularSet(p) for i, p in pieces.items()}
    return RotationLabeling(active, model.cfg, meta)


def _solve_zero_one(model: AtomicIntervalModel, backend, time_limit: float = DEFAULT_TIME_LIMIT) -> ExactSolution:
    chosen: list[int] = []
    comps = model.components()
    excluded = set(model.excluded)
    pairset = set(model.pairs)
    nodes = 0
    opt: dict[int, bool] = {}
    for comp in comps:
        index = {lid: t for t, lid in enumerate(comp)}
        adj = [0] * len(comp)
        for a in comp:
            for b in comp:
                if a < b and (a, b) in pairset:
                    adj[index[a]] |= 1 << index[b]
                    adj[index[b]] |= 1 << index[a]
        cands = 0
        for t, lid in enumerate(comp):
            if lid not in excluded:
                cands |= 1 << t
        S, done = kernels.max_independent_set_budget(cands, adj, len(comp), time_limit, backend)
        if not done:
            log.warning("component %s exhausted its search budget; keeping incumbent", comp[0])
        opt[comp[0]] = done
        nodes += 1
        chosen.extend(lid for t, lid in enumerate(comp) if (S >> t) & 1)
    cs = set(chosen)
    active = {i: (AngularSet.full() if i in cs else AngularSet.empty()) for i in model.labels}
    meta = {"solver": "exact"}
    if not all(opt.values()):
        meta["degraded"] = True
    phi = RotationLabeling(active, model.cfg, meta)
    return ExactSolution(phi, TWO_PI * len(cs), len(cs), opt, nodes, len(comps))


def solve_exact(
    model: AtomicIntervalModel,
    time_limit: float = DEFAULT_TIME_LIMIT,
    *,
    backend: Optional[str] = None,
    warm_start: bool = True,
) -> ExactSolution:
    """Optimal labeling per connected component.

    ``time_limit`` applies to each component separately.  A component that
    runs out of time keeps the best labeling found (at worst the greedy
    warm start) and is reported with ``optimal[...] = False``.
    """
    if model.zero_one:
        return _solve_zero_one(model, backend, time_limit)
    lexi = model.minimize_ranges
    k = model.k
    warm = None
    if k is not None and warm_start and model.cs is not None:
        tries = [greedy_solve(model.cs, model.cfg, st) for st in GreedyStrategy]
        warm = max(tries, key=total_activity)
    comps = model.components()
    results = []
    optimal: dict[int, bool] = {}
    nodes = 0
    for labels in comps:
        comp = _prepare(model, labels)
        if k is None:
            rows, opt, nd = _solve_component_unlimited(comp, backend, time_limit)
        else:
            rows, opt, nd = _solve_component_kr(model, comp, k, lexi, warm, time_limit, backend)
        if not opt:
            log.warning("component %s exhausted its search budget; keeping incumbent", labels[0])
        results.append((comp, rows))
        optimal[labels[0]] = opt
        nodes += nd
    meta = {"solver": "exact"}
    if not all(optimal.values()):
        meta["degraded"] = True
    phi = _labeling_from_rows(model, results, meta)
    act = 0.0
    ranges = 0
    for comp, rows in results:
        a, r = evaluate_rows(comp.lengths, rows, 0)
        act += a
        ranges += r
    penalty = model.s / 2 if lexi else 0.0
    return ExactSolution(phi, act, ranges, optimal, nodes, len(comps), penalty)


def minimize_ranges_solve(
    model: AtomicIntervalModel, time_limit: float = DEFAULT_TIME_LIMIT, *, backend: Optional[str] = None
) -> ExactSolution:
    """Maximum total activity, then fewest active ranges among the optima."""
    if model.cfg.ranges is not RangeKind.K_RANGES or not model.minimize_ranges:
        raise ValueError("needs a kR model built with minimize_ranges=True")
    return solve_exact(model, time_limit, backend=backend)


def solve(
    cs: ConflictStructure,
    cfg: ModelConfig,
    time_limit: float = DEFAULT_TIME_LIMIT,
    minimize_ranges: bool = False,
    backend: Optional[str] = None,
) -> ExactSolution:
    """Build the model and solve it."""
    return solve_exact(build_model(cs, cfg, minimize_ranges), time_limit, backend=backend)


from .lpformat import emit_lp, read_solution, write_solution  # noqa: E402,F401
