"""Greedy active-range assignment (GreedyMax, GreedyLowCost, GreedyBestRatio).

All three share one loop: pick a pending label, give it its current
maximum active range, then shrink the admissible sets of its pending
neighbours.  Under the kR-model a label re-enters the pending set with
its next largest admissible range until it holds k ranges.
"""
from __future__ import annotations

import enum
import heapq
from bisect import bisect_left, insort
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .angular import EMPTY_INTERVAL, AngularSet, CircularInterval, length_key
from .geometry import ConflictStructure
from .model import ModelConfig, RangeKind, RotationLabeling

# ranges shorter than this are never assigned
MIN_RANGE = 1e-9
COST_EPS = 1e-12


class GreedyStrategy(enum.Enum):
    MAX = "max"
    LOW_COST = "lowcost"
    BEST_RATIO = "bestratio"


@dataclass
class CandidateState:
    label: int
    admissible: AngularSet
    imax: CircularInterval = EMPTY_INTERVAL
    cost: float = 0.0
    assigned: list[CircularInterval] = field(default_factory=list)
    pending: bool = True
    version: int = 0


def max_active_range(state: CandidateState) -> CircularInterval:
    """Longest admissible interval of the label (full circle if unconstrained)."""
    return state.admissible.longest()


def assignment_cost(
    state: CandidateState, states: Mapping[int, CandidateState], cs: ConflictStructure
) -> float:
    """Total shrinkage of pending neighbours' maximum ranges if ``state`` commits."""
    if state.imax.is_empty:
        return 0.0
    rset = AngularSet.from_intervals([state.imax])
    total = 0.0
    for nb in cs.neighbors[state.label]:
        ns = states.get(nb)
        if ns is None or not ns.pending:
            continue
        cut = cs.conflict(state.label, nb).intersect(rset)
        if cut.is_empty:
            continue
        after = ns.admissible.difference(cut).longest().length
        shrink = ns.imax.length - after
        if shrink > 0.0:
            total += shrink
    return total


def _priority(strategy: GreedyStrategy, st: CandidateState) -> tuple:
    lk = length_key(st.imax.length)
    if strategy is GreedyStrategy.MAX:
        return (-lk, st.label)
    if strategy is GreedyStrategy.LOW_COST:
        return (round(st.cost, 9), -lk, st.label)
    if st.cost <= COST_EPS:
        return (0, -lk, 0.0, st.label)
    return (1, 0.0, -round(st.imax.length / st.cost, 9), st.label)


def _initial_admissible(cs: ConflictStructure, cfg: ModelConfig, lid: int) -> AngularSet:
    if cfg.hard:
        return cs.forbidden[lid].complement()
    return AngularSet.full()


def _budget(cfg: ModelConfig) -> Optional[int]:
    if cfg.ranges is RangeKind.ZERO_ONE:
        raise ValueError("greedy heuristics support the kR- and inf-models only")
    return cfg.max_ranges


def _finish(
    cs: ConflictStructure,
    cfg: ModelConfig,
    assigned: Mapping[int, list[CircularInterval]],
    fixed: Mapping[int, AngularSet],
    name: str,
) -> RotationLabeling:
    active = {}
    for lid in cs.ids:
        if lid in fixed:
            active[lid] = fixed[lid]
        else:
            active[lid] = AngularSet.from_intervals(assigned.get(lid, ()))
    meta = {"solver": name}
    if cfg.ranges is RangeKind.UNLIMITED:
        meta["extension"] = "greedy-unlimited-ranges"
    return RotationLabeling(active, cfg, meta)


def greedy_solve(
    cs: ConflictStructure,
    cfg: ModelConfig,
    strategy: GreedyStrategy = GreedyStrategy.MAX,
    *,
    fixed: Optional[Mapping[int, AngularSet]] = None,
    fast: bool = False,
    trace: Optional[list] = None,
) -> RotationLabeling:
    """Run one greedy heuristic.

    Parameters
    ----------
    fixed : mapping, optional
        Labels whose activity is already decided; they are never selected
        but constrain their neighbours.
    fast : bool
        For ``MAX`` only: use per-label interval pools instead of set
        recomputation.  Produces the identical labeling.
    trace : list, optional
        Receives ``(label, range length)`` for every commit, in order.
    """
    strategy = GreedyStrategy(strategy)
    k = _budget(cfg)
    fixed = dict(fixed or {})
    if fast and strategy is GreedyStrategy.MAX:
        return _greedy_max_pools(cs, cfg, k, fixed, trace)

    states: dict[int, CandidateState] = {}
    for lid in cs.ids:
        if lid not in fixed:
            states[lid] = CandidateState(lid, _initial_admissible(cs, cfg, lid))
    for fid, fset in fixed.items():
        for nb in cs.neighbors.get(fid, ()):
            ns = states.get(nb)
            if ns is not None:
                ns.admissible = ns.admissible.difference(cs.conflict(fid, nb).intersect(fset))
    for st in states.values():
        st.imax = max_active_range(st)
        st.pending = st.imax.length >= MIN_RANGE

    uses_cost = strategy is not GreedyStrategy.MAX
    if uses_cost:
        for st in states.values():
            if st.pending:
                st.cost = assignment_cost(st, states, cs)

    heap = [(_priority(strategy, st), st.label, 0) for st in states.values() if st.pending]
    heapq.heapify(heap)

    while heap:
        _, lid, ver = heapq.heappop(heap)
        st = states[lid]
        if not st.pending or ver != st.version:
            continue
        rng = st.imax
        if trace is not None:
            trace.append((lid, rng.length))
        rset = AngularSet.from_intervals([rng])
        st.assigned.append(rng)
        st.admissible = st.admissible.difference(rset)
        touched = [lid]
        for nb in cs.neighbors[lid]:
            ns = states.get(nb)
            if ns is None or not ns.pending:
                continue
            cut = cs.conflict(lid, nb).intersect(rset)
            if cut.is_empty:
                continue
            ns.admissible = ns.admissible.difference(cut)
            ns.imax = max_active_range(ns)
            if ns.imax.length < MIN_RANGE:
                ns.pending = False
            touched.append(nb)
        if k is not None and len(st.assigned) >= k:
            st.pending = False
        else:
            st.imax = max_active_range(st)
            st.pending = st.imax.length >= MIN_RANGE

        if uses_cost:
            dirty = set()
            for t in touched:
                dirty.add(t)
                dirty.update(cs.neighbors[t])
            rekey = []
            for d in sorted(dirty):
                ds = states.get(d)
                if ds is not None and ds.pending:
                    ds.cost = assignment_cost(ds, states, cs)
                    rekey.append(ds)
        else:
            rekey = [states[t] for t in touched if states[t].pending]
        for ds in rekey:
            ds.version += 1
            heapq.heappush(heap, (_priority(strategy, ds), ds.label, ds.version))

    assigned = {lid: st.assigned for lid, st in states.items()}
    name = {"max": "gm", "lowcost": "glc", "bestratio": "gbr"}[strategy.value]
    return _finish(cs, cfg, assigned, fixed, name)


class _IntervalPool:
    """Disjoint admissible intervals of one label.

    Sorted starts (for range queries) plus a lazy max-heap keyed like
    :meth:`AngularSet.longest`.  At most one interval wraps through 0, and
    it has the largest start.
    """

    __slots__ = ("starts", "ends", "heap")

    def __init__(self, adm: AngularSet):
        self.starts: list[float] = []
        self.ends: dict[float, float] = {}
        self.heap: list[tuple[float, float, float]] = []
        for iv in adm.intervals:
            self._add(iv)

    def _add(self, iv: CircularInterval) -> None:
        insort(self.starts, iv.start)
        self.ends[iv.start] = iv.end
        heapq.heappush(self.heap, (-length_key(iv.length), iv.start, iv.end))

    def _remove(self, start: float) -> None:
        del self.starts[bisect_left(self.starts, start)]
        del self.ends[start]

    def top(self) -> CircularInterval:
        heap, ends = self.heap, self.ends
        while heap:
            _, s, e = heap[0]
            if ends.get(s) == e:
                return CircularInterval(s, e)
            heapq.heappop(heap)
        return EMPTY_INTERVAL

    def drop(self, iv: CircularInterval) -> None:
        self._remove(iv.start)

    def subtract(self, cut: AngularSet) -> None:
        starts, ends = self.starts, self.ends
        if not starts:
            return
        last = starts[-1]
        wrap = last if last > ends[last] else None
        plain_count = len(starts) - (1 if wrap is not None else 0)
        hits = set()
        for lo, hi in cut.pieces:
            if wrap is not None and (wrap < hi or lo < ends[wrap]):
                hits.add(wrap)
            t = min(bisect_left(starts, hi), plain_count) - 1
            while t >= 0:
                s = starts[t]
                if ends[s] > lo:
                    hits.add(s)
                    t -= 1
                else:
                    break
        for s in sorted(hits):
            iv = CircularInterval(s, ends[s])
            rest = AngularSet.from_intervals([iv]).difference(cut)
            self._remove(s)
            for piece in rest.intervals:
                self._add(piece)


def _greedy_max_pools(
    cs: ConflictStructure,
    cfg: ModelConfig,
    k: Optional[int],
    fixed: Mapping[int, AngularSet],
    trace: Optional[list],
) -> RotationLabeling:
    pools: dict[int, _IntervalPool] = {}
    for lid in cs.ids:
        if lid in fixed:
            continue
        adm = _initial_admissible(cs, cfg, lid)
        for fid in cs.neighbors[lid]:
            if fid in fixed:
                adm = adm.difference(cs.conflict(fid, lid).intersect(fixed[fid]))
        pools[lid] = _IntervalPool(adm)

    assigned: dict[int, list[CircularInterval]] = {lid: [] for lid in pools}
    pending: set[int] = set()
    version = dict.fromkeys(pools, 0)
    heap = []
    for lid, pool in pools.items():
        top = pool.top()
        if top.length >= MIN_RANGE:
            pending.add(lid)
            heap.append(((-length_key(top.length), lid), lid, 0))
    heapq.heapify(heap)

    while heap:
        _, lid, ver = heapq.heappop(heap)
        if lid not in pending or ver != version[lid]:
            continue
        pool = pools[lid]
        rng = pool.top()
        if trace is not None:
            trace.append((lid, rng.length))
        rset = AngularSet.from_intervals([rng])
        assigned[lid].append(rng)
        pool.drop(rng)
        touched = [lid]
        for nb in cs.neighbors[lid]:
            if nb not in pending:
                continue
            cut = cs.conflict(lid, nb).intersect(rset)
            if cut.is_empty:
                continue
            pools[nb].subtract(cut)
            if pools[nb].top().length < MIN_RANGE:
                pending.discard(nb)
            else:
                touched.append(nb)
        if (k is not None and len(assigned[lid]) >= k) or pool.top().length < MIN_RANGE:
            pending.discard(lid)
        for t in touched:
            if t in pending:
                version[t] += 1
                top = pools[t].top()
                heapq.heappush(heap, ((-length_key(top.length), t), t, version[t]))

    return _finish(cs, cfg, assigned, fixed, "gm")
