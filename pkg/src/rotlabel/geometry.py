"""Conflict sets of co-rotating anchored rectangles.

Each label turns by the same angle ``alpha`` about its own anchor.  Turning
the whole picture back by ``-alpha`` makes both rectangles axis-aligned
again, with the relative anchor vector rotated to
``(r cos(theta - alpha), r sin(theta - alpha))``.  The rectangles overlap
iff that vector lies in an open box, i.e. inside two slabs, and a circle
meets a slab in at most two arcs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .angular import TWO_PI, AngularSet, union_all
from .model import AnchoredLabel, Instance

# events closer than this are merged
EVENT_EPS = 1e-9


def _cos_band(r: float, lo: float, hi: float) -> AngularSet:
    """{beta : lo < r cos(beta) < hi}, as a closed set of arcs."""
    u, v = lo / r, hi / r
    if u >= 1.0 or v <= -1.0 or u >= v:
        return AngularSet.empty()
    # cos(beta) > u
    if u <= -1.0:
        above = AngularSet.full()
    else:
        t = math.acos(u)
        above = AngularSet.from_interval(-t, t)
    # cos(beta) < v
    if v >= 1.0:
        below = AngularSet.full()
    else:
        t = math.acos(v)
        below = AngularSet.from_interval(t, TWO_PI - t)
    return above.intersect(below)


def _box_set(
    dx: float, dy: float, xlo: float, xhi: float, ylo: float, yhi: float
) -> AngularSet:
    """Angles alpha with R(-alpha)(dx, dy) inside the box (xlo,xhi) x (ylo,yhi)."""
    r = math.hypot(dx, dy)
    if r == 0.0:
        raise ValueError("coincident anchors")
    theta = math.atan2(dy, dx)
    # x(alpha) = r cos(theta - alpha); y(alpha) = r cos(theta - pi/2 - alpha)
    xs = _cos_band(r, xlo, xhi)
    if xs.is_empty:
        return xs
    ys = _cos_band(r, ylo, yhi)
    if ys.is_empty:
        return ys
    return xs.reflected(theta).intersect(ys.reflected(theta - math.pi / 2))


def soft_conflict_set(l1: AnchoredLabel, l2: AnchoredLabel) -> AngularSet:
    """Rotation angles at which the two labels' interiors intersect."""
    dx, dy = l2.x - l1.x, l2.y - l1.y
    if dx == 0.0 and dy == 0.0:
        raise ValueError(f"labels {l1.id} and {l2.id} share an anchor")
    if math.hypot(dx, dy) >= l1.diagonal + l2.diagonal:
        return AngularSet.empty()
    a1x, a1y = l1.offset
    a2x, a2y = l2.offset
    return _box_set(
        dx,
        dy,
        a1x - a2x - l2.width,
        a1x + l1.width - a2x,
        a1y - a2y - l2.height,
        a1y + l1.height - a2y,
    )


def hard_conflict_set(l1: AnchoredLabel, l2: AnchoredLabel) -> AngularSet:
    """Rotation angles at which ``l1`` covers the anchor point of ``l2``."""
    dx, dy = l2.x - l1.x, l2.y - l1.y
    if dx == 0.0 and dy == 0.0:
        raise ValueError(f"labels {l1.id} and {l2.id} share an anchor")
    if math.hypot(dx, dy) > l1.diagonal:
        return AngularSet.empty()
    ax, ay = l1.offset
    return _box_set(dx, dy, ax, ax + l1.width, ay, ay + l1.height)


@dataclass(frozen=True)
class PairConflict:
    i: int
    j: int
    soft: AngularSet
    hard_i_covers_j: AngularSet
    hard_j_covers_i: AngularSet


def pair_conflict(l1: AnchoredLabel, l2: AnchoredLabel) -> Optional[PairConflict]:
    soft = soft_conflict_set(l1, l2)
    if soft.is_empty:
        return None
    # a label covering the other's anchor also overlaps the other label;
    # clip to absorb ulp differences between the two computations
    h12 = hard_conflict_set(l1, l2).intersect(soft)
    h21 = hard_conflict_set(l2, l1).intersect(soft)
    return PairConflict(l1.id, l2.id, soft, h12, h21)


def candidate_pairs(labels: Sequence[AnchoredLabel]) -> list[tuple[int, int]]:
    """Index pairs whose anchors are close enough to ever overlap."""
    if len(labels) < 2:
        return []
    diags = [l.diagonal for l in labels]
    cell = max(diags)
    grid: dict[tuple[int, int], list[int]] = {}
    for idx, l in enumerate(labels):
        grid.setdefault((math.floor(l.x / cell), math.floor(l.y / cell)), []).append(idx)
    out = []
    for (gx, gy), members in grid.items():
        for ox in range(-2, 3):
            for oy in range(-2, 3):
                other = grid.get((gx + ox, gy + oy))
                if other is None:
                    continue
                for a in members:
                    la = labels[a]
                    for b in other:
                        if b <= a:
                            continue
                        lb = labels[b]
                        if math.hypot(lb.x - la.x, lb.y - la.y) < diags[a] + diags[b]:
                            out.append((a, b))
    out.sort()
    return out


def merge_events(values: Iterable[float], eps: float = EVENT_EPS) -> list[float]:
    """Sorted event list with 0 and 2*pi, values within ``eps`` merged."""
    vals = sorted(v for v in values if eps < v < TWO_PI - eps)
    out = [0.0]
    for v in vals:
        if v - out[-1] > eps:
            out.append(v)
    if TWO_PI - out[-1] <= eps:
        out.pop()
    out.append(TWO_PI)
    return out


@dataclass(frozen=True)
class ConflictStats:
    n: int
    e: int
    c: int
    max_events_per_label: int


@dataclass(frozen=True)
class ConflictStructure:
    """All pairwise conflicts of an instance plus the global event list."""

    instance: Instance
    pairs: tuple[PairConflict, ...]
    events: tuple[float, ...]
    neighbors: Mapping[int, tuple[int, ...]]
    forbidden: Mapping[int, AngularSet]
    _lookup: Mapping[tuple[int, int], PairConflict] = field(repr=False, compare=False)

    @property
    def ids(self) -> list[int]:
        return self.instance.ids

    @property
    def stats(self) -> ConflictStats:
        per_label: dict[int, int] = {i: 0 for i in self.ids}
        for pc in self.pairs:
            ne = len(pc.soft.endpoints())
            per_label[pc.i] += ne
            per_label[pc.j] += ne
        return ConflictStats(
            n=len(self.instance),
            e=len(self.events) - 2,
            c=max((len(v) for v in self.neighbors.values()), default=0),
            max_events_per_label=max(per_label.values(), default=0),
        )

    def pair(self, i: int, j: int) -> Optional[PairConflict]:
        return self._lookup.get((i, j) if i < j else (j, i))

    def conflict(self, i: int, j: int) -> AngularSet:
        pc = self.pair(i, j)
        return pc.soft if pc is not None else AngularSet.empty()

    def hard_cover(self, coverer: int, covered: int) -> AngularSet:
        pc = self.pair(coverer, covered)
        if pc is None:
            return AngularSet.empty()
        return pc.hard_i_covers_j if pc.i == coverer else pc.hard_j_covers_i

    def components(self) -> list[list[int]]:
        """Connected components of the conflict graph, sorted."""
        seen: set[int] = set()
        comps = []
        for start in self.ids:
            if start in seen:
                continue
            stack = [start]
            seen.add(start)
            comp = []
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in self.neighbors[v]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            comps.append(sorted(comp))
        comps.sort()
        return comps

    def restrict(
        self, ids: Iterable[int], forbidden: Optional[Mapping[int, AngularSet]] = None
    ) -> "ConflictStructure":
        """Sub-structure on ``ids``; pairs leaving the subset are dropped.

        ``forbidden`` overrides the per-label hard-conflict sets (defaults to
        the global ones, which also account for points outside the subset).
        """
        keep = set(ids)
        sub = self.instance.subset(keep)
        pairs = [pc for pc in self.pairs if pc.i in keep and pc.j in keep]
        forb = {i: (forbidden[i] if forbidden is not None and i in forbidden else self.forbidden[i]) for i in sub.ids}
        return _assemble(sub, pairs, forb)


def _assemble(
    inst: Instance, pairs: list[PairConflict], forbidden: Mapping[int, AngularSet]
) -> ConflictStructure:
    pairs = sorted(pairs, key=lambda pc: (pc.i, pc.j))
    nbrs: dict[int, list[int]] = {i: [] for i in inst.ids}
    pts: list[float] = []
    for pc in pairs:
        nbrs[pc.i].append(pc.j)
        nbrs[pc.j].append(pc.i)
        pts.extend(pc.soft.endpoints())
        pts.extend(pc.hard_i_covers_j.endpoints())
        pts.extend(pc.hard_j_covers_i.endpoints())
    for s in forbidden.values():
        pts.extend(s.endpoints())
    return ConflictStructure(
        instance=inst,
        pairs=tuple(pairs),
        events=tuple(merge_events(pts)),
        neighbors={i: tuple(sorted(v)) for i, v in nbrs.items()},
        forbidden=dict(forbidden),
        _lookup={(pc.i, pc.j): pc for pc in pairs},
    )


def build_conflicts(inst: Instance) -> ConflictStructure:
    """Conflict sets for every pair that ever overlaps, plus events."""
    labels = sorted(inst.labels, key=lambda l: l.id)
    pairs = []
    for a, b in candidate_pairs(labels):
        pc = pair_conflict(labels[a], labels[b])
        if pc is not None:
            pairs.append(pc)
    hard_parts: dict[int, list[AngularSet]] = {l.id: [] for l in labels}
    for pc in pairs:
        hard_parts[pc.i].append(pc.hard_i_covers_j)
        hard_parts[pc.j].append(pc.hard_j_covers_i)
    forbidden = {i: union_all(v) for i, v in hard_parts.items()}
    return _assemble(inst, pairs, forbidden)
