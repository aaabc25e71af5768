"""Shifting-grid quarter approximation with optional greedy completion.

The plane is cut into square cells of side twice the largest label
diagonal.  Keeping every other row and column leaves cells that are at
least one side apart, so labels in different kept cells never interact.
Each of the four parity classes is solved cell by cell with the exact
solver; one of them holds at least a quarter of the optimum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .angular import AngularSet
from .exact import DEFAULT_TIME_LIMIT, solve
from .geometry import ConflictStructure
from .greedy import GreedyStrategy, greedy_solve
from .model import Instance, ModelConfig, RangeKind, RotationLabeling, total_activity

PARITIES = ((0, 0), (0, 1), (1, 0), (1, 1))

Cell = tuple[int, int]


@dataclass
class GridDecomposition:
    cell_side: float
    origin: tuple[float, float]
    cell_of: dict[int, Cell]
    cells: dict[Cell, list[int]]
    subinstances: list[list[Cell]]
    buffers: dict[Cell, list[int]] = field(default_factory=dict)

    def kept_labels(self, sub: int) -> list[int]:
        return sorted(i for c in self.subinstances[sub] for i in self.cells[c])


def _rect_distance(px: float, py: float, x0: float, y0: float, x1: float, y1: float) -> float:
    dx = max(x0 - px, 0.0, px - x1)
    dy = max(y0 - py, 0.0, py - y1)
    return math.hypot(dx, dy)


def decompose(inst: Instance, cs: Optional[ConflictStructure] = None) -> GridDecomposition:
    """Grid cells, parity classes and hard-conflict buffers.

    ``cs`` is accepted for symmetry with the solver API; the grid depends on
    the instance geometry only.
    """
    if len(inst) == 0:
        return GridDecomposition(1.0, (0.0, 0.0), {}, {}, [[] for _ in PARITIES])
    max_diag = max(l.diagonal for l in inst)
    side = 2.0 * max_diag
    x0, y0, _, _ = inst.bounds()
    cell_of: dict[int, Cell] = {}
    cells: dict[Cell, list[int]] = {}
    for l in inst:
        c = (math.floor((l.y - y0) / side), math.floor((l.x - x0) / side))
        cell_of[l.id] = c
        cells.setdefault(c, []).append(l.id)
    for c in cells:
        cells[c].sort()
    subs = [sorted(c for c in cells if (c[0] % 2, c[1] % 2) == par) for par in PARITIES]
    by_id = inst.by_id()
    buffers: dict[Cell, list[int]] = {}
    for (r, col) in cells:
        bx0, by0 = x0 + col * side, y0 + r * side
        near = []
        # the buffer is narrower than a cell, so only the 8 neighbours matter
        for dr in (-1, 0, 1):
            for dc in (-1, 0, 1):
                if dr == 0 and dc == 0:
                    continue
                for i in cells.get((r + dr, col + dc), ()):
                    l = by_id[i]
                    if _rect_distance(l.x, l.y, bx0, by0, bx0 + side, by0 + side) <= max_diag:
                        near.append(i)
        buffers[(r, col)] = sorted(near)
    return GridDecomposition(side, (x0, y0), cell_of, cells, subs, buffers)


def qapx_solve(
    inst: Instance,
    cs: ConflictStructure,
    cfg: ModelConfig,
    post: Optional[GreedyStrategy] = None,
    time_limit: float = DEFAULT_TIME_LIMIT,
    *,
    backend: Optional[str] = None,
) -> RotationLabeling:
    """Best of the four grid subinstances, each cell solved exactly.

    With ``post`` the chosen greedy fills in the labels outside the kept
    cells of every subinstance before the best one is picked.
    """
    if post is not None and cfg.ranges is RangeKind.ZERO_ONE:
        raise ValueError("greedy post-processing needs the kR- or inf-model")
    grid = decompose(inst, cs)
    best: Optional[RotationLabeling] = None
    best_t = -1.0
    degraded = False
    for idx, kept in enumerate(grid.subinstances):
        partial: dict[int, AngularSet] = {}
        for cell in kept:
            ids = grid.cells[cell]
            # global forbidden sets equal the buffer's: a label reaches at
            # most its diagonal, which the buffer width covers
            sol = solve(cs.restrict(ids), cfg, time_limit, backend=backend)
            degraded |= not sol.proven
            for i in ids:
                partial[i] = sol.labeling[i]
        if post is not None:
            phi = greedy_solve(cs, cfg, post, fixed=partial)
        else:
            active = {i: partial.get(i, AngularSet.empty()) for i in cs.ids}
            phi = RotationLabeling(active, cfg)
        t = total_activity(phi)
        if t > best_t:
            best, best_t = phi, t
            best_idx = idx
    name = "qapx" if post is None else {"max": "qgm", "lowcost": "qglc", "bestratio": "qgbr"}[GreedyStrategy(post).value]
    meta = {"solver": name, "subinstance": best_idx}
    if degraded:
        meta["degraded"] = True
    assert best is not None
    return RotationLabeling(best.active, cfg, meta)
