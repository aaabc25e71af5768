"""Static label placement and seeded synthetic instances."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..model import CORNER_ORDER, AnchoredLabel, Instance, rects_overlap


@dataclass(frozen=True)
class PointFeature:
    x: float
    y: float
    width: float
    height: float
    name: Optional[str] = None
    weight: Optional[float] = None
    id: Optional[int] = None


def prepare_static_labeling(points: Sequence[PointFeature]) -> Instance:
    """Greedy fixed-position labeling with the four corner candidates.

    Points go by descending weight (missing weight counts as 0, ties keep
    input order) and take the first corner, in BL, BR, TL, TR order, whose
    rectangle overlaps no accepted label.  Points without a free corner,
    or sharing an anchor with an accepted point, are dropped.  Ids default
    to the input position.
    """
    order = sorted(range(len(points)), key=lambda i: (-(points[i].weight or 0.0), i))
    side = max((max(p.width, p.height) for p in points), default=1.0)
    grid: dict[tuple[int, int], list[tuple[float, float, float, float]]] = {}
    used_anchors: set[tuple[float, float]] = set()
    accepted: list[tuple[int, AnchoredLabel]] = []

    def cells(r):
        for cx in range(math.floor(r[0] / side), math.floor(r[2] / side) + 1):
            for cy in range(math.floor(r[1] / side), math.floor(r[3] / side) + 1):
                yield (cx, cy)

    for idx in order:
        p = points[idx]
        if (p.x, p.y) in used_anchors:
            continue
        for corner in CORNER_ORDER:
            lab = AnchoredLabel(
                p.id if p.id is not None else idx, p.x, p.y, p.width, p.height, corner, p.name, p.weight
            )
            r = lab.rect()
            if any(rects_overlap(r, o) for c in cells(r) for o in grid.get(c, ())):
                continue
            for c in cells(r):
                grid.setdefault(c, []).append(r)
            used_anchors.add((p.x, p.y))
            accepted.append((idx, lab))
            break
    accepted.sort(key=lambda t: t[0])
    return Instance(lab for _, lab in accepted)


def _check_range(name: str, rng: tuple[float, float]) -> None:
    lo, hi = rng
    if not (math.isfinite(lo) and math.isfinite(hi) and 0 < lo <= hi):
        raise ValueError(f"{name} range must satisfy 0 < lo <= hi, got {rng}")


def generate_random(
    n: int,
    region: tuple[float, float] = (10.0, 10.0),
    width_range: tuple[float, float] = (1.0, 1.0),
    height_range: tuple[float, float] = (1.0, 1.0),
    seed: int = 0,
) -> Instance:
    """``n`` uniform anchors in ``[0, w) x [0, h)``, statically labeled.

    The result may hold fewer than ``n`` labels: points the static
    placement cannot label are dropped.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if not (region[0] > 0 and region[1] > 0):
        raise ValueError(f"region must have positive size, got {region}")
    _check_range("width", width_range)
    _check_range("height", height_range)
    rng = np.random.default_rng(seed)
    xs = rng.uniform(0.0, region[0], n)
    ys = rng.uniform(0.0, region[1], n)
    ws = rng.uniform(width_range[0], width_range[1], n)
    hs = rng.uniform(height_range[0], height_range[1], n)
    pts = [PointFeature(float(xs[i]), float(ys[i]), float(ws[i]), float(hs[i])) for i in range(n)]
    return prepare_static_labeling(pts)


def generate_unit_squares(n: int, side: float, seed: int = 0) -> Instance:
    """Unit-square labels in a ``side x side`` region."""
    return generate_random(n, (side, side), (1.0, 1.0), (1.0, 1.0), seed)
