"""Input maps, consistency models and rotation labelings."""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Mapping, Optional

from .angular import AngularSet

if TYPE_CHECKING:
    from .geometry import ConflictStructure

log = logging.getLogger(__name__)


class AnchorCorner(enum.Enum):
    BOTTOM_LEFT = "BL"
    BOTTOM_RIGHT = "BR"
    TOP_LEFT = "TL"
    TOP_RIGHT = "TR"

    @classmethod
    def parse(cls, tag: str) -> "AnchorCorner":
        return cls(tag.strip().upper())


# fixed order used whenever corners are tried in sequence
CORNER_ORDER = (
    AnchorCorner.BOTTOM_LEFT,
    AnchorCorner.BOTTOM_RIGHT,
    AnchorCorner.TOP_LEFT,
    AnchorCorner.TOP_RIGHT,
)


@dataclass(frozen=True)
class AnchoredLabel:
    """Axis-aligned rectangle with one corner pinned to its point feature."""

    id: int
    x: float
    y: float
    width: float
    height: float
    corner: AnchorCorner = AnchorCorner.BOTTOM_LEFT
    name: Optional[str] = None
    weight: Optional[float] = None

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise ValueError(f"label {self.id}: width and height must be positive")
        if self.id < 0:
            raise ValueError(f"label id must be nonnegative, got {self.id}")
        if self.weight is not None and self.weight < 0:
            raise ValueError(f"label {self.id}: weight must be nonnegative")
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"label {self.id}: anchor must be finite")

    @property
    def anchor(self) -> tuple[float, float]:
        return (self.x, self.y)

    @property
    def offset(self) -> tuple[float, float]:
        """Bottom-left corner of the rectangle relative to the anchor."""
        c = self.corner
        ox = -self.width if c in (AnchorCorner.BOTTOM_RIGHT, AnchorCorner.TOP_RIGHT) else 0.0
        oy = -self.height if c in (AnchorCorner.TOP_LEFT, AnchorCorner.TOP_RIGHT) else 0.0
        return (ox, oy)

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)

    def rect(self) -> tuple[float, float, float, float]:
        """(xmin, ymin, xmax, ymax) at rotation 0."""
        ox, oy = self.offset
        x0, y0 = self.x + ox, self.y + oy
        return (x0, y0, x0 + self.width, y0 + self.height)


def rects_overlap(r1, r2) -> bool:
    """Interior intersection of two axis-aligned rectangles."""
    return r1[0] < r2[2] and r2[0] < r1[2] and r1[1] < r2[3] and r2[1] < r1[3]


@dataclass(frozen=True)
class Instance:
    labels: tuple[AnchoredLabel, ...]

    def __init__(self, labels: Iterable[AnchoredLabel]):
        labels = tuple(labels)
        ids = [l.id for l in labels]
        if len(set(ids)) != len(ids):
            raise ValueError("label ids must be unique")
        anchors = {(l.x, l.y) for l in labels}
        if len(anchors) != len(labels):
            raise ValueError("anchors must be pairwise distinct")
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    @property
    def ids(self) -> list[int]:
        return [l.id for l in self.labels]

    def by_id(self) -> dict[int, AnchoredLabel]:
        return {l.id: l for l in self.labels}

    def subset(self, ids: Iterable[int]) -> "Instance":
        keep = set(ids)
        return Instance(l for l in self.labels if l.id in keep)

    def bounds(self) -> tuple[float, float, float, float]:
        xs = [l.x for l in self.labels]
        ys = [l.y for l in self.labels]
        return (min(xs), min(ys), max(xs), max(ys))


def validate_static(inst: Instance) -> list[tuple[int, int]]:
    """Pairs of labels whose rectangles overlap at rotation 0.

    Touching boundaries are fine; only interior overlap is reported.
    """
    labels = inst.labels
    if not labels:
        return []
    cell = max(max(l.width, l.height) for l in labels)
    grid: dict[tuple[int, int], list[int]] = {}
    rects = [l.rect() for l in labels]
    for idx, r in enumerate(rects):
        for gx in range(math.floor(r[0] / cell), math.floor(r[2] / cell) + 1):
            for gy in range(math.floor(r[1] / cell), math.floor(r[3] / cell) + 1):
                grid.setdefault((gx, gy), []).append(idx)
    found = set()
    for members in grid.values():
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                i, j = members[a], members[b]
                if rects_overlap(rects[i], rects[j]):
                    li, lj = labels[i].id, labels[j].id
                    found.add((min(li, lj), max(li, lj)))
    return sorted(found)


class RangeKind(enum.Enum):
    ZERO_ONE = "01"
    K_RANGES = "kR"
    UNLIMITED = "inf"


class ConflictMode(enum.Enum):
    SOFT = "soft"
    HARD = "hard"


@dataclass(frozen=True)
class ModelConfig:
    ranges: RangeKind = RangeKind.K_RANGES
    k: int = 1
    conflict_mode: ConflictMode = ConflictMode.SOFT

    def __post_init__(self):
        if self.ranges is RangeKind.K_RANGES and self.k < 1:
            raise ValueError(f"kR model needs k >= 1, got {self.k}")

    @classmethod
    def zero_one(cls, conflict_mode=ConflictMode.SOFT) -> "ModelConfig":
        return cls(RangeKind.ZERO_ONE, 1, ConflictMode(conflict_mode))

    @classmethod
    def kr(cls, k: int, conflict_mode=ConflictMode.SOFT) -> "ModelConfig":
        return cls(RangeKind.K_RANGES, k, ConflictMode(conflict_mode))

    @classmethod
    def unlimited(cls, conflict_mode=ConflictMode.SOFT) -> "ModelConfig":
        return cls(RangeKind.UNLIMITED, 0, ConflictMode(conflict_mode))

    @classmethod
    def parse(cls, ranges: str, conflicts: str = "soft") -> "ModelConfig":
        """Parse ``01``, ``kR:<k>`` (or ``<k>R``) and ``inf``."""
        mode = ConflictMode(conflicts.lower())
        text = ranges.strip()
        if text in ("01", "0/1"):
            return cls.zero_one(mode)
        if text.lower() in ("inf", "infr", "unlimited"):
            return cls.unlimited(mode)
        if text.startswith("kR:"):
            return cls.kr(int(text[3:]), mode)
        if text.endswith("R") and text[:-1].isdigit():
            return cls.kr(int(text[:-1]), mode)
        raise ValueError(f"unknown range model {ranges!r}")

    @property
    def hard(self) -> bool:
        return self.conflict_mode is ConflictMode.HARD

    @property
    def max_ranges(self) -> Optional[int]:
        """Range budget per label; None when unlimited."""
        if self.ranges is RangeKind.UNLIMITED:
            return None
        if self.ranges is RangeKind.ZERO_ONE:
            return 1
        return self.k

    @property
    def range_tag(self) -> str:
        if self.ranges is RangeKind.K_RANGES:
            return f"kR:{self.k}"
        return self.ranges.value

    def with_mode(self, mode: ConflictMode) -> "ModelConfig":
        return ModelConfig(self.ranges, self.k, ConflictMode(mode))

    def __str__(self) -> str:
        return f"{self.range_tag}/{self.conflict_mode.value}"


@dataclass(frozen=True)
class RotationLabeling:
    """Active ranges per label id."""

    active: Mapping[int, AngularSet]
    model: ModelConfig
    meta: Mapping[str, object] = field(default_factory=dict, compare=False)

    def __getitem__(self, label_id: int) -> AngularSet:
        return self.active.get(label_id, AngularSet.empty())

    def ranges(self, label_id: int) -> int:
        return len(self[label_id])

    @classmethod
    def empty(cls, ids: Iterable[int], model: ModelConfig) -> "RotationLabeling":
        return cls({i: AngularSet.empty() for i in ids}, model)


def total_activity(phi: RotationLabeling) -> float:
    """Sum of all active-range lengths, in radians."""
    return sum(s.length for s in phi.active.values())


@dataclass
class ValidityReport:
    conflicts: list[tuple[int, int, AngularSet]] = field(default_factory=list)
    hard: list[tuple[int, int, AngularSet]] = field(default_factory=list)
    budget: list[tuple[int, int, int]] = field(default_factory=list)
    zero_one: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.conflicts or self.hard or self.budget or self.zero_one)

    def summary(self) -> str:
        if self.ok:
            return "valid"
        return (
            f"{len(self.conflicts)} conflict(s), {len(self.hard)} hard violation(s), "
            f"{len(self.budget)} budget violation(s), {len(self.zero_one)} 0/1 violation(s)"
        )


def check_validity(
    phi: RotationLabeling,
    cs: "ConflictStructure",
    cfg: Optional[ModelConfig] = None,
    tol: float = 1e-9,
) -> ValidityReport:
    """List every overlap of simultaneous activity inside a conflict set.

    Overlaps shorter than ``tol`` in total are ignored: events closer than
    the deduplication epsilon are merged upstream and may leave slivers of
    that size.
    """
    cfg = cfg or phi.model
    rep = ValidityReport()
    for pc in cs.pairs:
        both = phi[pc.i].intersect(phi[pc.j])
        if both:
            bad = both.intersect(pc.soft)
            if bad.length > tol:
                rep.conflicts.append((pc.i, pc.j, bad))
        if cfg.hard:
            for coverer, covered, hs in ((pc.i, pc.j, pc.hard_i_covers_j), (pc.j, pc.i, pc.hard_j_covers_i)):
                bad = phi[coverer].intersect(hs)
                if bad.length > tol:
                    rep.hard.append((coverer, covered, bad))
    limit = cfg.max_ranges
    for lid, s in phi.active.items():
        if cfg.ranges is RangeKind.ZERO_ONE:
            if not (s.is_empty or s.is_full):
                rep.zero_one.append(lid)
        elif limit is not None and len(s) > limit:
            rep.budget.append((lid, len(s), limit))
    return rep
