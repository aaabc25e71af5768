"""Circular interval arithmetic on [0, 2*pi).

An :class:`AngularSet` is kept in canonical form as a sorted tuple of
disjoint linear pieces ``(lo, hi)`` with ``0 <= lo < hi <= 2*pi``.  A
wraparound interval ``[a, b]`` with ``a > b`` is stored as the two pieces
``(a, 2*pi)`` and ``(0, b)``; :attr:`AngularSet.intervals` glues them back
together.  All endpoints are copied, never recomputed, so set algebra is
exact on the stored floats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

TWO_PI = 2.0 * math.pi

# merging / degeneracy tolerance for endpoints
EPS = 1e-12

# lengths are compared after rounding to this many decimals, so that
# symmetric gaps that differ by a few ulps tie deterministically
LENGTH_DECIMALS = 9


def normalize(angle: float) -> float:
    """Map an angle to [0, 2*pi)."""
    a = math.fmod(angle, TWO_PI)
    if a < 0.0:
        a += TWO_PI
    if a >= TWO_PI:
        a = 0.0
    return a


def interval_length(a: float, b: float) -> float:
    if a <= b:
        return b - a
    return TWO_PI - a + b


def length_key(length: float) -> float:
    """Rounded length used for max/tie decisions."""
    return round(length, LENGTH_DECIMALS)


@dataclass(frozen=True, order=True)
class CircularInterval:
    """``[start, end]``; wraps through 0 when ``start > end``.

    ``start`` lies in [0, 2*pi) and ``end`` in [0, 2*pi].  The full circle
    is ``(0, 2*pi)``; ``start == end`` is the empty interval.
    """

    start: float
    end: float

    @property
    def length(self) -> float:
        if self.start == self.end:
            return 0.0
        return interval_length(self.start, self.end)

    @property
    def wraps(self) -> bool:
        return self.start > self.end

    @property
    def is_full(self) -> bool:
        return self.start == 0.0 and self.end == TWO_PI

    @property
    def is_empty(self) -> bool:
        return self.start == self.end

    def __contains__(self, alpha: float) -> bool:
        a = normalize(alpha)
        if self.start <= self.end:
            return self.start <= a < self.end
        return a >= self.start or a < self.end

    def pieces(self) -> list[tuple[float, float]]:
        if self.start == self.end:
            return []
        if self.start < self.end:
            return [(self.start, self.end)]
        return [(self.start, TWO_PI), (0.0, self.end)]


EMPTY_INTERVAL = CircularInterval(0.0, 0.0)
FULL_INTERVAL = CircularInterval(0.0, TWO_PI)


def _snap(v: float) -> float:
    # same comparisons as the sliver test in _canonical, so complements agree
    if v <= EPS:
        return 0.0
    if TWO_PI - v <= EPS:
        return TWO_PI
    return v


def _canonical(pieces: Iterable[tuple[float, float]]) -> tuple[tuple[float, float], ...]:
    cleaned = []
    for lo, hi in pieces:
        lo, hi = _snap(lo), _snap(hi)
        if hi - lo > EPS:
            cleaned.append((lo, hi))
    if not cleaned:
        return ()
    cleaned.sort()
    out = [cleaned[0]]
    for lo, hi in cleaned[1:]:
        plo, phi = out[-1]
        if lo - phi <= EPS:
            if hi > phi:
                out[-1] = (plo, hi)
        else:
            out.append((lo, hi))
    return tuple(out)


def _circular_pieces(a: float, b: float) -> list[tuple[float, float]]:
    """Linear pieces of the circular interval [a, b] given raw angles."""
    if b - a >= TWO_PI - EPS:
        return [(0.0, TWO_PI)]
    a = normalize(a)
    b_raw = b
    b = normalize(b)
    if b == 0.0 and b_raw != 0.0 and a > 0.0:
        b = TWO_PI
    if a <= b:
        return [(a, b)]
    return [(a, TWO_PI), (0.0, b)]


class AngularSet:
    """Immutable union of disjoint circular intervals."""

    __slots__ = ("_pieces", "_hash")

    def __init__(self, pieces: Iterable[tuple[float, float]] = ()):
        self._pieces = _canonical(pieces)
        self._hash = None

    @classmethod
    def _raw(cls, pieces: tuple[tuple[float, float], ...]) -> "AngularSet":
        # pieces already canonical
        obj = cls.__new__(cls)
        obj._pieces = pieces
        obj._hash = None
        return obj

    @classmethod
    def empty(cls) -> "AngularSet":
        return _EMPTY

    @classmethod
    def full(cls) -> "AngularSet":
        return _FULL

    @classmethod
    def from_interval(cls, a: float, b: float) -> "AngularSet":
        """The circular interval ``[a, b]`` (wrapping when ``a > b``)."""
        return cls(_circular_pieces(a, b))

    @classmethod
    def from_intervals(cls, intervals: Iterable) -> "AngularSet":
        pieces: list[tuple[float, float]] = []
        for iv in intervals:
            if isinstance(iv, CircularInterval):
                pieces.extend(iv.pieces())
            else:
                a, b = iv
                pieces.extend(_circular_pieces(a, b))
        return cls(pieces)

    # -- views -------------------------------------------------------------

    @property
    def pieces(self) -> tuple[tuple[float, float], ...]:
        return self._pieces

    @property
    def intervals(self) -> list[CircularInterval]:
        p = self._pieces
        if not p:
            return []
        if p[0] == (0.0, TWO_PI):
            return [FULL_INTERVAL]
        if len(p) > 1 and p[0][0] == 0.0 and p[-1][1] == TWO_PI:
            inner = [CircularInterval(lo, hi) for lo, hi in p[1:-1]]
            return inner + [CircularInterval(p[-1][0], p[0][1])]
        return [CircularInterval(lo, hi) for lo, hi in p]

    def __iter__(self) -> Iterator[CircularInterval]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    @property
    def length(self) -> float:
        return sum(iv.length for iv in self.intervals)

    @property
    def is_empty(self) -> bool:
        return not self._pieces

    @property
    def is_full(self) -> bool:
        return self._pieces == ((0.0, TWO_PI),)

    def __bool__(self) -> bool:
        return bool(self._pieces)

    def __contains__(self, alpha: float) -> bool:
        a = normalize(alpha)
        for lo, hi in self._pieces:
            if lo <= a < hi:
                return True
            if lo > a:
                break
        return False

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AngularSet):
            return NotImplemented
        return self._pieces == other._pieces

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._pieces)
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"[{iv.start:.6g}, {iv.end:.6g}]" for iv in self.intervals)
        return f"AngularSet({body})"

    def isclose(self, other: "AngularSet", tol: float = 1e-9) -> bool:
        """Same intervals with endpoints within ``tol`` (circular distance)."""
        a, b = self.intervals, other.intervals
        if len(a) != len(b):
            return False
        if not a:
            return True
        if a[0].is_full or b[0].is_full:
            return a[0].is_full and b[0].is_full
        ka = sorted(a, key=lambda iv: iv.start)
        kb = sorted(b, key=lambda iv: iv.start)
        # alignment may rotate when a start sits next to 0
        for shift in range(len(kb)):
            rb = kb[shift:] + kb[:shift]
            if all(
                angle_distance(x.start, y.start) <= tol and angle_distance(x.end, y.end) <= tol
                for x, y in zip(ka, rb)
            ):
                return True
        return False

    # -- algebra -------------------------------------------------------------

    def union(self, other: "AngularSet") -> "AngularSet":
        if not other._pieces:
            return self
        if not self._pieces:
            return other
        return AngularSet(self._pieces + other._pieces)

    __or__ = union

    def intersect(self, other: "AngularSet") -> "AngularSet":
        a, b = self._pieces, other._pieces
        if not a or not b:
            return _EMPTY
        out = []
        i = j = 0
        while i < len(a) and j < len(b):
            lo = a[i][0] if a[i][0] > b[j][0] else b[j][0]
            hi = a[i][1] if a[i][1] < b[j][1] else b[j][1]
            if hi - lo > EPS:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return AngularSet(out)

    __and__ = intersect

    def complement(self) -> "AngularSet":
        p = self._pieces
        if not p:
            return _FULL
        out = []
        prev = 0.0
        for lo, hi in p:
            if lo > prev:
                out.append((prev, lo))
            prev = hi
        if prev < TWO_PI:
            out.append((prev, TWO_PI))
        return AngularSet._raw(_canonical(out))

    def difference(self, other: "AngularSet") -> "AngularSet":
        if not other._pieces or not self._pieces:
            return self
        return self.intersect(other.complement())

    __sub__ = difference

    def overlaps(self, other: "AngularSet") -> bool:
        return not self.intersect(other).is_empty

    def issubset(self, other: "AngularSet", tol: float = 0.0) -> bool:
        return self.difference(other).length <= tol

    def longest(self) -> CircularInterval:
        """Longest member interval, ties by smallest start; empty if none."""
        best = EMPTY_INTERVAL
        best_key = -1.0
        for iv in self.intervals:
            k = length_key(iv.length)
            if k > best_key or (k == best_key and iv.start < best.start):
                best, best_key = iv, k
        return best

    def rotated(self, delta: float) -> "AngularSet":
        """Shift every angle by ``delta``."""
        if self.is_full or self.is_empty:
            return self
        return AngularSet.from_intervals(
            (iv.start + delta, iv.start + delta + iv.length) for iv in self.intervals
        )

    def reflected(self, theta: float) -> "AngularSet":
        """Image under ``alpha -> theta - alpha``."""
        if self.is_full or self.is_empty:
            return self
        return AngularSet.from_intervals(
            (theta - iv.end, theta - iv.end + iv.length) for iv in self.intervals
        )

    def endpoints(self) -> list[float]:
        out: list[float] = []
        for iv in self.intervals:
            if not iv.is_full:
                out.append(iv.start)
                out.append(iv.end if iv.end < TWO_PI else 0.0)
        return out


_EMPTY = AngularSet._raw(())
_FULL = AngularSet._raw(((0.0, TWO_PI),))


def angle_distance(a: float, b: float) -> float:
    d = abs(normalize(a) - normalize(b))
    return min(d, TWO_PI - d)


def union(s1: AngularSet, s2: AngularSet) -> AngularSet:
    return s1.union(s2)


def intersect(s1: AngularSet, s2: AngularSet) -> AngularSet:
    return s1.intersect(s2)


def complement(s: AngularSet) -> AngularSet:
    return s.complement()


def longest_gap(s: AngularSet) -> CircularInterval:
    """Maximum-length interval of the complement of ``s``.

    Ties go to the smallest start angle.  Returns the empty interval when
    ``s`` is the full circle.
    """
    return s.complement().longest()


def union_all(sets: Sequence[AngularSet]) -> AngularSet:
    pieces: list[tuple[float, float]] = []
    for s in sets:
        pieces.extend(s.pieces)
    return AngularSet(pieces)
