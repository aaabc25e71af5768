"""Labeling files: one line per label with its active intervals.

Example::

    # rotlabel-labeling v1
    # model: kR:1/soft
    # solver: gm
    id,intervals
    0,0 6.28318530718
    1,5.5 0.25;1 2

Each interval is ``start end`` in radians with 12 significant digits;
``start > end`` wraps through zero and ``0 2*pi`` is the full circle.
"""
from __future__ import annotations

import math
from typing import Optional

from ..angular import TWO_PI, AngularSet, CircularInterval
from ..model import ModelConfig, RotationLabeling
from .errors import InputError

LABELING_VERSION = 1
MAGIC = "# rotlabel-labeling"
SNAP = 1e-9


def _fmt(v: float) -> str:
    return "%.12g" % v


def _snap(v: float) -> float:
    if abs(v - TWO_PI) <= SNAP:
        return TWO_PI
    if abs(v) <= SNAP:
        return 0.0
    return v


def _interval_text(iv: CircularInterval) -> str:
    if iv.is_full:
        return f"0 {_fmt(TWO_PI)}"
    return f"{_fmt(iv.start)} {_fmt(iv.end)}"


def dumps_labeling(phi: RotationLabeling, solver: Optional[str] = None) -> str:
    solver = solver if solver is not None else str(phi.meta.get("solver", ""))
    lines = [f"{MAGIC} v{LABELING_VERSION}", f"# model: {phi.model}", f"# solver: {solver}", "id,intervals"]
    for i in sorted(phi.active):
        lines.append(f"{i}," + ";".join(_interval_text(iv) for iv in phi[i].intervals))
    return "\n".join(lines) + "\n"


def _meta(line: str, key: str) -> str:
    prefix = f"# {key}:"
    if not line.startswith(prefix):
        raise InputError(f"expected '{prefix}' line, got {line!r}")
    return line[len(prefix) :].strip()


def loads_labeling(text: str) -> RotationLabeling:
    lines = text.splitlines()
    if len(lines) < 4 or lines[0] != f"{MAGIC} v{LABELING_VERSION}":
        raise InputError("not a rotlabel labeling file (missing version header)")
    model_text = _meta(lines[1], "model")
    solver = _meta(lines[2], "solver")
    if lines[3] != "id,intervals":
        raise InputError("expected column header id,intervals")
    try:
        ranges, _, mode = model_text.partition("/")
        model = ModelConfig.parse(ranges, mode or "soft")
    except ValueError as exc:
        raise InputError(f"bad model {model_text!r}") from exc
    active = {}
    for lineno, line in enumerate(lines[4:], start=5):
        if not line.strip():
            continue
        head, sep, body = line.partition(",")
        if not sep:
            raise InputError(f"line {lineno}: missing ','")
        try:
            label = int(head)
            ivs = []
            for part in filter(None, body.split(";")):
                a, b = (float(x) for x in part.split())
                if not (math.isfinite(a) and math.isfinite(b)):
                    raise ValueError("non-finite angle")
                if not (0.0 <= a <= TWO_PI + SNAP and 0.0 <= b <= TWO_PI + SNAP):
                    raise ValueError(f"angle outside [0, 2pi]: {part!r}")
                ivs.append((_snap(a), _snap(b)))
        except ValueError as exc:
            raise InputError(f"line {lineno}: {exc}") from exc
        if label in active:
            raise InputError(f"line {lineno}: duplicate label {label}")
        active[label] = AngularSet.from_intervals(ivs)
    meta = {"solver": solver} if solver else {}
    return RotationLabeling(active, model, meta)


def save_labeling(phi: RotationLabeling, path: str, solver: Optional[str] = None) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(dumps_labeling(phi, solver))


def load_labeling(path: str) -> RotationLabeling:
    with open(path, encoding="utf-8", newline="") as fh:
        return loads_labeling(fh.read())
