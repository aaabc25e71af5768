"""Line-oriented CSV instance files.

Grammar::

    # rotlabel-instance v1
    # units: <free text>
    id,x,y,width,height,corner,name,weight
    <int>,<float>,<float>,<float>,<float>,<BL|BR|TL|TR>,<text or empty>,<float or empty>

Floats are written with ``repr`` so parsing gives back the exact values.
An empty name or weight means "absent".
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Union

from ..model import AnchorCorner, AnchoredLabel, Instance
from .errors import InputError

INSTANCE_VERSION = 1
MAGIC = "# rotlabel-instance"
COLUMNS = ("id", "x", "y", "width", "height", "corner", "name", "weight")


@dataclass(frozen=True)
class InstanceFile:
    instance: Instance
    units: str = "unit"
    version: int = INSTANCE_VERSION


def dumps_instance(inst: Union[Instance, InstanceFile], units: str = "unit") -> str:
    if isinstance(inst, InstanceFile):
        inst, units = inst.instance, inst.units
    if "\n" in units:
        raise ValueError("units must be a single line")
    buf = io.StringIO()
    buf.write(f"{MAGIC} v{INSTANCE_VERSION}\n# units: {units}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for l in inst:
        w.writerow(
            (
                l.id,
                repr(float(l.x)),
                repr(float(l.y)),
                repr(float(l.width)),
                repr(float(l.height)),
                l.corner.value,
                l.name if l.name is not None else "",
                repr(float(l.weight)) if l.weight is not None else "",
            )
        )
    return buf.getvalue()


def _header(lines: list[str]) -> tuple[int, str]:
    if len(lines) < 3 or not lines[0].startswith(MAGIC + " v"):
        raise InputError("not a rotlabel instance file (missing version header)")
    try:
        version = int(lines[0][len(MAGIC) + 2 :].strip())
    except ValueError as exc:
        raise InputError(f"bad version line {lines[0]!r}") from exc
    if version != INSTANCE_VERSION:
        raise InputError(f"unsupported instance file version {version}")
    if not lines[1].startswith("# units:"):
        raise InputError("missing '# units:' line")
    return version, lines[1][len("# units:") :].strip()


def loads_instance_file(text: str) -> InstanceFile:
    lines = text.splitlines()
    version, units = _header(lines)
    rows = list(csv.reader(lines[2:]))
    if not rows or tuple(rows[0]) != COLUMNS:
        raise InputError(f"expected column header {','.join(COLUMNS)}")
    labels = []
    for lineno, row in enumerate(rows[1:], start=4):
        if not row:
            continue
        if len(row) != len(COLUMNS):
            raise InputError(f"line {lineno}: expected {len(COLUMNS)} fields, got {len(row)}")
        try:
            labels.append(
                AnchoredLabel(
                    id=int(row[0]),
                    x=float(row[1]),
                    y=float(row[2]),
                    width=float(row[3]),
                    height=float(row[4]),
                    corner=AnchorCorner.parse(row[5]),
                    name=row[6] or None,
                    weight=float(row[7]) if row[7] else None,
                )
            )
        except ValueError as exc:
            raise InputError(f"line {lineno}: {exc}") from exc
    try:
        inst = Instance(labels)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return InstanceFile(inst, units, version)


def loads_instance(text: str) -> Instance:
    return loads_instance_file(text).instance


def save_instance(inst: Union[Instance, InstanceFile], path: str, units: str = "unit") -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(dumps_instance(inst, units))


def load_instance(path: str) -> Instance:
    with open(path, encoding="utf-8", newline="") as fh:
        return loads_instance(fh.read())
