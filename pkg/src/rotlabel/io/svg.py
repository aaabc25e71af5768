"""SVG 1.1 snapshot of a labeling at one rotation angle."""
from __future__ import annotations

import math
from typing import Optional

from ..model import Instance, RotationLabeling

DOT_RADIUS = 0.06


def _n(v: float) -> str:
    s = "%.6f" % v
    s = s.rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def svg_snapshot(
    inst: Instance,
    phi: Optional[RotationLabeling],
    alpha: float,
    *,
    scale: float = 40.0,
    margin: Optional[float] = None,
) -> str:
    """Anchors as dots and active labels as rectangles turned by ``alpha``.

    Drawing happens in map coordinates (y up) inside a flipping group, so
    a positive ``alpha`` turns labels counterclockwise as seen on screen.
    """
    labels = list(inst)
    if labels:
        diag = max(l.diagonal for l in labels)
        x0, y0, x1, y1 = inst.bounds()
    else:
        diag, x0, y0, x1, y1 = 1.0, 0.0, 0.0, 0.0, 0.0
    pad = diag if margin is None else margin
    x0, y0, x1, y1 = x0 - pad, y0 - pad, x1 + pad, y1 + pad
    width, height = (x1 - x0) * scale, (y1 - y0) * scale
    deg = math.degrees(alpha)
    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_n(width)}" height="{_n(height)}" viewBox="0 0 {_n(width)} {_n(height)}">',
        f"<title>rotation {_n(alpha)} rad</title>",
        f'<g transform="matrix({_n(scale)} 0 0 {_n(-scale)} {_n(-x0 * scale)} {_n(y1 * scale)})">',
    ]
    out.append('<g id="labels" fill="#4a90d9" fill-opacity="0.45" stroke="#1f4e79" stroke-width="0.02">')
    for l in labels:
        if phi is None or alpha not in phi[l.id]:
            continue
        ox, oy = l.offset
        out.append(
            f'<rect id="label-{l.id}" x="{_n(l.x + ox)}" y="{_n(l.y + oy)}" '
            f'width="{_n(l.width)}" height="{_n(l.height)}" '
            f'transform="rotate({_n(deg)} {_n(l.x)} {_n(l.y)})"/>'
        )
    out.append("</g>")
    out.append('<g id="anchors" fill="#000000">')
    for l in labels:
        out.append(f'<circle cx="{_n(l.x)}" cy="{_n(l.y)}" r="{_n(DOT_RADIUS)}"/>')
    out.append("</g>")
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
