"""CPLEX-LP export of the atomic-interval program and solution import.

Variables are ``x_<label>_<interval>`` (activity), ``b_<label>_<interval>``
(range begin, kR only) and ``y_<label>`` (0/1-model).  Rows are named
``run_i_j``, ``budget_i``, ``conf_a_b_j``, ``cover_i`` and ``conf_a_b`` and
appear in that order.  Coefficients use 12 significant digits.

A solution file has one ``<name> <value>`` pair per line; blank lines and
lines starting with ``#`` are skipped, values above 0.5 mean 1.
"""
from __future__ import annotations

from typing import TYPE_CHECKING, Iterable, TextIO, Union

from .angular import TWO_PI, AngularSet
from .model import RangeKind, RotationLabeling

if TYPE_CHECKING:
    from .exact import AtomicIntervalModel, ExactSolution

TERMS_PER_LINE = 6


def _num(v: float) -> str:
    return "%.12g" % v


def _terms(pairs: Iterable[tuple[float, str]]) -> list[str]:
    out = []
    for coef, name in pairs:
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        out.append(f"{sign} {name}" if mag == 1 else f"{sign} {_num(mag)} {name}")
    if out and out[0].startswith("+ "):
        out[0] = out[0][2:]
    return out


def _row(name: str, terms: list[str], sense=None, rhs: float = 0.0) -> list[str]:
    lines = []
    head = f" {name}:"
    for t in range(0, len(terms), TERMS_PER_LINE):
        chunk = " ".join(terms[t : t + TERMS_PER_LINE])
        lines.append(f"{head} {chunk}" if t == 0 else f"   {chunk}")
    if not lines:
        lines.append(head)
    if sense is not None:
        lines[-1] += f" {sense} {_num(rhs)}"
    return lines


def emit_lp(model: "AtomicIntervalModel") -> str:
    lines = [f"\\ rotation labeling, model {model.cfg}", "Maximize"]
    labels = model.labels
    if model.zero_one:
        obj = [(TWO_PI, f"y_{i}") for i in labels]
        lines += _row("obj", _terms(obj))
        lines.append("Subject To")
        for a, b in model.pairs:
            lines += _row(f"conf_{a}_{b}", _terms([(1, f"y_{a}"), (1, f"y_{b}")]), "<=", 1)
        lines.append("Bounds")
        for i in model.excluded:
            lines.append(f" y_{i} = 0")
        lines.append("Binaries")
        lines += [f" y_{i}" for i in labels]
        lines.append("End")
        return "\n".join(lines) + "\n"

    m = model.m
    lengths = model.lengths
    kr = model.cfg.ranges is RangeKind.K_RANGES
    obj = [(lengths[j], f"x_{i}_{j}") for i in labels for j in range(m)]
    if model.minimize_ranges:
        half = model.s / 2
        obj += [(-half, f"b_{i}_{j}") for i in labels for j in range(m)]
    lines += _row("obj", _terms(obj))
    lines.append("Subject To")
    if kr:
        for i in labels:
            for j in range(m):
                p = (j - 1) % m
                if p == j:
                    terms = [(-1, f"b_{i}_{j}")]
                else:
                    terms = [(1, f"x_{i}_{j}"), (-1, f"b_{i}_{j}"), (-1, f"x_{i}_{p}")]
                lines += _row(f"run_{i}_{j}", _terms(terms), "<=", 0)
        for i in labels:
            lines += _row(f"budget_{i}", _terms([(1, f"b_{i}_{j}") for j in range(m)]), "<=", model.cfg.k)
    for (a, b), rows in sorted(model.conflict_rows.items()):
        for j in rows:
            lines += _row(f"conf_{a}_{b}_{j}", _terms([(1, f"x_{a}_{j}"), (1, f"x_{b}_{j}")]), "<=", 1)
    if model.minimize_ranges:
        for i in labels:
            terms = [(m, f"b_{i}_{j}") for j in range(m)] + [(-1, f"x_{i}_{j}") for j in range(m)]
            lines += _row(f"cover_{i}", _terms(terms), ">=", 0)
    lines.append("Bounds")
    for i in labels:
        for j in model.fixed_zero.get(i, ()):
            lines.append(f" x_{i}_{j} = 0")
    lines.append("Binaries")
    for i in labels:
        lines += [f" x_{i}_{j}" for j in range(m)]
    if kr:
        for i in labels:
            lines += [f" b_{i}_{j}" for j in range(m)]
    lines.append("End")
    return "\n".join(lines) + "\n"


def parse_solution(text: str) -> dict[str, float]:
    values: dict[str, float] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 2:
            raise ValueError(f"bad solution line: {raw!r}")
        values[parts[0]] = float(parts[1])
    return values


def read_solution(source: Union[str, TextIO], model: "AtomicIntervalModel") -> RotationLabeling:
    """Labeling encoded by an external solver's variable values."""
    text = source if isinstance(source, str) else source.read()
    values = parse_solution(text)
    ev = model.events
    active = {}
    for i in model.labels:
        if model.zero_one:
            on = values.get(f"y_{i}", 0.0) > 0.5
            active[i] = AngularSet.full() if on else AngularSet.empty()
            continue
        pieces = [(ev[j], ev[j + 1]) for j in range(model.m) if values.get(f"x_{i}_{j}", 0.0) > 0.5]
        active[i] = AngularSet(pieces)
    return RotationLabeling(active, model.cfg, {"solver": "lp"})


def write_solution(phi: Union[RotationLabeling, "ExactSolution"], model: "AtomicIntervalModel") -> str:
    """Solution file for ``phi`` (x and y values; begin variables omitted)."""
    if not isinstance(phi, RotationLabeling):
        phi = phi.labeling
    lines = ["# name value"]
    if model.zero_one:
        for i in model.labels:
            lines.append(f"y_{i} {1 if phi[i].is_full else 0}")
        return "\n".join(lines) + "\n"
    ev = model.events
    for i in model.labels:
        s = phi[i]
        for j in range(model.m):
            lines.append(f"x_{i}_{j} {1 if (ev[j] + ev[j + 1]) / 2 in s else 0}")
    return "\n".join(lines) + "\n"
