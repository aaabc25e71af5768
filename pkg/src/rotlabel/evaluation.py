"""Labeling metrics and the model-by-solver comparison matrix."""
from __future__ import annotations

import csv
import io
import statistics
import time
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Sequence, TextIO, Union

from .angular import TWO_PI
from .exact import DEFAULT_TIME_LIMIT, solve
from .geometry import ConflictStructure, build_conflicts
from .model import ConflictMode, Instance, ModelConfig, RotationLabeling, total_activity
from .solvers import run_solver


@dataclass(frozen=True)
class LabelingMetrics:
    total_activity: float
    activity_ratio: Optional[float]
    mean_range_length: float  # fraction of a full turn
    mean_ranges_per_label: float
    flicker_events: int
    empty_labels: int


def compute_metrics(
    phi: RotationLabeling,
    baseline: Optional[RotationLabeling] = None,
    labels: Optional[Iterable[int]] = None,
) -> LabelingMetrics:
    """Metrics of ``phi``; the ratio is taken against ``baseline``'s activity.

    ``labels`` fixes the label population (defaults to the keys of
    ``phi.active``); labels without an entry count as empty.
    """
    ids = sorted(set(labels) if labels is not None else phi.active)
    t = total_activity(phi)
    lengths = []
    flicker = 0
    empty = 0
    for i in ids:
        s = phi[i]
        if s.is_empty:
            empty += 1
        for iv in s.intervals:
            lengths.append(iv.length / TWO_PI)
            if not iv.is_full:
                flicker += 2
    ratio = None
    if baseline is not None:
        tb = total_activity(baseline)
        if tb > 0:
            ratio = t / tb
        elif t == 0:
            ratio = 1.0
    return LabelingMetrics(
        total_activity=t,
        activity_ratio=ratio,
        mean_range_length=(sum(lengths) / len(lengths)) if lengths else 0.0,
        mean_ranges_per_label=(len(lengths) / len(ids)) if ids else 0.0,
        flicker_events=flicker,
        empty_labels=empty,
    )


@dataclass
class MatrixRow:
    model: str
    solver: str
    metrics: Optional[LabelingMetrics]
    seconds: float
    status: str = "ok"  # ok | degraded | error
    error: str = ""
    labeling: Optional[RotationLabeling] = field(default=None, repr=False, compare=False)


CSV_COLUMNS = (
    "instance",
    "model",
    "solver",
    "status",
    "total_activity",
    "activity_ratio",
    "mean_range_length",
    "mean_ranges_per_label",
    "flicker_events",
    "empty_labels",
    "seconds",
    "error",
)


@dataclass
class MatrixResult:
    rows: list[MatrixRow]
    instance: str = ""

    def get(self, model: Union[str, ModelConfig], solver: str) -> MatrixRow:
        key = str(model)
        for r in self.rows:
            if r.model == key and r.solver == solver:
                return r
        raise KeyError((key, solver))

    def records(self) -> list[dict]:
        out = []
        for r in self.rows:
            rec = {"instance": self.instance, "model": r.model, "solver": r.solver, "status": r.status}
            m = asdict(r.metrics) if r.metrics is not None else {}
            for key in CSV_COLUMNS[4:10]:
                v = m.get(key)
                rec[key] = "" if v is None else (f"{v:.12g}" if isinstance(v, float) else v)
            rec["seconds"] = f"{r.seconds:.6f}"
            rec["error"] = r.error
            out.append(rec)
        return out

    def to_csv(self, dest: Union[str, TextIO, None] = None, header: bool = True) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        if header:
            w.writeheader()
        w.writerows(self.records())
        text = buf.getvalue()
        if isinstance(dest, str):
            with open(dest, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        elif dest is not None:
            dest.write(text)
        return text


def baseline_labeling(cs: ConflictStructure, mode: ConflictMode, time_limit: float = DEFAULT_TIME_LIMIT):
    """Optimal labeling under the unlimited-ranges model (the ratio baseline)."""
    return solve(cs, ModelConfig.unlimited(mode), time_limit).labeling


def run_matrix(
    inst: Instance,
    models: Sequence[ModelConfig],
    solvers: Sequence[str],
    *,
    cs: Optional[ConflictStructure] = None,
    time_limit: float = DEFAULT_TIME_LIMIT,
    name: str = "",
    backend: Optional[str] = None,
) -> MatrixResult:
    """Every solver on every model; failures are recorded, not raised."""
    cs = cs if cs is not None else build_conflicts(inst)
    baselines: dict[ConflictMode, RotationLabeling] = {}
    rows = []
    for cfg in models:
        if cfg.conflict_mode not in baselines:
            baselines[cfg.conflict_mode] = baseline_labeling(cs, cfg.conflict_mode, time_limit)
        base = baselines[cfg.conflict_mode]
        for solver in solvers:
            t0 = time.perf_counter()
            try:
                phi = run_solver(solver, inst, cs, cfg, time_limit, backend)
            except Exception as exc:  # recorded per cell
                rows.append(MatrixRow(str(cfg), solver, None, time.perf_counter() - t0, "error", str(exc)))
                continue
            dt = time.perf_counter() - t0
            status = "degraded" if phi.meta.get("degraded") else "ok"
            rows.append(MatrixRow(str(cfg), solver, compute_metrics(phi, base, cs.ids), dt, status, labeling=phi))
    return MatrixResult(rows, name)


def summarize(results: Iterable[MatrixResult]) -> list[dict]:
    """Mean and standard deviation of the activity ratio per (model, solver)."""
    groups: dict[tuple[str, str], list[float]] = {}
    order: list[tuple[str, str]] = []
    for res in results:
        for r in res.rows:
            key = (r.model, r.solver)
            if key not in groups:
                groups[key] = []
                order.append(key)
            if r.metrics is not None and r.metrics.activity_ratio is not None:
                groups[key].append(r.metrics.activity_ratio)
    out = []
    for key in order:
        vals = groups[key]
        out.append(
            {
                "model": key[0],
                "solver": key[1],
                "count": len(vals),
                "mean_ratio": statistics.fmean(vals) if vals else None,
                "stdev_ratio": statistics.stdev(vals) if len(vals) > 1 else 0.0 if vals else None,
            }
        )
    return out
