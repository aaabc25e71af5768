"""Solver registry shared by the evaluation harness and the CLI."""
from __future__ import annotations

from typing import Callable, Optional

from .exact import DEFAULT_TIME_LIMIT, solve
from .geometry import ConflictStructure
from .greedy import GreedyStrategy, greedy_solve
from .model import Instance, ModelConfig, RotationLabeling
from .qapx import qapx_solve

SOLVER_NAMES = ("gm", "glc", "gbr", "qapx", "qgm", "qglc", "qgbr", "exact")

_GREEDY = {"gm": GreedyStrategy.MAX, "glc": GreedyStrategy.LOW_COST, "gbr": GreedyStrategy.BEST_RATIO}
_QAPX = {"qapx": None, "qgm": GreedyStrategy.MAX, "qglc": GreedyStrategy.LOW_COST, "qgbr": GreedyStrategy.BEST_RATIO}


def run_solver(
    name: str,
    inst: Instance,
    cs: ConflictStructure,
    cfg: ModelConfig,
    time_limit: float = DEFAULT_TIME_LIMIT,
    backend: Optional[str] = None,
) -> RotationLabeling:
    """Run one named solver.  Degraded exact runs carry ``meta['degraded']``."""
    if name in _GREEDY:
        return greedy_solve(cs, cfg, _GREEDY[name])
    if name in _QAPX:
        return qapx_solve(inst, cs, cfg, _QAPX[name], time_limit, backend=backend)
    if name == "exact":
        return solve(cs, cfg, time_limit, backend=backend).labeling
    raise ValueError(f"unknown solver {name!r}; choose from {', '.join(SOLVER_NAMES)}")


def solver_fn(name: str) -> Callable[..., RotationLabeling]:
    if name not in SOLVER_NAMES:
        raise ValueError(f"unknown solver {name!r}")
    return lambda inst, cs, cfg, **kw: run_solver(name, inst, cs, cfg, **kw)
