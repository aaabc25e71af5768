"""Label activity schedules for rotating maps."""
from .angular import TWO_PI, AngularSet, CircularInterval
from .exact import ExactSolution, build_model, solve
from .geometry import ConflictStructure, build_conflicts, hard_conflict_set, soft_conflict_set
from .greedy import GreedyStrategy, greedy_solve
from .kernels import BACKEND, available_backends
from .lpformat import emit_lp, read_solution, write_solution
from .model import (
    AnchorCorner,
    AnchoredLabel,
    ConflictMode,
    Instance,
    ModelConfig,
    RangeKind,
    RotationLabeling,
    check_validity,
    total_activity,
)
from .qapx import qapx_solve
from .solvers import SOLVER_NAMES, run_solver

__version__ = "0.1.0"

__all__ = [
    "TWO_PI",
    "AngularSet",
    "CircularInterval",
    "ExactSolution",
    "build_model",
    "solve",
    "ConflictStructure",
    "build_conflicts",
    "hard_conflict_set",
    "soft_conflict_set",
    "GreedyStrategy",
    "greedy_solve",
    "BACKEND",
    "available_backends",
    "emit_lp",
    "read_solution",
    "write_solution",
    "AnchorCorner",
    "AnchoredLabel",
    "ConflictMode",
    "Instance",
    "ModelConfig",
    "RangeKind",
    "RotationLabeling",
    "check_validity",
    "total_activity",
    "qapx_solve",
    "SOLVER_NAMES",
    "run_solver",
]
