"""Trajectory learning with multi-coordinate elastic maps.

Fits an elastic chain of nodes to one or more demonstration trajectories
by minimizing a weighted sum of quadratic energies expressed in several
differential coordinate spaces, with optional hard point constraints and
automatic tuning of the energy weights.
"""

from .autotune import WeightState, compute_betas, compute_smoothing, optimize_alphas
from .clustering import Clustering, assign, per_demo_clusterings
from .coordinates import KINDS, build_matrix, transform
from .dataset import (
    DemonstrationSet,
    SYNTH_SHAPES,
    build_set,
    load_demonstrations,
    resample,
    synth_demos,
)
from .em import FitConfig, FitResult, fit, init_nodes, reproduce
from .errors import DegenerateSystemError, DimensionError, FormatError, SizeError
from .estimator import MultiCoordElasticMap
from .metrics import MetricsReport, angular_similarity, frechet, jerk, report, sse
from .solver import (
    EnergyMatrices,
    EnergyParams,
    EnergyReport,
    PointConstraint,
    assemble,
    energies,
    solve,
    solve_assembled,
)

__version__ = "0.1.0"

__all__ = [
    "Clustering",
    "DegenerateSystemError",
    "DemonstrationSet",
    "DimensionError",
    "EnergyMatrices",
    "EnergyParams",
    "EnergyReport",
    "FitConfig",
    "FitResult",
    "FormatError",
    "KINDS",
    "MetricsReport",
    "MultiCoordElasticMap",
    "PointConstraint",
    "SYNTH_SHAPES",
    "SizeError",
    "WeightState",
    "angular_similarity",
    "assemble",
    "assign",
    "build_matrix",
    "build_set",
    "compute_betas",
    "compute_smoothing",
    "energies",
    "fit",
    "frechet",
    "init_nodes",
    "jerk",
    "load_demonstrations",
    "optimize_alphas",
    "per_demo_clusterings",
    "report",
    "reproduce",
    "resample",
    "solve",
    "solve_assembled",
    "synth_demos",
    "transform",
]
