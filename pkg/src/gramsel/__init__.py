"""Actuator selection for linear dynamical networks via controllability
Gramian metrics, with near-optimality certificates for the non-submodular
ones."""

from .bounds import (
    GuaranteeBound,
    certified_lower_value,
    guarantee_factor,
    lambda_min_bounds,
    trace_inverse_bounds,
)
from .exceptions import (
    EnumerationCapError,
    GramselError,
    MetricEvaluationError,
    NoAdmissibleSamplesError,
    NoCertificateError,
    NotPositiveDefiniteError,
    UnstableSystemError,
)
from .linalg import (
    LyapunovSolver,
    log_det,
    numerical_rank,
    solve_lyapunov,
    spectral_abscissa,
    sym_eigenvalues,
    sym_eigh,
    trace_inverse,
)
from .metrics import Metric, as_metric, default_regularized, evaluate, normalized_evaluate
from .networks import GraphSpec, WeightedNetwork, generate, random_stable
from .ratios import (
    RatioEstimate,
    SamplePlan,
    estimate_alpha,
    estimate_gamma,
    exhaustive_gamma_alpha,
)
from .selection import (
    BruteForceActuatorSelector,
    GreedyActuatorSelector,
    OptimalityStats,
    SelectionReport,
    brute_force,
    compare_with_optimum,
    greedy,
    greedy_vs_optimal,
    normalized_ratio,
)
from .serialize import load_instance, save_instance
from .system import GramianBundle, LinearSystem, as_actuator_set, assemble, build_bundle

__version__ = "0.1.0"

__all__ = [
    "BruteForceActuatorSelector",
    "EnumerationCapError",
    "GramianBundle",
    "GramselError",
    "GraphSpec",
    "GreedyActuatorSelector",
    "GuaranteeBound",
    "LinearSystem",
    "LyapunovSolver",
    "Metric",
    "MetricEvaluationError",
    "NoAdmissibleSamplesError",
    "NoCertificateError",
    "NotPositiveDefiniteError",
    "OptimalityStats",
    "RatioEstimate",
    "SamplePlan",
    "SelectionReport",
    "UnstableSystemError",
    "WeightedNetwork",
    "as_actuator_set",
    "as_metric",
    "assemble",
    "brute_force",
    "build_bundle",
    "certified_lower_value",
    "compare_with_optimum",
    "default_regularized",
    "estimate_alpha",
    "estimate_gamma",
    "evaluate",
    "exhaustive_gamma_alpha",
    "generate",
    "greedy",
    "greedy_vs_optimal",
    "guarantee_factor",
    "lambda_min_bounds",
    "load_instance",
    "log_det",
    "normalized_evaluate",
    "normalized_ratio",
    "numerical_rank",
    "random_stable",
    "save_instance",
    "solve_lyapunov",
    "spectral_abscissa",
    "sym_eigenvalues",
    "sym_eigh",
    "trace_inverse",
    "trace_inverse_bounds",
]
