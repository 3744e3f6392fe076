"""Guaranteed-privacy functional perturbation for distributed nonconvex
optimization.

The pipeline: decompose each agent objective into a sign-stable
remainder plus a linear part (`decomposition`), certify range
enclosures and privacy levels for linear perturbations (`privacy`),
design robust perturbation slopes by linear programming (`slopes`),
bound and measure the induced optimization error (`accuracy`), and run
distributed solvers on the perturbed problem (`solvers`, `network`).
`harness` and `cli` wrap the pipeline into reproducible experiments.
"""

from .accuracy import (
    AccuracyReport,
    admissible_slope,
    certify_reference_optimizers,
    delta_star,
    empirical_error,
    upper_bound,
    upper_bound_aggregate,
)
from .decomposition import (
    JssDecomposition,
    SlopeVertex,
    decompose,
    enumerate_vertices,
    inclusion,
    range_width,
    remainder_extrema,
)
from .errors import (
    AdjacencyError,
    CapacityError,
    DimensionMismatchError,
    PreconditionError,
    SolverError,
    TheoremViolationError,
    UsageError,
)
from .fixtures import Fixture, load_fixture, nonconvex_trio
from .harness import ExperimentConfig, SweepResult, run_sweep, sample_slopes
from .intervals import Box, IntervalVector, contains, diameter, intersect
from .network import NetworkGraph, complete_graph, metropolis_weights
from .objectives import (
    AgentProblem,
    ObjectiveSpec,
    PolynomialObjective,
    penalize,
    poly_to_spec,
    sum_objective,
)
from .privacy import (
    Mechanism,
    PrivacyReport,
    apply_mechanism,
    epsilon_gap,
    minimizing_decomposition,
    privacy_report,
    verify_privacy_inequality,
)
from .slopes import SlopeDesignResult, build_lp, design_slopes, floor_slopes, solve_lp
from .solvers import AlgorithmConfig, Trace, default_starts, run, terminal_points

__version__ = "0.1.0"

__all__ = [
    "AccuracyReport",
    "AdjacencyError",
    "AgentProblem",
    "AlgorithmConfig",
    "Box",
    "CapacityError",
    "DimensionMismatchError",
    "ExperimentConfig",
    "Fixture",
    "IntervalVector",
    "JssDecomposition",
    "Mechanism",
    "NetworkGraph",
    "ObjectiveSpec",
    "PolynomialObjective",
    "PreconditionError",
    "PrivacyReport",
    "SlopeDesignResult",
    "SlopeVertex",
    "SolverError",
    "SweepResult",
    "TheoremViolationError",
    "Trace",
    "UsageError",
    "admissible_slope",
    "apply_mechanism",
    "build_lp",
    "certify_reference_optimizers",
    "complete_graph",
    "contains",
    "decompose",
    "default_starts",
    "delta_star",
    "design_slopes",
    "diameter",
    "empirical_error",
    "enumerate_vertices",
    "epsilon_gap",
    "floor_slopes",
    "inclusion",
    "intersect",
    "load_fixture",
    "metropolis_weights",
    "minimizing_decomposition",
    "nonconvex_trio",
    "penalize",
    "poly_to_spec",
    "privacy_report",
    "range_width",
    "remainder_extrema",
    "run",
    "run_sweep",
    "sample_slopes",
    "solve_lp",
    "sum_objective",
    "terminal_points",
    "upper_bound",
    "upper_bound_aggregate",
    "verify_privacy_inequality",
]
