"""Majority dynamics on G_{n,p}: exact numerics, asymptotic predictions,
a counter-based graph sampler, brute-force Fourier checks, and Monte
Carlo experiments."""

from .analytics import (
    Color,
    ModelParams,
    Predictions,
    fixation_advantage_bound,
    lead_threshold,
    mean_lower_bound,
    mu,
    mu_v,
    predictions,
    tail_bound,
    variance_prediction,
)
from .bounds import (
    PropositionQuery,
    SupResult,
    feasibility_check,
    min_alpha,
    objective,
    sup_over_gamma,
)
from .fourier import (
    TinyModel,
    brute_force_coefficient,
    closed_form_coefficient,
    moment_bruteforce,
    parseval_gap,
    red_count_variance,
    verify_star_basis,
)
from .graphs import (
    DENSE_CAP,
    Coloring,
    DenseGraph,
    GraphSpec,
    Outcome,
    Trajectory,
    edge_present,
    majority_step,
    red_count_after_one_step,
    run_dynamics,
    sample_dense,
)
from .numerics import (
    DiffDistribution,
    anticoncentration_report,
    diff_cdf,
    diff_distribution,
    std_normal_cdf,
)
from .records import ExperimentRecord, SummaryStats

__version__ = "0.1.0"

__all__ = [
    "Color",
    "Coloring",
    "DENSE_CAP",
    "DenseGraph",
    "DiffDistribution",
    "ExperimentRecord",
    "GraphSpec",
    "ModelParams",
    "Outcome",
    "Predictions",
    "PropositionQuery",
    "SummaryStats",
    "SupResult",
    "TinyModel",
    "Trajectory",
    "anticoncentration_report",
    "brute_force_coefficient",
    "closed_form_coefficient",
    "diff_cdf",
    "diff_distribution",
    "edge_present",
    "feasibility_check",
    "fixation_advantage_bound",
    "lead_threshold",
    "majority_step",
    "mean_lower_bound",
    "min_alpha",
    "moment_bruteforce",
    "mu",
    "mu_v",
    "objective",
    "parseval_gap",
    "predictions",
    "red_count_after_one_step",
    "red_count_variance",
    "run_dynamics",
    "sample_dense",
    "std_normal_cdf",
    "sup_over_gamma",
    "tail_bound",
    "variance_prediction",
    "verify_star_basis",
]
