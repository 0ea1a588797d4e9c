"""Quasi-arithmetic means on probability spaces and the switch equation.

The package evaluates generalized (quasi-arithmetic) means for a catalog
of generator functions, computes the residual of the mean-commutation
("switch") equation in discrete and continuous form, searches for
counterexample instances with seeded derivative-free restarts, detects
affine relations between generators, and ships deterministic
verification suites tying each claim to a pass/fail run.
"""

from ._backend import backend_name
from .affinity import (
    AffineFit,
    PhiFunction,
    PhiSurface,
    build_phi_surface,
    check_kappa_affine,
    daroczy_pales_check,
    detect_affine,
    normalize_pair,
)
from .generators import (
    GeneratorImage,
    GeneratorSpec,
    Interval,
    affine,
    bisect_invert,
    evaluate,
    exponential,
    format_generator,
    identity,
    image,
    invert,
    logarithm,
    parse_generator,
    power,
)
from .means import (
    BilinearKernel,
    StepKernel,
    ValueMatrix,
    check_kernel_range,
    continuous_mean,
    discrete_mean,
    discrete_mean_flagged,
    double_mean,
    double_mean_flagged,
    double_mean_staged,
)
from .measures import (
    ProbabilityVector,
    SimpleMeasure,
    expectation,
    integrate,
    parse_weights,
    validate,
)
from .search import (
    SearchConfig,
    SearchResult,
    apply_constraint,
    maximize_residual,
    rank_one_matrix,
    symmetrize,
)
from .switch import (
    ContinuousSwitchInstance,
    ResidualReport,
    SwitchInstance,
    continuous_residual,
    discrete_residual,
    reduce_to_discrete,
)
from .verify import CATALOG, CATALOG_INTERVAL, SUITE_NAMES, SuiteReport, run_all, run_suite

__version__ = "0.1.0"

__all__ = [
    "AffineFit",
    "BilinearKernel",
    "CATALOG",
    "CATALOG_INTERVAL",
    "ContinuousSwitchInstance",
    "GeneratorImage",
    "GeneratorSpec",
    "Interval",
    "PhiFunction",
    "PhiSurface",
    "ProbabilityVector",
    "ResidualReport",
    "SUITE_NAMES",
    "SearchConfig",
    "SearchResult",
    "SimpleMeasure",
    "StepKernel",
    "SuiteReport",
    "SwitchInstance",
    "ValueMatrix",
    "affine",
    "apply_constraint",
    "backend_name",
    "bisect_invert",
    "build_phi_surface",
    "check_kappa_affine",
    "check_kernel_range",
    "continuous_mean",
    "continuous_residual",
    "daroczy_pales_check",
    "detect_affine",
    "discrete_mean",
    "discrete_mean_flagged",
    "discrete_residual",
    "double_mean",
    "double_mean_flagged",
    "double_mean_staged",
    "evaluate",
    "expectation",
    "exponential",
    "format_generator",
    "identity",
    "image",
    "integrate",
    "invert",
    "logarithm",
    "maximize_residual",
    "normalize_pair",
    "parse_generator",
    "parse_weights",
    "power",
    "rank_one_matrix",
    "reduce_to_discrete",
    "run_all",
    "run_suite",
    "symmetrize",
    "validate",
]
