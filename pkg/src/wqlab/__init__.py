"""Exact quantization laboratory for probability measures on finite
metric spaces: Wasserstein distances with certified optimal plans,
optimal and uniform quantization errors, dyadic uniform quantizers,
empirical-measure error estimation, and an inequality verification
harness."""

from .decompose import (
    DyadicDecomposition,
    build_uniform_quantizer,
    dyadic_decompose,
    reduce_counts,
    split_half,
)
from .empirical import (
    EmpiricalConfig,
    EstimateReport,
    estimate_expected_error,
    estimate_expected_two_sample,
    exact_expected_error,
    exact_expected_two_sample,
    sample_empirical,
)
from .errors import BudgetError, DomainError
from .instances import default_suite, mixture_instance
from .measures import (
    DiscreteMeasure,
    EmbeddedSpace,
    FiniteMetricSpace,
    PointMap,
    SubMeasure,
    meet_and_residuals,
    mixture,
    nearest_map,
    pushforward,
)
from .quantize import (
    QuantizerResult,
    covering_number,
    optimal_quantization_error,
    resolution,
    uniform_quantization_error,
)
from .transport import (
    TransportPlan,
    assignment_wasserstein,
    wasserstein,
    wasserstein_dollar,
    wasserstein_value,
)
from .verify import BoundReport, check_bound, run_suite, scaling_study

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "BudgetError",
    "DiscreteMeasure",
    "DomainError",
    "DyadicDecomposition",
    "EmbeddedSpace",
    "EmpiricalConfig",
    "EstimateReport",
    "FiniteMetricSpace",
    "PointMap",
    "QuantizerResult",
    "SubMeasure",
    "TransportPlan",
    "assignment_wasserstein",
    "build_uniform_quantizer",
    "check_bound",
    "covering_number",
    "default_suite",
    "dyadic_decompose",
    "estimate_expected_error",
    "estimate_expected_two_sample",
    "exact_expected_error",
    "exact_expected_two_sample",
    "meet_and_residuals",
    "mixture",
    "mixture_instance",
    "nearest_map",
    "optimal_quantization_error",
    "pushforward",
    "reduce_counts",
    "resolution",
    "run_suite",
    "sample_empirical",
    "split_half",
    "uniform_quantization_error",
    "wasserstein",
    "wasserstein_dollar",
    "wasserstein_value",
]
