"""Differentially private moments, variance, covariance and correlation.

The add-remove mechanisms ride on Bernstein-basis aggregates: the basis
vector of a record sums to 1, so the whole aggregate has L1 sensitivity 1
and one unit of Laplace noise per cell privatizes every power sum at once.
Baselines (swap-model, per-aggregate naive, two-aggregate improved), an
analytic error theory, an empirical sensitivity audit and a reproducible
Monte Carlo harness round out the package.
"""

from .version import __version__
from .errors import (
    BezierDPError,
    CapacityError,
    ConfigError,
    DataFormatError,
    DomainError,
    ReplayExhaustedError,
    UndefinedStatisticError,
)
from .bernstein import (
    MAX_DEGREE,
    MAX_VECTOR_LEN,
    basis_matrix,
    bernstein_aggregate,
    bernstein_eval,
    bezier_inverse,
    bezier_matrix,
    flat_index,
    multi_indices,
    multivariate_bernstein_eval,
    tensor_apply_inverse,
)
from .noise import NoiseSource, derive_seed, derive_substream, laplace_sample
from .stats import (
    CORRELATION_RANGE,
    COVARIANCE_RANGE,
    VARIANCE_RANGE,
    ClipRange,
    Dataset,
    clip,
    correlation_exact,
    covariance_exact,
    feasible_rxy_bounds,
    moments_unnormalized,
    standardized_moment,
    unnormalized_covariance,
    unnormalized_variance,
    variance_exact,
)
from .mechanisms import (
    MECHANISM_IDS,
    Estimate,
    GeneralStatistic,
    PreparedMechanism,
    bezier_covariance,
    bezier_release,
    bezier_variance,
    centered_moment_statistic,
    correlation_composed,
    correlation_naive,
    correlation_statistic,
    general_statistic,
    improved_add_remove,
    kurtosis_statistic,
    naive_add_remove,
    prepare,
    prepare_moment_release,
    skewness_statistic,
    swap_laplace,
    transformed_variance,
    variance_via_covariance,
)
from .theory import (
    InstanceConstants,
    covariance_instance_constant,
    instance_constants,
    inverse_row_weight,
    moment_release_mse,
    predicted_normalized_mse,
    sigma_lower_bound,
    worst_case_table,
)
from .audit import (
    NeighborPair,
    SensitivityReport,
    bernstein_map,
    builtin_maps,
    empirical_sensitivity,
    random_neighbor_pair,
    swap_covariance_map,
    swap_variance_map,
    transformed_pair_map,
    unnormalized_covariance_map,
    unnormalized_variance_map,
)
from .harness import (
    DATA_CHANNEL,
    BenchmarkReport,
    BenchmarkRow,
    ExperimentConfig,
    generate_dataset,
    load_csv_dataset,
    parse_distribution,
    resolve_mechanism,
    run_benchmark,
    run_estimate,
    statistic_dimension,
)

__all__ = [
    "__version__",
    # errors
    "BezierDPError",
    "CapacityError",
    "ConfigError",
    "DataFormatError",
    "DomainError",
    "ReplayExhaustedError",
    "UndefinedStatisticError",
    # basis
    "MAX_DEGREE",
    "MAX_VECTOR_LEN",
    "basis_matrix",
    "bernstein_aggregate",
    "bernstein_eval",
    "bezier_inverse",
    "bezier_matrix",
    "flat_index",
    "multi_indices",
    "multivariate_bernstein_eval",
    "tensor_apply_inverse",
    # noise
    "NoiseSource",
    "derive_seed",
    "derive_substream",
    "laplace_sample",
    # data / exact statistics
    "CORRELATION_RANGE",
    "COVARIANCE_RANGE",
    "VARIANCE_RANGE",
    "ClipRange",
    "Dataset",
    "clip",
    "correlation_exact",
    "covariance_exact",
    "feasible_rxy_bounds",
    "moments_unnormalized",
    "standardized_moment",
    "unnormalized_covariance",
    "unnormalized_variance",
    "variance_exact",
    # mechanisms
    "MECHANISM_IDS",
    "Estimate",
    "GeneralStatistic",
    "PreparedMechanism",
    "bezier_covariance",
    "bezier_release",
    "bezier_variance",
    "centered_moment_statistic",
    "correlation_composed",
    "correlation_naive",
    "correlation_statistic",
    "general_statistic",
    "improved_add_remove",
    "kurtosis_statistic",
    "naive_add_remove",
    "prepare",
    "prepare_moment_release",
    "skewness_statistic",
    "swap_laplace",
    "transformed_variance",
    "variance_via_covariance",
    # theory
    "InstanceConstants",
    "covariance_instance_constant",
    "instance_constants",
    "inverse_row_weight",
    "moment_release_mse",
    "predicted_normalized_mse",
    "sigma_lower_bound",
    "worst_case_table",
    # audit
    "NeighborPair",
    "SensitivityReport",
    "bernstein_map",
    "builtin_maps",
    "empirical_sensitivity",
    "random_neighbor_pair",
    "swap_covariance_map",
    "swap_variance_map",
    "transformed_pair_map",
    "unnormalized_covariance_map",
    "unnormalized_variance_map",
    # harness
    "DATA_CHANNEL",
    "BenchmarkReport",
    "BenchmarkRow",
    "ExperimentConfig",
    "generate_dataset",
    "load_csv_dataset",
    "parse_distribution",
    "resolve_mechanism",
    "run_benchmark",
    "run_estimate",
    "statistic_dimension",
]
