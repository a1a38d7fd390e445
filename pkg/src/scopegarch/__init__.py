"""Finite-sample confidence regions for GARCH parameters.

Estimate GARCH(p,q) models by Gaussian quasi-maximum likelihood and build
confidence regions four ways: an exact, distribution-free construction that
ranks the score among score recomputations under permuted residuals, plus
three classical benchmarks (asymptotic Wald ellipsoid, residual bootstrap,
and LR bootstrap).  A Monte Carlo harness measures coverage and region size,
and a CLI drives grid evaluation, experiments, and market-data pipelines
from JSON configs.
"""

__version__ = "0.1.0"

from ._backend import BACKEND, HAVE_COMPILED
from .baselines import (
    BootstrapSample,
    Ellipsoid,
    asymptotic_region,
    bootstrap_region_membership,
    lr_bootstrap_pvalue,
    lr_statistic,
    residual_bootstrap,
)
from .errors import (
    ConfigError,
    DataError,
    DegenerateData,
    DegenerateSample,
    DidNotConverge,
    DimensionMismatch,
    InvalidPrice,
    NotStationary,
    NumericalError,
    ScopeGarchError,
    SingularInformation,
)
from .garch import (
    ModelOrders,
    ParamVector,
    SeriesSample,
    initial_values,
    residuals,
    simulate,
    standardize,
    unconditional_variance,
    variance_path,
)
from .harness import (
    METHODS,
    CoverageReport,
    NoiseSpec,
    empirical_coverage,
    generate_noise,
    relative_area,
    sample_unit_variance_slice,
)
from .qml import (
    CovarianceEstimate,
    OptimizerConfig,
    QmlFit,
    asymptotic_covariance,
    neg_quasi_loglik,
    qmle_fit,
    score,
)
from .scope import (
    PermutationSet,
    RankField,
    RegionEvaluator,
    ScopeConfig,
    in_region,
    perturbed_score,
    rank,
    rank_field,
)

__all__ = [
    "__version__",
    "BACKEND",
    "HAVE_COMPILED",
    # errors
    "ScopeGarchError",
    "ConfigError",
    "DataError",
    "NumericalError",
    "DimensionMismatch",
    "NotStationary",
    "DegenerateSample",
    "DegenerateData",
    "InvalidPrice",
    "DidNotConverge",
    "SingularInformation",
    # model core
    "ModelOrders",
    "ParamVector",
    "SeriesSample",
    "initial_values",
    "unconditional_variance",
    "variance_path",
    "simulate",
    "residuals",
    "standardize",
    # estimation
    "OptimizerConfig",
    "QmlFit",
    "CovarianceEstimate",
    "qmle_fit",
    "neg_quasi_loglik",
    "score",
    "asymptotic_covariance",
    # permutation regions
    "PermutationSet",
    "ScopeConfig",
    "RankField",
    "RegionEvaluator",
    "perturbed_score",
    "rank",
    "in_region",
    "rank_field",
    # baselines
    "Ellipsoid",
    "BootstrapSample",
    "asymptotic_region",
    "residual_bootstrap",
    "bootstrap_region_membership",
    "lr_statistic",
    "lr_bootstrap_pvalue",
    # experiments
    "METHODS",
    "NoiseSpec",
    "CoverageReport",
    "generate_noise",
    "empirical_coverage",
    "relative_area",
    "sample_unit_variance_slice",
]
