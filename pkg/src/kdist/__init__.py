"""Error-controlled cdfs of the K-square and K-prime distributions."""

from .applications import (
    DesignGoal,
    PilotStudy,
    UnachievableTarget,
    central_f_quantile,
    correlation_cdf,
    multiple_correlation_sq_cdf,
    predictive_F_probability,
    predictive_lower_limit_cdf,
    predictive_t_limit,
    predictive_t_probability,
    sample_size_search,
    standardized_difference_cdf,
    student_t_quantile,
)
from .kprime import KPrimeParams, kprime_cdf
from .ksquare import KSquareParams, SpecialCase, central_f_cdf, ksquare_cdf, ksquare_special_case
from .series import (
    DOUBLE_EPSILON,
    SINGLE_EPSILON,
    CdfResult,
    ConvergenceError,
    ErrorBudget,
    Status,
)
from .special import DomainError, inc_beta, log_beta, log_gamma, student_t_cdf, student_t_sf

__version__ = "0.1.0"

__all__ = [
    "CdfResult",
    "ConvergenceError",
    "DOUBLE_EPSILON",
    "DesignGoal",
    "DomainError",
    "ErrorBudget",
    "KPrimeParams",
    "KSquareParams",
    "PilotStudy",
    "SINGLE_EPSILON",
    "SpecialCase",
    "Status",
    "UnachievableTarget",
    "central_f_cdf",
    "central_f_quantile",
    "correlation_cdf",
    "inc_beta",
    "kprime_cdf",
    "ksquare_cdf",
    "ksquare_special_case",
    "log_beta",
    "log_gamma",
    "multiple_correlation_sq_cdf",
    "predictive_F_probability",
    "predictive_lower_limit_cdf",
    "predictive_t_limit",
    "predictive_t_probability",
    "sample_size_search",
    "standardized_difference_cdf",
    "student_t_cdf",
    "student_t_quantile",
    "student_t_sf",
]
