"""Cumulative distribution function of the K-square distribution.

K^2_{p,q,r}(a^2) is a negative-binomial mixture over j of scaled beta
variates: Pr(K^2 < x) = sum_j g_j I_{px/(r+px)}(p/2 + j, r/2), with g_j
the NB(q/2, q/(q+a^2)) probabilities.
"""

import enum
import math
from dataclasses import dataclass

from .series import (
    Chain,
    CdfResult,
    ErrorBudget,
    MixtureSeries,
    Status,
    resolve_start_index,
    run_method1,
    run_method2,
    select_start_index,
)
from .special import DomainError, inc_beta, log_beta, log_beta_power_term

__all__ = [
    "KSquareParams",
    "SpecialCase",
    "ksquare_cdf",
    "ksquare_series",
    "ksquare_special_case",
    "ksquare_weight",
    "central_f_cdf",
    "LARGE_DF",
]

# stand-in for an infinite number of degrees of freedom
LARGE_DF = 1e8


class SpecialCase(str, enum.Enum):
    CENTRAL_F = "central F"
    NONCENTRAL_F = "noncentral F"
    LAMBDA_SQUARE = "lambda-square"
    NONCENTRAL_CHI_SQUARE = "noncentral chi-square/p"
    GENERAL = "general"


@dataclass(frozen=True)
class KSquareParams:
    p: float
    q: float
    r: float
    a2: float

    def __post_init__(self):
        if not (self.p > 0 and self.q > 0 and self.r > 0):
            raise DomainError(
                f"K-square degrees of freedom must be positive, got p={self.p}, q={self.q}, r={self.r}")
        if not self.a2 >= 0:
            raise DomainError(f"K-square noncentrality must be >= 0, got a2={self.a2}")

    def finite(self):
        """Copy with infinite degrees of freedom replaced by LARGE_DF."""
        q = LARGE_DF if math.isinf(self.q) else self.q
        r = LARGE_DF if math.isinf(self.r) else self.r
        return KSquareParams(self.p, q, r, self.a2)


def ksquare_special_case(params):
    if params.a2 == 0:
        return SpecialCase.CENTRAL_F
    q_inf, r_inf = math.isinf(params.q), math.isinf(params.r)
    if q_inf and r_inf:
        return SpecialCase.NONCENTRAL_CHI_SQUARE
    if q_inf:
        return SpecialCase.NONCENTRAL_F
    if r_inf:
        return SpecialCase.LAMBDA_SQUARE
    return SpecialCase.GENERAL


def _log_nb_weight(j, shape, log_u, log_v):
    # log of Gamma(shape + j) / (Gamma(j + 1) Gamma(shape)) u^shape v^j
    if j == 0:
        return shape * log_u
    return -math.log(j) - log_beta(j, shape) + shape * log_u + j * log_v


def _mixing_logs(q, a2):
    # log(q/(q+a2)) and log(a2/(q+a2)) without forming 1 - small
    return -math.log1p(a2 / q), -math.log1p(q / a2)


def ksquare_weight(j, params):
    """g_j: negative-binomial probability of j with size q/2, p = q/(q+a^2)."""
    if params.a2 == 0:
        return 1.0 if j == 0 else 0.0
    log_u, log_v = _mixing_logs(params.q, params.a2)
    return math.exp(_log_nb_weight(j, 0.5 * params.q, log_u, log_v))


def _beta_argument(params, x):
    px = params.p * x
    return px / (params.r + px), params.r / (params.r + px)


def central_f_cdf(x, p, r):
    """Pr(F_{p,r} < x)."""
    if x <= 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    px = p * x
    return inc_beta(px / (r + px), 0.5 * p, 0.5 * r, y=r / (r + px))


def ksquare_series(params, x, method="method2"):
    """Build the mixture series for Pr(K^2 < x), x > 0, a2 > 0."""
    p2, q2, r2 = 0.5 * params.p, 0.5 * params.q, 0.5 * params.r
    z, y = _beta_argument(params, x)
    log_u, log_v = _mixing_logs(params.q, params.a2)
    v = params.a2 / (params.q + params.a2)

    def log_increment(j):
        return log_beta_power_term(p2 + j, r2, z, y) - math.log(p2 + j)

    mode = select_start_index(params.a2, params.q, "ksquare")
    k = resolve_start_index(mode, z, log_increment, method)

    chain = Chain(
        start=k,
        weight=math.exp(_log_nb_weight(k, q2, log_u, log_v)),
        term=inc_beta(z, p2 + k, r2, y=y),
        increment=math.exp(log_increment(k)),
    )
    return MixtureSeries(
        chains=(chain,),
        weight_ratio=lambda j: (q2 + j) / (j + 1) * v,
        increment_ratio=lambda j: (p2 + r2 + j) / (p2 + j + 1) * z,
        term_at_zero=inc_beta(z, p2, r2, y=y),
        step=1,
        sign=1,
    )


def ksquare_cdf(params, x, budget=None, method="method2"):
    """Pr(K^2_{p,q,r}(a^2) < x).

    ``method`` is ``method2`` (mode start, lowered on increment underflow),
    ``method2-modified`` (always lowered) or ``method1`` (forward from 0).
    Infinite degrees of freedom are replaced by ``LARGE_DF``.
    """
    if budget is None:
        budget = ErrorBudget()
    if math.isnan(x):
        raise DomainError("x is NaN")
    if x <= 0:
        return CdfResult(0.0, 0.0, 0, Status.CONVERGED)
    if math.isinf(x):
        return CdfResult(1.0, 0.0, 0, Status.CONVERGED)
    params = params.finite()
    if params.a2 == 0:
        return CdfResult(central_f_cdf(x, params.p, params.r), budget.epsilon, 0,
                         Status.CONVERGED)
    series = ksquare_series(params, x, method)
    if method == "method1":
        return run_method1(series, budget)
    return run_method2(series, budget)
