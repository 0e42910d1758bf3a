"""Cumulative distribution function of the K-prime distribution.

K'_{q,r}(a) is distributed as (Z + a sqrt(chi2_q / q)) / sqrt(chi2_r / r).
For a > 0 the cdf splits at zero into Pr(t_q > a) plus a mixture over j of
I_{x^2/(r+x^2)}((j+1)/2, r/2) terms; when x < 0 the mixture alternates in
sign, and the even and odd indices are summed as two separate chains.
"""

import math
from dataclasses import dataclass

from .ksquare import LARGE_DF, _log_nb_weight, _mixing_logs
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
from .special import DomainError, inc_beta, log_beta_power_term, student_t_cdf, student_t_sf

__all__ = ["KPrimeParams", "kprime_cdf", "kprime_series", "kprime_weight"]


@dataclass(frozen=True)
class KPrimeParams:
    q: float
    r: float
    a: float

    def __post_init__(self):
        if not (self.q > 0 and self.r > 0):
            raise DomainError(
                f"K-prime degrees of freedom must be positive, got q={self.q}, r={self.r}")
        if math.isnan(self.a) or math.isinf(self.a):
            raise DomainError(f"K-prime noncentrality must be finite, got a={self.a}")

    def finite(self):
        q = LARGE_DF if math.isinf(self.q) else self.q
        r = LARGE_DF if math.isinf(self.r) else self.r
        return KPrimeParams(q, r, self.a)


def kprime_weight(j, params):
    """Mixing weight g_j of the positive-part series.

    g_j = 1/2 Gamma((q+j)/2) / (Gamma(j/2 + 1) Gamma(q/2))
          * (q/(q+a^2))^(q/2) * (a^2/(q+a^2))^(j/2)

    Even-index weights add up to 1/2; all of them to Pr(t_q < |a|).
    """
    a2 = params.a * params.a
    if a2 == 0:
        raise DomainError("K-prime weights are undefined for a = 0")
    log_u, log_v = _mixing_logs(params.q, a2)
    return 0.5 * math.exp(_log_nb_weight(0.5 * j, 0.5 * params.q, log_u, log_v))


def kprime_series(params, x, method="method2"):
    """Series sum_j s^j g_j I_z((j+1)/2, r/2) for a > 0, x != 0.

    Returns the series together with Pr(t_q > a).  The weights only add up
    to Pr(t_q < a); each chain is nevertheless given mass 1/2, so the
    truncation bound charges the unvisited remainder as 1 - sum(visited g).
    That overstates it by Pr(t_q > a) and stays a valid upper bound.
    """
    q, r, a = params.q, params.r, params.a
    a2 = a * a
    x2 = x * x
    z, y = x2 / (r + x2), r / (r + x2)
    r2 = 0.5 * r
    log_u, log_v = _mixing_logs(q, a2)
    v = a2 / (q + a2)
    tail = student_t_sf(a, q)

    def log_increment(j):
        b = 0.5 * (j + 1)
        return log_beta_power_term(b, r2, z, y) - math.log(b)

    def log_increment_pair(j):
        return min(log_increment(j), log_increment(j + 1))

    mode = select_start_index(a2, q, "kprime")
    k = resolve_start_index(mode, z, log_increment_pair, method)

    chains = []
    for start in (k, k + 1):
        chains.append(Chain(
            start=start,
            weight=0.5 * math.exp(_log_nb_weight(0.5 * start, 0.5 * q, log_u, log_v)),
            term=inc_beta(z, 0.5 * (start + 1), r2, y=y),
            increment=math.exp(log_increment(start)),
            mass=0.5,
        ))
    series = MixtureSeries(
        chains=tuple(chains),
        weight_ratio=lambda j: (q + j) / (j + 2) * v,
        increment_ratio=lambda j: (j + r + 1) / (j + 3) * z,
        term_at_zero=inc_beta(z, 0.5, r2, y=y),
        step=2,
        sign=1 if x > 0 else -1,
    )
    return series, tail


def kprime_cdf(params, x, budget=None, method="method2"):
    """Pr(K'_{q,r}(a) < x).

    Negative a is reflected onto a > 0; a = 0 is Student's t with r
    degrees of freedom.  Infinite degrees of freedom become ``LARGE_DF``.
    """
    if budget is None:
        budget = ErrorBudget()
    if math.isnan(x):
        raise DomainError("x is NaN")
    if math.isinf(x):
        return CdfResult(1.0 if x > 0 else 0.0, 0.0, 0, Status.CONVERGED)
    params = params.finite()
    if params.a == 0:
        return CdfResult(student_t_cdf(x, params.r), budget.epsilon, 0, Status.CONVERGED)
    if params.a < 0:
        mirrored = kprime_cdf(KPrimeParams(params.q, params.r, -params.a), -x, budget, method)
        return mirrored.shifted(1.0, -1.0).clamp()
    if x == 0:
        return CdfResult(student_t_sf(params.a, params.q), budget.epsilon, 0, Status.CONVERGED)
    series, tail = kprime_series(params, x, method)
    if method == "method1":
        result = run_method1(series, budget)
    else:
        result = run_method2(series, budget)
    sign = 1.0 if x > 0 else -1.0
    return result.shifted(tail, sign, extra_error=budget.epsilon).clamp()
