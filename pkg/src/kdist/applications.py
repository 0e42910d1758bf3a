"""Predictive-design quantities built on the K-prime and K-square cdfs.

Two-group comparison with a conjugate (or pilot-study posterior) prior: the
predictive distribution of the shifted t statistic, of the lower confidence
limit and of the standardized difference are scaled K-prime variates.  For
g-group ANOVA with a pilot F ratio, the predictive F ratio is a scaled
K-square variate.  Sample correlation cdfs are K-prime / K-square special
cases as well.
"""

import math
from dataclasses import dataclass

from .kprime import KPrimeParams, kprime_cdf
from .ksquare import KSquareParams, central_f_cdf, ksquare_cdf
from .series import CdfResult, ConvergenceError, ErrorBudget, Status
from .special import DomainError, student_t_cdf, student_t_sf

__all__ = [
    "PilotStudy",
    "DesignGoal",
    "UnachievableTarget",
    "student_t_quantile",
    "central_f_quantile",
    "predictive_t_probability",
    "predictive_t_limit",
    "predictive_lower_limit_cdf",
    "standardized_difference_cdf",
    "predictive_F_probability",
    "sample_size_search",
    "correlation_cdf",
    "multiple_correlation_sq_cdf",
]

QUANTILE_TOL = 1e-10
N_MAX = 10_000_000


@dataclass(frozen=True)
class PilotStudy:
    """Prior information from a pilot study with n0 subjects per group."""

    d0: float
    s0: float
    n0: int
    q0: int = None

    def __post_init__(self):
        if self.q0 is None:
            object.__setattr__(self, "q0", 2 * self.n0 - 2)
        if not self.s0 > 0:
            raise DomainError(f"s0 must be positive, got {self.s0}")
        if self.n0 < 2 or self.q0 < 1:
            raise DomainError(f"need n0 >= 2 and q0 >= 1, got n0={self.n0}, q0={self.q0}")

    def t0(self, delta0):
        return (self.d0 - delta0) / (self.s0 * math.sqrt(2.0 / self.n0))


@dataclass(frozen=True)
class DesignGoal:
    delta0: float = 0.0
    alpha: float = 0.05
    target_power: float = 0.8

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 0 < self.target_power < 1:
            raise DomainError(f"target_power must lie in (0, 1), got {self.target_power}")


class UnachievableTarget(ValueError):
    """No sample size reaches the requested predictive probability."""


def _bisect_upper(f, lo, hi, target, tol):
    # f increasing; smallest x in [lo, hi] with f(x) >= target, to tol
    while hi - lo > tol * max(1.0, abs(hi)):
        mid = 0.5 * (lo + hi)
        if f(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def student_t_quantile(alpha, q, tol=QUANTILE_TOL):
    """Upper alpha point of t_q: Pr(t_q > t) = alpha."""
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    hi = 1.0
    while student_t_sf(hi, q) > alpha:
        hi *= 2.0
    lo = -hi
    return _bisect_upper(lambda t: student_t_cdf(t, q), lo, hi, 1.0 - alpha, tol)


def central_f_quantile(alpha, p, r, tol=QUANTILE_TOL):
    """Upper alpha point of F_{p,r}."""
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    hi = 1.0
    while central_f_cdf(hi, p, r) < 1.0 - alpha:
        hi *= 2.0
    return _bisect_upper(lambda f: central_f_cdf(f, p, r), 0.0, hi, 1.0 - alpha, tol)


def _checked(result):
    return result.raise_for_status()


def _complement(result):
    return result.shifted(1.0, -1.0).clamp()


def predictive_t_probability(pilot, goal, n, budget=None):
    """Predictive probability that the shifted two-sample t test rejects.

    t ~ sqrt(1 + n/n0) K'_{q0,q}(t0 / sqrt(1 + n0/n)), q = 2n - 2, and the
    result is Pr(t > t_{q,alpha}).
    """
    if n < 2:
        raise DomainError(f"n must be at least 2, got {n}")
    q = 2 * n - 2
    t_crit = student_t_quantile(goal.alpha, q)
    a = pilot.t0(goal.delta0) / math.sqrt(1.0 + pilot.n0 / n)
    x = t_crit / math.sqrt(1.0 + n / pilot.n0)
    res = _checked(kprime_cdf(KPrimeParams(pilot.q0, q, a), x, budget))
    return _complement(res)


def predictive_t_limit(pilot, goal):
    """Limit of predictive_t_probability as n grows: Pr(t_{q0} < t0)."""
    return student_t_cdf(pilot.t0(goal.delta0), pilot.q0)


def predictive_lower_limit_cdf(pilot, goal, n, threshold, budget=None):
    """Pr(lower confidence limit > threshold) under the predictive law.

    l = d0 - s0 sqrt(2/n0 + 2/n) K'_{q,q0}(t_{q,alpha} / sqrt(1 + n/n0)).
    At threshold = delta0 this equals predictive_t_probability.
    """
    if n < 2:
        raise DomainError(f"n must be at least 2, got {n}")
    if threshold == -math.inf:
        return CdfResult(1.0, 0.0, 0, Status.CONVERGED)
    if threshold == math.inf:
        return CdfResult(0.0, 0.0, 0, Status.CONVERGED)
    q = 2 * n - 2
    t_crit = student_t_quantile(goal.alpha, q)
    scale = pilot.s0 * math.sqrt(2.0 / pilot.n0 + 2.0 / n)
    a = t_crit / math.sqrt(1.0 + n / pilot.n0)
    # l > threshold  <=>  K' < (d0 - threshold) / scale
    x = (pilot.d0 - threshold) / scale
    return _checked(kprime_cdf(KPrimeParams(q, pilot.q0, a), x, budget))


def standardized_difference_cdf(pilot, n, x, budget=None):
    """Pr(d/s < x) for a future two-group experiment with n per group.

    d/s ~ sqrt(2(n0+n)/(n0 n)) K'_{q0,q}((d0/s0) sqrt(n0 n / (2(n0+n)))).
    Returns the raw CdfResult; its status may be AccuracyNotAttainable for
    very large n.
    """
    if n < 2:
        raise DomainError(f"n must be at least 2, got {n}")
    if math.isinf(x):
        return CdfResult(1.0 if x > 0 else 0.0, 0.0, 0, Status.CONVERGED)
    n0 = pilot.n0
    ratio = n0 * n / (2.0 * (n0 + n))
    a = pilot.d0 / pilot.s0 * math.sqrt(ratio)
    return kprime_cdf(KPrimeParams(pilot.q0, 2 * n - 2, a), x * math.sqrt(ratio), budget)


def predictive_F_probability(g, n0, F0, n, alpha, budget=None):
    """Predictive probability of a significant one-way ANOVA F test.

    F ~ ((1 + n/n0)/(g-1)) K^2_{g-1, g n0 - g, g n - g}((g-1) F0 / (1 + n0/n)).
    """
    if g < 2:
        raise DomainError(f"need at least two groups, got g={g}")
    if n < 2 or n0 < 2:
        raise DomainError(f"need n, n0 >= 2, got n={n}, n0={n0}")
    if not F0 > 0:
        raise DomainError(f"F0 must be positive, got {F0}")
    p, q, r = g - 1, g * n0 - g, g * n - g
    f_crit = central_f_quantile(alpha, p, r)
    a2 = p * F0 / (1.0 + n0 / n)
    x = f_crit * p / (1.0 + n / n0)
    res = _checked(ksquare_cdf(KSquareParams(p, q, r, a2), x, budget))
    return _complement(res)


def sample_size_search(probability, target, n_min=2, n_max=N_MAX, limit=None):
    """Smallest n >= n_min with probability(n) >= target.

    ``probability`` maps n to a CdfResult (or float).  The bracket grows
    geometrically from n_min, then bisection narrows it.  ``limit`` is the
    supremum of the probability as n grows, when known; a target at or above
    it is rejected up front.  The search assumes the probability increases
    with n; every evaluated point is checked against that afterwards.
    """
    seen = {}

    def value(n):
        if n not in seen:
            res = probability(n)
            seen[n] = (res.value, res.error_bound) if isinstance(res, CdfResult) else (res, 0.0)
        return seen[n][0]

    if limit is not None and target >= limit:
        raise UnachievableTarget(
            f"target {target} is not below the large-n limit {limit:.6f}")
    if value(n_min) >= target:
        return n_min
    lo, hi = n_min, n_min
    while value(hi) < target:
        lo = hi
        hi *= 2
        if hi > n_max:
            if value(n_max) >= target:
                hi = n_max
                break
            raise UnachievableTarget(f"target {target} not reached for n <= {n_max}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if value(mid) >= target:
            hi = mid
        else:
            lo = mid
    points = sorted(seen.items())
    for (n1, (v1, e1)), (n2, (v2, e2)) in zip(points, points[1:]):
        if v2 < v1 - (e1 + e2):
            raise ArithmeticError(
                f"probability is not increasing in n: {v1!r} at n={n1}, {v2!r} at n={n2}")
    return hi


def correlation_cdf(n, rho, x, budget=None):
    """Pr(r < x) for the sample correlation of n bivariate normal pairs."""
    if n < 3:
        raise DomainError(f"need n >= 3, got {n}")
    if not -1 < rho < 1:
        raise DomainError(f"rho must lie in (-1, 1), got {rho}")
    if not -1 <= x <= 1:
        raise DomainError(f"x must lie in [-1, 1], got {x}")
    if x == 1:
        return CdfResult(1.0, 0.0, 0, Status.CONVERGED)
    if x == -1:
        return CdfResult(0.0, 0.0, 0, Status.CONVERGED)
    a = math.sqrt(n - 1) * rho / math.sqrt(1.0 - rho * rho)
    kx = math.sqrt(n - 2) * x / math.sqrt(1.0 - x * x)
    return kprime_cdf(KPrimeParams(n - 1, n - 2, a), kx, budget)


def multiple_correlation_sq_cdf(n, p, rho2, x, budget=None):
    """Pr(R^2 < x) for the squared multiple correlation of p variates, n cases."""
    if p < 2:
        raise DomainError(f"need p >= 2, got {p}")
    if not n > p:
        raise DomainError(f"need n > p, got n={n}, p={p}")
    if not 0 <= rho2 < 1:
        raise DomainError(f"rho2 must lie in [0, 1), got {rho2}")
    if not 0 <= x <= 1:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    if x == 0:
        return CdfResult(0.0, 0.0, 0, Status.CONVERGED)
    if x == 1:
        return CdfResult(1.0, 0.0, 0, Status.CONVERGED)
    a2 = (n - 1) * rho2 / (1.0 - rho2)
    kx = (n - p) / (p - 1) * x / (1.0 - x)
    return ksquare_cdf(KSquareParams(p - 1, n - 1, n - p, a2), kx, budget)
