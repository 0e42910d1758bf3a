"""Slow reference evaluator for the K-square and K-prime cdfs.

Every weight and every incomplete beta term is evaluated directly (no
recurrences), using scipy's special functions rather than the ones in
``kdist.special``, and summed forward from j = 0 with ``math.fsum``.  It is
meant for tests and self-checks only.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sc
from scipy import stats

from .ksquare import KSquareParams, LARGE_DF
from .kprime import KPrimeParams

__all__ = ["OracleConfig", "OracleError", "oracle_ksquare_cdf", "oracle_kprime_cdf"]

BLOCK = 2048


@dataclass(frozen=True)
class OracleConfig:
    tolerance: float = 1e-12
    max_terms: int = 10_000_000

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance!r}")


class OracleError(RuntimeError):
    pass


def _finite(df):
    return LARGE_DF if math.isinf(df) else df


def _forward_sum(log_weight, term, total_mass, signs, cfg):
    # sum_j sign_j g_j H_j until H_j * (total_mass - sum_{i<=j} g_i) < tolerance
    terms = []
    weights = []
    start = 0
    while start < cfg.max_terms:
        size = min(BLOCK, cfg.max_terms - start)
        j = np.arange(start, start + size, dtype=float)
        g = np.exp(log_weight(j))
        h = term(j)
        prior = math.fsum(weights)
        remaining = total_mass - (prior + np.cumsum(g))
        bound = h * np.maximum(remaining, 0.0)
        hit = np.flatnonzero(bound < cfg.tolerance)
        stop = hit[0] + 1 if hit.size else size
        terms.extend((signs(j[:stop]) * g[:stop] * h[:stop]).tolist())
        weights.extend(g[:stop].tolist())
        if hit.size:
            return math.fsum(terms)
        start += size
    raise OracleError(f"oracle did not converge within {cfg.max_terms} terms")


def oracle_ksquare_cdf(params, x, cfg=OracleConfig()):
    """Direct-summation reference for Pr(K^2_{p,q,r}(a^2) < x)."""
    if x <= 0:
        return 0.0
    p, q, r, a2 = params.p, _finite(params.q), _finite(params.r), params.a2
    z = p * x / (r + p * x)
    if a2 == 0:
        return float(sc.betainc(p / 2, r / 2, z))
    log_u = -math.log1p(a2 / q)
    log_v = -math.log1p(q / a2)

    def log_weight(j):
        return (sc.gammaln(q / 2 + j) - sc.gammaln(j + 1) - sc.gammaln(q / 2)
                + (q / 2) * log_u + j * log_v)

    def term(j):
        return sc.betainc(p / 2 + j, r / 2, z)

    return _forward_sum(log_weight, term, 1.0, lambda j: 1.0, cfg)


def oracle_kprime_cdf(params, x, cfg=OracleConfig()):
    """Direct-summation reference for Pr(K'_{q,r}(a) < x)."""
    q, r, a = _finite(params.q), _finite(params.r), params.a
    if a == 0:
        return float(stats.t.cdf(x, r))
    if a < 0:
        return 1.0 - oracle_kprime_cdf(KPrimeParams(params.q, params.r, -a), -x, cfg)
    tail = float(stats.t.sf(a, q))
    if x == 0:
        return tail
    a2 = a * a
    z = x * x / (r + x * x)
    log_u = -math.log1p(a2 / q)
    log_v = -math.log1p(q / a2)

    def log_weight(j):
        return (math.log(0.5) + sc.gammaln((q + j) / 2) - sc.gammaln(j / 2 + 1)
                - sc.gammaln(q / 2) + (q / 2) * log_u + (j / 2) * log_v)

    def term(j):
        return sc.betainc((j + 1) / 2, r / 2, z)

    if x > 0:
        signs = lambda j: 1.0
    else:
        signs = lambda j: np.where(j % 2 == 0, 1.0, -1.0)
    series = _forward_sum(log_weight, term, 1.0 - tail, signs, cfg)
    return tail + series if x > 0 else tail - series
