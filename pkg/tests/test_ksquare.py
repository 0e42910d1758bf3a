import math

import numpy as np
import pytest
from scipy import stats

from kdist import golden
from kdist.ksquare import (
    KSquareParams,
    SpecialCase,
    central_f_cdf,
    ksquare_cdf,
    ksquare_special_case,
    ksquare_weight,
)
from kdist.oracle import oracle_ksquare_cdf
from kdist.series import ErrorBudget, Status
from kdist.special import DomainError

LOOSE = ErrorBudget(target_accuracy=1e-4)
TIGHT = ErrorBudget(target_accuracy=1e-9)


@pytest.mark.parametrize("x,p,q,r,a2,expected", golden.KSQUARE_TABLE)
def test_reference_table(x, p, q, r, a2, expected):
    res = ksquare_cdf(KSquareParams(p, q, r, a2), x, LOOSE)
    assert res.status is Status.CONVERGED
    assert res.value == pytest.approx(expected, abs=1e-4)


@pytest.mark.parametrize("x,p,q,r,a2,expected", golden.KSQUARE_TABLE)
def test_methods_agree(x, p, q, r, a2, expected):
    params = KSquareParams(p, q, r, a2)
    results = [ksquare_cdf(params, x, LOOSE, method=m)
               for m in ("method1", "method2", "method2-modified")]
    for res in results[1:]:
        assert abs(res.value - results[0].value) <= res.error_bound + results[0].error_bound


def test_double_precision_value():
    res = ksquare_cdf(KSquareParams(10, 100, 1e5, 80), 9.0, TIGHT)
    assert res.converged
    assert round(res.value, 4) == 0.5259


def test_support_boundary():
    params = KSquareParams(5, 5, 5, 5)
    assert ksquare_cdf(params, 0.0).value == 0.0
    assert ksquare_cdf(params, -3.0).value == 0.0
    assert ksquare_cdf(params, math.inf).value == 1.0
    with pytest.raises(DomainError):
        ksquare_cdf(params, math.nan)


def test_parameter_validation():
    with pytest.raises(DomainError):
        KSquareParams(0, 5, 5, 5)
    with pytest.raises(DomainError):
        KSquareParams(5, 5, 5, -1)


def test_special_case_tags():
    assert ksquare_special_case(KSquareParams(3, 4, 5, 0)) is SpecialCase.CENTRAL_F
    assert ksquare_special_case(KSquareParams(3, math.inf, math.inf, 2)) is \
        SpecialCase.NONCENTRAL_CHI_SQUARE
    assert ksquare_special_case(KSquareParams(3, math.inf, 5, 2)) is SpecialCase.NONCENTRAL_F
    assert ksquare_special_case(KSquareParams(3, 5, math.inf, 2)) is SpecialCase.LAMBDA_SQUARE
    assert ksquare_special_case(KSquareParams(3, 4, 5, 2)) is SpecialCase.GENERAL


@pytest.mark.parametrize("p,r,x", [(1, 1, 0.5), (3, 7, 2.0), (10, 40, 1.3), (4, 1e4, 0.2)])
def test_central_reduction(p, r, x):
    res = ksquare_cdf(KSquareParams(p, 9, r, 0.0), x)
    assert abs(res.value - stats.f.cdf(x, p, r)) <= 1e-12
    assert res.value == central_f_cdf(x, p, r)


@pytest.mark.parametrize("q,a2", [(5, 5), (20, 1000), (2, 0.3), (100, 80), (1e5, 80)])
def test_weights_are_negative_binomial(q, a2):
    params = KSquareParams(3, q, 7, a2)
    j = np.arange(31)
    ref = stats.nbinom.pmf(j, q / 2, q / (q + a2))
    ours = np.array([ksquare_weight(int(i), params) for i in j])
    assert np.max(np.abs(ours - ref)) <= 1e-12


def test_monotone_in_x():
    rng = np.random.default_rng(7)
    for _ in range(15):
        p, q, r = rng.integers(1, 40, size=3)
        a2 = float(rng.uniform(0, 300))
        params = KSquareParams(float(p), float(q), float(r), a2)
        xs = np.sort(rng.uniform(0.01, 60, size=25))
        values = [ksquare_cdf(params, float(x)) for x in xs]
        assert all(v.converged for v in values)
        for lo, hi in zip(values, values[1:]):
            assert hi.value >= lo.value - (lo.error_bound + hi.error_bound)
        assert all(0.0 <= v.value <= 1.0 for v in values)


def test_large_x_tends_to_one():
    res = ksquare_cdf(KSquareParams(5, 10, 20, 30), 1e4, TIGHT)
    assert res.value == pytest.approx(1.0, abs=1e-9)


def test_noncentral_f():
    # q -> inf is the noncentral F with noncentrality a2
    res = ksquare_cdf(KSquareParams(4, math.inf, 12, 6.5), 2.0)
    assert res.value == pytest.approx(stats.ncf.cdf(2.0, 4, 12, 6.5), abs=1e-6)


def test_noncentral_chi_square():
    res = ksquare_cdf(KSquareParams(4, math.inf, math.inf, 6.5), 2.5)
    assert res.value == pytest.approx(stats.ncx2.cdf(4 * 2.5, 4, 6.5), abs=1e-6)


@pytest.mark.parametrize("x,p,q,r,a2,expected", golden.KSQUARE_HARD)
def test_against_oracle(x, p, q, r, a2, expected):
    params = KSquareParams(p, q, r, a2)
    res = ksquare_cdf(params, x, TIGHT)
    assert abs(res.value - oracle_ksquare_cdf(params, x)) <= 1e-8
