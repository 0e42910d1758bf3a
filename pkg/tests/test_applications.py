import math

import mpmath
import pytest
from scipy import special as sc

from kdist.applications import (
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
from kdist.kprime import KPrimeParams, kprime_cdf
from kdist.ksquare import KSquareParams
from kdist.oracle import OracleConfig, oracle_ksquare_cdf
from kdist.series import ErrorBudget, Status
from kdist.special import DomainError

PILOT = PilotStudy(d0=4.35, s0=2.07, n0=10)
GOAL = DesignGoal(delta0=3.0, alpha=0.05, target_power=0.8)


def probability_t(n):
    return predictive_t_probability(PILOT, GOAL, n)


class TestPilot:
    def test_defaults(self):
        assert PILOT.q0 == 18
        assert PILOT.t0(3.0) == pytest.approx(1.458, abs=5e-4)

    def test_validation(self):
        with pytest.raises(DomainError):
            PilotStudy(1.0, 0.0, 10)
        with pytest.raises(DomainError):
            PilotStudy(1.0, 1.0, 1)
        with pytest.raises(DomainError):
            DesignGoal(alpha=1.5)


class TestQuantiles:
    def test_student(self):
        assert round(student_t_quantile(0.05, 98), 4) == 1.6606

    def test_fisher(self):
        assert round(central_f_quantile(0.05, 2, 87), 4) == 3.1013


class TestPredictiveT:
    def test_worked_example(self):
        assert probability_t(50).value == pytest.approx(0.7327, abs=1e-4)

    def test_null_pilot_below_half(self):
        pilot = PilotStudy(d0=3.0, s0=2.0, n0=10)
        assert predictive_t_probability(pilot, GOAL, 40).value < 0.5

    def test_threshold_for_080(self):
        assert probability_t(97).value >= 0.80
        assert probability_t(96).value < 0.80

    def test_limit(self):
        assert predictive_t_limit(PILOT, GOAL) == pytest.approx(0.9190, abs=1e-4)
        assert probability_t(10 ** 6).value < predictive_t_limit(PILOT, GOAL)


class TestSampleSize:
    def test_080(self):
        n = sample_size_search(probability_t, 0.80, limit=predictive_t_limit(PILOT, GOAL))
        assert n == 97

    def test_minimal_design(self):
        assert sample_size_search(probability_t, probability_t(2).value / 2) == 2

    def test_unachievable(self):
        with pytest.raises(UnachievableTarget):
            sample_size_search(probability_t, 0.95, limit=predictive_t_limit(PILOT, GOAL))
        with pytest.raises(UnachievableTarget):
            sample_size_search(lambda n: 0.5 - 1.0 / n, 0.6, n_max=1000)

    def test_monotonicity_check(self):
        with pytest.raises(ArithmeticError):
            sample_size_search(lambda n: 0.6 if n >= 8 else (0.45 if n == 4 else 0.4), 0.5)

    @pytest.mark.parametrize("target", [0.3, 0.55, 0.72, 0.85])
    def test_bracket(self, target):
        n = sample_size_search(probability_t, target)
        assert probability_t(n).value >= target
        assert n == 2 or probability_t(n - 1).value < target


class TestLowerLimit:
    def test_equivalence_at_worked_example(self):
        lower = predictive_lower_limit_cdf(PILOT, GOAL, 50, 3.0)
        assert lower.value == pytest.approx(0.7327, abs=1e-4)

    @pytest.mark.parametrize("d0,s0,n0,n", [
        (4.35, 2.07, 10, 50), (4.35, 2.07, 10, 200), (1.0, 1.0, 5, 12), (0.3, 2.0, 30, 8),
    ])
    def test_equivalence_grid(self, d0, s0, n0, n):
        pilot = PilotStudy(d0, s0, n0)
        goal = DesignGoal(delta0=0.5)
        one = predictive_t_probability(pilot, goal, n)
        two = predictive_lower_limit_cdf(pilot, goal, n, goal.delta0)
        assert abs(one.value - two.value) <= one.error_bound + two.error_bound

    def test_infinite_thresholds(self):
        assert predictive_lower_limit_cdf(PILOT, GOAL, 50, -math.inf).value == 1.0
        assert predictive_lower_limit_cdf(PILOT, GOAL, 50, math.inf).value == 0.0

    def test_threshold_at_d0(self):
        pilot = PilotStudy(4.35, 2.07, 5000)
        n = 4000
        res = predictive_lower_limit_cdf(pilot, GOAL, n, pilot.d0)
        t_crit = student_t_quantile(GOAL.alpha, 2 * n - 2)
        a = t_crit / math.sqrt(1 + n / pilot.n0)
        assert res.value == kprime_cdf(KPrimeParams(2 * n - 2, pilot.q0, a), 0.0).value


class TestStandardizedDifference:
    def test_reference_complement(self):
        pilot = PilotStudy(d0=3.0, s0=1.0, n0=100)
        res = standardized_difference_cdf(pilot, 500000, 2.731804, ErrorBudget(1e-9))
        assert res.converged
        assert 1.0 - res.value == pytest.approx(0.9000, abs=5e-5)

    def test_infinite_x(self):
        assert standardized_difference_cdf(PILOT, 20, math.inf).value == 1.0
        assert standardized_difference_cdf(PILOT, 20, -math.inf).value == 0.0


class TestPredictiveF:
    def test_worked_example(self):
        assert predictive_F_probability(3, 10, 3.6, 30, 0.05).value == pytest.approx(0.7792, abs=1e-4)

    @pytest.mark.parametrize("target,expected", [(0.80, 33), (0.90, 54)])
    def test_sample_sizes(self, target, expected):
        n = sample_size_search(lambda n: predictive_F_probability(3, 10, 3.6, n, 0.05), target)
        assert n == expected

    def test_vanishing_pilot_effect(self):
        res = predictive_F_probability(3, 10 ** 4, 1e-8, 50, 0.05)
        assert res.value < 0.10

    def test_validation(self):
        with pytest.raises(DomainError):
            predictive_F_probability(1, 10, 3.6, 30, 0.05)
        with pytest.raises(DomainError):
            predictive_F_probability(3, 10, 0.0, 30, 0.05)


def correlation_density_cdf(n, rho, x):
    # exact sample-correlation density of a bivariate normal sample
    with mpmath.workdps(30):
        rho = mpmath.mpf(rho)
        c = ((n - 2) * mpmath.gamma(n - 1) * (1 - rho ** 2) ** ((n - 1) / 2.0)
             / (mpmath.sqrt(2 * mpmath.pi) * mpmath.gamma(n - 0.5)))

        def dens(r):
            return (c * (1 - r * r) ** ((n - 4) / 2.0) * (1 - rho * r) ** (-(n - 1.5))
                    * mpmath.hyp2f1(0.5, 0.5, n - 0.5, (1 + rho * r) / 2))

        return float(mpmath.quad(dens, [-1, 0, x]))


class TestCorrelation:
    def test_null_median(self):
        assert correlation_cdf(12, 0.0, 0.0).value == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize("x", [0.5, 0.1, 0.8])
    def test_against_density(self, x):
        assert correlation_cdf(10, 0.5, x).value == pytest.approx(
            correlation_density_cdf(10, 0.5, x), abs=1e-6)

    def test_endpoints(self):
        assert correlation_cdf(10, 0.3, 1.0).value == 1.0
        assert correlation_cdf(10, 0.3, 1 - 1e-12).value == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("n,rho,x", [(5, 0.4, 0.2), (30, -0.7, -0.5), (12, 0.9, 0.95)])
    def test_sign_symmetry(self, n, rho, x):
        one = correlation_cdf(n, rho, x)
        two = correlation_cdf(n, -rho, -x)
        assert abs(one.value + two.value - 1.0) <= one.error_bound + two.error_bound


class TestMultipleCorrelation:
    def test_null_is_beta(self):
        n, p, x = 20, 4, 0.3
        res = multiple_correlation_sq_cdf(n, p, 0.0, x)
        assert res.value == pytest.approx(sc.betainc((p - 1) / 2, (n - p) / 2, x), abs=1e-12)

    def test_against_oracle(self):
        n, p, rho2, x = 20, 4, 0.3, 0.4
        a2 = (n - 1) * rho2 / (1 - rho2)
        kx = (n - p) / (p - 1) * x / (1 - x)
        ref = oracle_ksquare_cdf(KSquareParams(p - 1, n - 1, n - p, a2), kx,
                                 OracleConfig(tolerance=1e-14))
        res = multiple_correlation_sq_cdf(n, p, rho2, x, ErrorBudget(1e-12))
        assert abs(res.value - ref) <= 1e-10

    def test_endpoints(self):
        assert multiple_correlation_sq_cdf(20, 4, 0.3, 1.0).value == 1.0
        assert multiple_correlation_sq_cdf(20, 4, 0.3, 0.0).value == 0.0
        assert multiple_correlation_sq_cdf(20, 4, 0.3, 1 - 1e-12).value == pytest.approx(1, abs=1e-9)


def test_all_results_in_unit_interval():
    values = [probability_t(n).value for n in (2, 5, 50, 500)]
    values += [predictive_F_probability(3, 10, 3.6, n, 0.05).value for n in (2, 10, 100)]
    values += [correlation_cdf(8, 0.6, x).value for x in (-0.99, 0.0, 0.99)]
    assert all(0.0 <= v <= 1.0 for v in values)
    assert probability_t(50).status is Status.CONVERGED
