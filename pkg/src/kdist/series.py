"""Error-controlled summation of mixtures sum_j s^j g_j H_j.

The weights g_j obey a multiplicative recurrence and the terms H_j an
additive one (H_{j+step} = H_j - d_j, with d_j itself multiplicative).
Summation starts at a seed index k and moves outward in both directions
(Method 2), or forward only from the lowest index (Method 1).  Each step
updates a running estimate of accumulated round-off and a bound on the
neglected tail; the run stops when their sum drops below the requested
accuracy or when round-off alone already exceeds it.
"""

import enum
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Callable, List, Tuple

__all__ = [
    "Status",
    "ErrorBudget",
    "Chain",
    "MixtureSeries",
    "ChainState",
    "SeriesState",
    "CdfResult",
    "ConvergenceError",
    "run_method1",
    "run_method2",
    "roundoff_increment",
    "truncation_bound",
    "select_start_index",
    "modified_start_index",
    "resolve_start_index",
    "METHODS",
    "default_epsilon",
    "DOUBLE_EPSILON",
    "SINGLE_EPSILON",
    "MIN_NORMAL",
]

DOUBLE_EPSILON = sys.float_info.epsilon  # 2**-52
SINGLE_EPSILON = 2.0 ** -23  # float32 machine epsilon, ~1.19e-7
MIN_NORMAL = sys.float_info.min
LOG_MIN_NORMAL = math.log(MIN_NORMAL)
METHODS = ("method1", "method2", "method2-modified")
EPSILON_ENV = "KDIST_EPSILON"
DEFAULT_MAX_ITERATIONS = 1_000_000


def default_epsilon():
    """Elementary relative error used when none is given.

    ``KDIST_EPSILON`` in the environment overrides the double-precision
    machine epsilon.
    """
    raw = os.environ.get(EPSILON_ENV)
    if raw:
        return float(raw)
    return DOUBLE_EPSILON


class Status(str, enum.Enum):
    CONVERGED = "Converged"
    ACCURACY_NOT_ATTAINABLE = "AccuracyNotAttainable"
    ITERATION_LIMIT_EXCEEDED = "IterationLimitExceeded"


@dataclass(frozen=True)
class ErrorBudget:
    """Stopping parameters for one evaluation.

    ``epsilon`` is the relative error charged to each elementary recurrence
    step.  Setting ``track_roundoff=False`` gives the reference algorithm
    that stops on the truncation bound alone (used for timing comparisons).
    """

    target_accuracy: float = 1e-9
    epsilon: float = field(default_factory=default_epsilon)
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    track_roundoff: bool = True

    def __post_init__(self):
        if not 0.0 < self.epsilon < self.target_accuracy < 1.0:
            raise ValueError(
                "need 0 < epsilon < target_accuracy < 1, got "
                f"epsilon={self.epsilon!r}, target_accuracy={self.target_accuracy!r}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be positive, got {self.max_iterations!r}")


@dataclass(frozen=True)
class Chain:
    """One recurrence chain: indices start, start +/- step, ...

    ``increment`` is d at ``start``, i.e. H(start) - H(start + step).
    ``mass`` is the total weight carried by every index of the chain
    (visited or not), so the unvisited remainder is ``mass`` minus what
    has been summed.
    """

    start: int
    weight: float
    term: float
    increment: float
    mass: float = 1.0


@dataclass(frozen=True)
class MixtureSeries:
    chains: Tuple[Chain, ...]
    weight_ratio: Callable[[int], float]
    increment_ratio: Callable[[int], float]
    term_at_zero: float
    step: int = 1
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign!r}")
        if self.step < 1:
            raise ValueError(f"step must be positive, got {self.step!r}")
        if not self.chains:
            raise ValueError("series needs at least one chain")
        for chain in self.chains:
            if chain.start < 0:
                raise ValueError(f"negative start index {chain.start}")

    @property
    def total_mass(self):
        return math.fsum(c.mass for c in self.chains)


class _Sum:
    """Running Neumaier-compensated sum."""

    __slots__ = ("hi", "lo")

    def __init__(self, value=0.0):
        self.hi = value
        self.lo = 0.0

    def add(self, x):
        t = self.hi + x
        if abs(self.hi) >= abs(x):
            self.lo += (self.hi - t) + x
        else:
            self.lo += (x - t) + self.hi
        self.hi = t

    @property
    def value(self):
        return self.hi + self.lo

    def remainder(self, total):
        """total - sum, formed before rounding away the low-order part."""
        return (total - self.hi) - self.lo


@dataclass
class ChainState:
    chain: Chain
    g_fwd: float
    h_fwd: float
    d_fwd: float  # increment leaving the forward index
    fwd_index: int
    g_bwd: float
    h_bwd: float
    d_bwd: float  # increment leaving the backward index going up
    bwd_index: int
    d_weighted_fwd: float = 0.0  # sum_{i=0}^{j-1} i d_{k+i}
    d_weighted_bwd: float = 0.0  # sum_{i=1}^{j} i d_{k-i}
    backward_added: bool = False

    @classmethod
    def seed(cls, chain):
        return cls(
            chain=chain,
            g_fwd=chain.weight, h_fwd=chain.term, d_fwd=chain.increment,
            fwd_index=chain.start,
            g_bwd=chain.weight, h_bwd=chain.term, d_bwd=chain.increment,
            bwd_index=chain.start,
        )

    def can_go_back(self, step):
        return self.bwd_index - step >= 0


@dataclass
class SeriesState:
    """Accumulators for a single evaluation; never shared between runs."""

    chains: List[ChainState]
    j: int = 0
    positive: _Sum = field(default_factory=_Sum)
    negative: _Sum = field(default_factory=_Sum)
    weight_mass: _Sum = field(default_factory=_Sum)
    roundoff_bracket: _Sum = field(default_factory=_Sum)

    @property
    def partial_sum(self):
        return self.positive.value - self.negative.value

    def ec(self, epsilon):
        return epsilon * self.roundoff_bracket.value


@dataclass(frozen=True)
class CdfResult:
    value: float
    error_bound: float
    iterations: int
    status: Status
    clamped: bool = False

    @property
    def converged(self):
        return self.status is Status.CONVERGED

    def clamp(self):
        """Clip the value into [0, 1], recording whether it moved."""
        v = min(max(self.value, 0.0), 1.0)
        if v == self.value:
            return self
        return CdfResult(v, self.error_bound, self.iterations, self.status, True)

    def shifted(self, offset, scale=1.0, extra_error=0.0):
        """offset + scale * value, keeping diagnostics."""
        return CdfResult(offset + scale * self.value, self.error_bound + extra_error,
                         self.iterations, self.status, self.clamped)

    def raise_for_status(self):
        if not self.converged:
            raise ConvergenceError(self)
        return self


class ConvergenceError(ArithmeticError):
    """An evaluation stopped without meeting its accuracy target."""

    def __init__(self, result):
        self.result = result
        super().__init__(
            f"{result.status.value}: value={result.value!r}, "
            f"error_bound={result.error_bound!r}, iterations={result.iterations}")


def _add_term(state, series, index, g, h):
    term = g * h
    if series.sign < 0 and index % 2:
        state.negative.add(term)
    else:
        state.positive.add(term)
    state.weight_mass.add(g)


def _roundoff_bracket(state):
    # contribution of the terms added at the current offset j, divided by epsilon
    j = state.j
    acc = 0.0
    for cs in state.chains:
        h_start = cs.chain.term
        if j == 0:
            acc += 2.0 * h_start * cs.g_fwd
            continue
        acc += (2.0 * h_start * cs.g_fwd + j * cs.g_fwd * cs.h_fwd
                + cs.g_fwd * cs.d_weighted_fwd)
        if cs.backward_added:
            acc += (2.0 + j) * cs.g_bwd * cs.h_bwd + cs.g_bwd * cs.d_weighted_bwd
    return acc


def roundoff_increment(state, epsilon):
    """Round-off charged to the terms added at the state's current offset.

    Summed over offsets 0..N this reproduces the closed-form round-off
    estimate with all seed relative errors equal to epsilon.
    """
    return epsilon * _roundoff_bracket(state)


def truncation_bound(state, series):
    """Upper bound on the weight of the unvisited terms.

    While some chain can still step backward, the largest unvisited H is at
    most H_0; afterwards every unvisited index lies above the forward front,
    so the front's H bounds them.
    """
    remaining = state.weight_mass.remainder(series.total_mass)
    if remaining <= 0.0:
        return 0.0
    if any(cs.can_go_back(series.step) for cs in state.chains):
        h_bound = series.term_at_zero
    else:
        h_bound = max(cs.h_fwd for cs in state.chains)
    return max(h_bound, 0.0) * remaining


def _advance(state, series, backward):
    state.j += 1
    j = state.j
    step = series.step
    for cs in state.chains:
        # forward: index i -> i + step
        i = cs.fwd_index
        cs.d_weighted_fwd += (j - 1) * cs.d_fwd
        cs.h_fwd -= cs.d_fwd
        cs.g_fwd *= series.weight_ratio(i)
        cs.d_fwd *= series.increment_ratio(i)
        cs.fwd_index = i + step
        _add_term(state, series, cs.fwd_index, cs.g_fwd, cs.h_fwd)

        cs.backward_added = False
        if backward and cs.can_go_back(step):
            i = cs.bwd_index - step
            cs.d_bwd /= series.increment_ratio(i)
            cs.h_bwd += cs.d_bwd
            cs.g_bwd /= series.weight_ratio(i)
            cs.bwd_index = i
            cs.d_weighted_bwd += j * cs.d_bwd
            cs.backward_added = True
            _add_term(state, series, i, cs.g_bwd, cs.h_bwd)


def _run(series, budget, backward):
    state = SeriesState(chains=[ChainState.seed(c) for c in series.chains])
    for cs in state.chains:
        _add_term(state, series, cs.chain.start, cs.chain.weight, cs.chain.term)
    eps = budget.epsilon
    target = budget.target_accuracy
    while True:
        if budget.track_roundoff:
            state.roundoff_bracket.add(_roundoff_bracket(state))
            e_c = state.ec(eps)
        else:
            e_c = 0.0
        e_t = truncation_bound(state, series)
        if e_c > target:
            status = Status.ACCURACY_NOT_ATTAINABLE
            break
        if e_t + e_c <= target:
            status = Status.CONVERGED
            break
        if state.j >= budget.max_iterations:
            status = Status.ITERATION_LIMIT_EXCEEDED
            break
        _advance(state, series, backward)
    return CdfResult(state.partial_sum, e_t + e_c, state.j, status).clamp()


def run_method2(series, budget):
    """Bidirectional summation outward from each chain's start index."""
    return _run(series, budget, backward=True)


def run_method1(series, budget):
    """Forward-only summation; every chain must start at its lowest index."""
    for chain in series.chains:
        if chain.start >= series.step:
            raise ValueError(
                f"method 1 needs chains starting below {series.step}, got {chain.start}")
    return _run(series, budget, backward=False)


def select_start_index(a2, q, family="ksquare"):
    """Integer-part mode of the mixing weights.

    K-square: [a2 (q - 2) / (2 q)];  K-prime: [a2 (q - 2) / q].
    """
    if a2 <= 0.0 or q <= 2.0:
        return 0
    if family == "ksquare":
        mode = a2 * (q - 2.0) / (2.0 * q)
    elif family == "kprime":
        mode = a2 * (q - 2.0) / q
    else:
        raise ValueError(f"unknown family {family!r}")
    return int(math.floor(mode))


def modified_start_index(k, beta_argument):
    """Lower k to [k * beta_argument] when the seed increment underflows."""
    if not 0.0 <= beta_argument <= 1.0:
        raise ValueError(f"beta argument must lie in [0, 1], got {beta_argument!r}")
    return int(math.floor(k * beta_argument))


def resolve_start_index(mode, beta_argument, log_increment, method="method2"):
    """Pick the seed index for a run.

    ``method2`` keeps the mode unless the seed increment (given in log form
    by ``log_increment(k)``) falls below the smallest normal float, in which
    case the lowered index is used, and index 0 if that underflows too.
    ``method2-modified`` always lowers the index; ``method1`` starts at 0.
    """
    if method == "method1":
        return 0
    if method == "method2-modified":
        return modified_start_index(mode, beta_argument)
    if method != "method2":
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    if mode == 0 or log_increment(mode) >= LOG_MIN_NORMAL:
        return mode
    k = modified_start_index(mode, beta_argument)
    if k > 0 and log_increment(k) < LOG_MIN_NORMAL:
        k = 0
    return k
