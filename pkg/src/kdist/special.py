"""Scalar special functions used by the series terms.

Log-gamma comes from the C library (``math.lgamma``).  The log-beta function
adds a Stirling-corrected path for large arguments, where the plain
difference of log-gammas would cancel away most of the significant digits.
The regularized incomplete beta ratio is a Lentz continued fraction with the
usual tail swap.
"""

import math

__all__ = [
    "DomainError",
    "log_gamma",
    "log_beta",
    "log_beta_power_term",
    "inc_beta",
    "student_t_cdf",
    "student_t_sf",
]

LN_SQRT_2PI = 0.91893853320467274178  # log(sqrt(2*pi))
MACHEP = 2.0 ** -53
TINY = 1e-300
CF_MAX_ITERATIONS = 100_000

# Stirling series B_2n / (2n (2n-1)) for the log-gamma remainder
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)


class DomainError(ValueError):
    """Argument outside the domain of a function or distribution."""


def log_gamma(x):
    """ln Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def _lgamma_correction(x):
    # lgamma(x) - [(x - 1/2) ln x - x + ln sqrt(2 pi)], valid for x >= 10
    xinv2 = 1.0 / (x * x)
    acc = 0.0
    for c in reversed(_STIRLING):
        acc = acc * xinv2 + c
    return acc / x


def log_beta(a, b):
    """ln B(a, b), accurate when one or both arguments are large."""
    if not (a > 0 and b > 0):
        raise DomainError(f"log_beta requires a, b > 0, got {a!r}, {b!r}")
    p, q = min(a, b), max(a, b)
    s = p + q
    if p >= 10.0:
        corr = _lgamma_correction(p) + _lgamma_correction(q) - _lgamma_correction(s)
        return (-0.5 * math.log(q) + LN_SQRT_2PI + corr
                + (p - 0.5) * math.log(p / s) + q * math.log1p(-p / s))
    if q >= 10.0:
        corr = _lgamma_correction(q) - _lgamma_correction(s)
        return math.lgamma(p) + corr + p - p * math.log(s) + (q - 0.5) * math.log1p(-p / s)
    return math.lgamma(p) + math.lgamma(q) - math.lgamma(s)


def log_beta_power_term(a, b, z, y):
    """ln[z^a y^b / B(a, b)] with y = 1 - z supplied by the caller.

    Both z and y are passed so that callers holding an accurate complement
    (e.g. r/(r+px) rather than 1 - px/(r+px)) do not lose it.
    """
    if z <= 0.0 or y <= 0.0:
        return -math.inf
    # the smaller of z, y carries full relative precision; log1p it for the other
    if z < y:
        log_z, log_y = math.log(z), math.log1p(-z)
    else:
        log_z, log_y = math.log1p(-y), math.log(y)
    return a * log_z + b * log_y - log_beta(a, b)


def _beta_cf(a, b, z):
    # Modified Lentz evaluation of the incomplete beta continued fraction.
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * z / qap
    if abs(d) < TINY:
        d = TINY
    d = 1.0 / d
    h = d
    for m in range(1, CF_MAX_ITERATIONS + 1):
        m2 = 2 * m
        aa = m * (b - m) * z / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < TINY:
            d = TINY
        c = 1.0 + aa / c
        if abs(c) < TINY:
            c = TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * z / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < TINY:
            d = TINY
        c = 1.0 + aa / c
        if abs(c) < TINY:
            c = TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= MACHEP:
            return h
    raise ArithmeticError(
        f"incomplete beta continued fraction did not converge (a={a}, b={b}, z={z})")


def _inc_beta_lower(z, y, a, b):
    # I_z(a, b) evaluated on the side where the fraction converges quickly
    front = math.exp(log_beta_power_term(a, b, z, y)) / a
    return front * _beta_cf(a, b, z)


def inc_beta(z, a, b, y=None):
    """Regularized incomplete beta ratio I_z(a, b).

    ``y`` optionally supplies 1 - z computed without cancellation.
    """
    if not (a > 0 and b > 0):
        raise DomainError(f"inc_beta requires a, b > 0, got a={a!r}, b={b!r}")
    if not 0.0 <= z <= 1.0:
        raise DomainError(f"inc_beta requires 0 <= z <= 1, got {z!r}")
    if y is None:
        y = 1.0 - z
    if z == 0.0:
        return 0.0
    if y == 0.0:
        return 1.0
    if z * (a + b + 2.0) > a + 1.0:
        return 1.0 - _inc_beta_lower(y, z, b, a)
    return _inc_beta_lower(z, y, a, b)


def inc_beta_complement(z, a, b, y=None):
    """1 - I_z(a, b) without subtracting from one on the slow side."""
    if y is None:
        y = 1.0 - z
    return inc_beta(y, b, a, y=z)


def student_t_sf(x, q):
    """Pr(t_q > x)."""
    if not q > 0:
        raise DomainError(f"student_t needs q > 0, got {q!r}")
    if math.isinf(x):
        return 0.0 if x > 0 else 1.0
    if x == 0.0:
        return 0.5
    x2 = x * x
    # half the two-sided tail: 0.5 * I_{q/(q+x^2)}(q/2, 1/2)
    tail = 0.5 * inc_beta(q / (q + x2), 0.5 * q, 0.5, y=x2 / (q + x2))
    return tail if x > 0 else 1.0 - tail


def student_t_cdf(x, q):
    """Pr(t_q < x) for Student's t with q degrees of freedom."""
    if not q > 0:
        raise DomainError(f"student_t needs q > 0, got {q!r}")
    if math.isinf(x):
        return 1.0 if x > 0 else 0.0
    if x == 0.0:
        return 0.5
    sf = student_t_sf(abs(x), q)
    return 1.0 - sf if x > 0 else sf
