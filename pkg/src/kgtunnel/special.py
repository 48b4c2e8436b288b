"""Cancellation-free hyperbolic helpers.

Every closed form in this package contains ratios like sinh(x)/x that are
0/0 at a zone edge (x = rho * wL -> 0). These helpers switch to a Taylor
series below a cutoff so the edge is evaluated at full precision.
"""

import math

import numpy as np

SERIES_CUTOFF = 1e-4
# The second-order remainders use their full power series below this.
REMAINDER_CUTOFF = 1.0


def _small(x, cutoff):
    x = np.asarray(x, dtype=float)
    return x, np.abs(x) < cutoff


def _out(value):
    return float(value) if np.ndim(value) == 0 else value


def sinhc(x):
    """sinh(x)/x with sinhc(0) = 1."""
    x, small = _small(x, SERIES_CUTOFF)
    x2 = x * x
    series = 1.0 + x2 / 6.0 + x2 * x2 / 120.0
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        direct = np.sinh(x) / x
    return _out(np.where(small, series, direct))


def tanhc(x):
    """tanh(x)/x with tanhc(0) = 1."""
    x, small = _small(x, SERIES_CUTOFF)
    x2 = x * x
    series = 1.0 - x2 / 3.0 + 2.0 * x2 * x2 / 15.0
    with np.errstate(invalid="ignore", divide="ignore"):
        direct = np.tanh(x) / x
    return _out(np.where(small, series, direct))


def tanhc_sq(y: float) -> float:
    """tanh(sqrt(y))/sqrt(y) for any real y, continued to tan(sqrt(-y))/sqrt(-y) for y < 0.

    The function is analytic in y, so difference stencils may straddle y = 0.
    """
    if abs(y) < SERIES_CUTOFF ** 2:
        return 1.0 - y / 3.0 + 2.0 * y * y / 15.0
    if y > 0:
        r = np.sqrt(y)
        return float(np.tanh(r) / r)
    r = np.sqrt(-y)
    return float(np.tan(r) / r)


def tanhc_dy(x):
    """d/dy of tanh(sqrt(y))/sqrt(y), evaluated at y = x**2.

    Needed for the derivative of the transmission phase with respect to
    rho**2, which stays finite through rho = 0. Below REMAINDER_CUTOFF it is written as
    -shch_excess(x) sech(x)**2 / 2, which has no cancellation.
    """
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < REMAINDER_CUTOFF
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        sech2 = 1.0 / np.cosh(x) ** 2
        near = -0.5 * shch_excess(np.where(small, x, 0.0)) * sech2
        direct = (sech2 / x - np.tanh(x) / (x * x)) / (2.0 * x)
    return _out(np.where(small, near, direct))


# 4**k / (2k+1)! for k = 1..13; the tail is below 1e-19 for |x| < 1
_SHCH_COEFFS = np.array([4.0 ** k / math.factorial(2 * k + 1) for k in range(1, 14)])


def shch_excess(x):
    """(sinh(x)cosh(x)/x - 1) / x**2, which tends to 2/3 at x = 0."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < REMAINDER_CUTOFF
    y = x * x
    series = np.polynomial.polynomial.polyval(y, _SHCH_COEFFS)
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        direct = (np.sinh(2.0 * x) / (2.0 * x) - 1.0) / y
    return _out(np.where(small, series, direct))


def log_sinh(x):
    """log(sinh(x)) for x > 0 without overflow."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        big = x + np.log1p(-np.exp(-2.0 * x)) - np.log(2.0)
        small = np.log(np.sinh(np.minimum(x, 1.0)))
    return _out(np.where(x > 1.0, big, small))
