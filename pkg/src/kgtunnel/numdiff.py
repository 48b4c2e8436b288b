"""Central differences with one Richardson step."""

from __future__ import annotations

from typing import Callable


def central_difference(f: Callable[[float], float], x: float, h: float) -> float:
    return (f(x + h) - f(x - h)) / (2.0 * h)


def richardson_derivative(f: Callable[[float], float], x: float, h: float) -> float:
    """Combine steps h and h/2 to cancel the O(h**2) truncation term.

    Leaves O(h**4) truncation plus roundoff of order eps * |f| / h.
    """
    coarse = central_difference(f, x, h)
    fine = central_difference(f, x, 0.5 * h)
    return (4.0 * fine - coarse) / 3.0


def derivative_step(x: float) -> float:
    return max(1e-6, 1e-7 * abs(x))
