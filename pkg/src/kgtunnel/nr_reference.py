"""Schrodinger reference for the non-relativistic limit.

Dimensionless with w = sqrt(2 m V0) set to 1: the incident wavenumber is n,
the interior decay constant is sqrt(1 - n**2), and the barrier width is wL.
Amplitudes come from the same matching solver as the relativistic path;
only the dispersion differs. Delays are normalized by tau_NR = L m / k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError, EdgeError
from .numdiff import derivative_step, richardson_derivative
from .scattering import ScatteringSolution, solve_amplitudes


@dataclass(frozen=True)
class NrPoint:
    nsq: float
    wL: float
    rho_nr: float = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.nsq < 1.0:
            raise DomainError(f"Schrodinger tunneling needs 0 < n^2 < 1, got {self.nsq}")
        if not self.wL >= 0:
            raise DomainError(f"wL must be non-negative, got {self.wL}")
        object.__setattr__(self, "rho_nr", math.sqrt(1.0 - self.nsq))

    @property
    def n(self) -> float:
        return math.sqrt(self.nsq)


def transmission_schrodinger(p: NrPoint) -> float:
    """Textbook |T| = [1 + sinh**2(rho wL) / (4 n**2 rho**2)]**-1/2."""
    x = p.rho_nr * p.wL
    return (1.0 + math.sinh(x) ** 2 / (4.0 * p.nsq * p.rho_nr ** 2)) ** -0.5


def phase_schrodinger(n: float, wl: float) -> float:
    rho = math.sqrt(1.0 - n * n)
    return math.atan((2.0 * n * n - 1.0) / (2.0 * n * rho) * math.tanh(rho * wl))


def phase_time_schrodinger(p: NrPoint) -> float:
    if p.wL == 0.0:
        return 0.0
    n = p.n
    h = derivative_step(n)
    if n - 10.0 * h <= 0.0 or n + 10.0 * h >= 1.0:
        raise EdgeError(f"n^2 = {p.nsq} is within 10 steps of a zone edge")
    return richardson_derivative(lambda v: phase_schrodinger(v, p.wL) / p.wL, n, h)


def nr_solution(p: NrPoint) -> ScatteringSolution:
    return solve_amplitudes(p.n, p.rho_nr, p.wL)


def dwell_time_schrodinger(p: NrPoint) -> float:
    if p.wL == 0.0:
        return 0.0
    return nr_solution(p).interior_norm() / p.wL


def self_interference_schrodinger(p: NrPoint, sol: ScatteringSolution | None = None) -> float:
    """-(m/k**2) Im R over tau_NR, i.e. -Im R / (n wL)."""
    if p.wL == 0.0:
        return 0.0
    sol = nr_solution(p) if sol is None else sol
    return -sol.R.imag / (p.n * p.wL)
