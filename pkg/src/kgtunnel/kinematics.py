"""Barrier parameterization, relativistic dispersion and energy zones.

Natural units c = hbar = 1. A barrier is fixed by the particle mass ``m``,
height ``V0`` and width ``L``; everything downstream depends only on the
dimensionless triple (upsilon, wL, n**2):

    w = sqrt(2 m V0),  upsilon = V0 / m,  n**2 = k**2 / w**2

The incident wave has k**2 = E**2 - m**2 and, inside the barrier, the
evanescent wavenumber satisfies rho(k)**2 = m**2 - (E - V0)**2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

EDGE_TOL = 1e-9


class Zone(enum.Enum):
    KLEIN = "Klein"
    TUNNELING = "Tunneling"
    ABOVE_BARRIER = "AboveBarrier"
    EDGE = "Edge"


class Edge(enum.Enum):
    LOWER = "lower"  # E = V0 - m
    UPPER = "upper"  # E = V0 + m


@dataclass(frozen=True)
class BarrierConfig:
    m: float
    V0: float
    L: float
    w: float = field(init=False)
    upsilon: float = field(init=False)
    wL: float = field(init=False)

    def __post_init__(self):
        if not self.m > 0:
            raise DomainError(f"mass must be positive, got {self.m}")
        if not self.V0 > 0:
            raise DomainError(f"barrier height must be positive, got {self.V0}")
        if not self.L >= 0:
            raise DomainError(f"barrier width must be non-negative, got {self.L}")
        w = math.sqrt(2.0 * self.m * self.V0)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "upsilon", self.V0 / self.m)
        object.__setattr__(self, "wL", w * self.L)

    @classmethod
    def from_dimensionless(cls, upsilon: float, wl: float, m: float = 1.0) -> "BarrierConfig":
        """Rebuild (m, V0, L) from (upsilon, wL); times then come out in units of 1/m."""
        if not upsilon > 0:
            raise DomainError(f"upsilon must be positive, got {upsilon}")
        if not wl >= 0:
            raise DomainError(f"wL must be non-negative, got {wl}")
        V0 = upsilon * m
        w = math.sqrt(2.0 * m * V0)
        return cls(m=m, V0=V0, L=wl / w)

    def zone_bounds(self) -> tuple[float, float]:
        """Open n**2 interval of the tunneling zone, (max(0, u/2 - 1), u/2 + 1)."""
        half = 0.5 * self.upsilon
        return max(0.0, half - 1.0), half + 1.0

    def nsq_at_energy(self, E: float) -> float:
        return (E * E - self.m * self.m) / (self.w * self.w)

    def nsq_turning(self) -> float:
        """n**2 at which E = V0, where the rescaled dwell time changes sign."""
        u = self.upsilon
        return (u * u - 1.0) / (2.0 * u)


@dataclass(frozen=True)
class EnergyPoint:
    """One incident energy.

    ``rho_sq`` is the signed dimensionless rho(n)**2; it is negative outside
    the tunneling zone, where the interior solution oscillates.
    """

    nsq: float
    k: float
    E: float
    rho_sq: float
    zone: Zone
    E_over_m: float

    @property
    def n(self) -> float:
        return math.sqrt(self.nsq)

    @property
    def evanescent(self) -> bool:
        return self.rho_sq >= 0.0

    @property
    def rho(self) -> float:
        return math.sqrt(self.rho_sq) if self.rho_sq >= 0.0 else math.nan


def dispersion(nsq: float, upsilon: float) -> tuple[float, float]:
    """Return (E/m, rho(n)**2) from m**2 - (E - V0)**2 = (m - E + V0)(m + E - V0)."""
    s = math.sqrt(1.0 + 2.0 * nsq * upsilon)
    # 1 - s + upsilon, with s - 1 = 2 n^2 u / (s + 1) to keep the NR limit exact
    lower_factor = upsilon * (1.0 - 2.0 * nsq / (s + 1.0))
    upper_factor = 1.0 + s - upsilon
    return s, lower_factor * upper_factor / (2.0 * upsilon)


def classify_zone(cfg: BarrierConfig, E: float) -> Zone:
    if not E > cfg.m:
        raise DomainError(f"E = {E} does not exceed the rest mass m = {cfg.m}")
    # dE/dn^2 is ~V0 for small upsilon, so scale by min(m, V0) to keep the
    # snap band ~EDGE_TOL wide in n^2
    tol = EDGE_TOL * min(cfg.m, cfg.V0)
    if abs(E - cfg.V0 - cfg.m) < tol or abs(E - cfg.V0 + cfg.m) < tol:
        return Zone.EDGE
    if E > cfg.V0 + cfg.m:
        return Zone.ABOVE_BARRIER
    if E < cfg.V0 - cfg.m:
        return Zone.KLEIN
    return Zone.TUNNELING


def derive_point(cfg: BarrierConfig, nsq: float) -> EnergyPoint:
    if not nsq > 0:
        raise DomainError(f"n^2 must be positive, got {nsq}")
    s, rho_sq = dispersion(nsq, cfg.upsilon)
    E = cfg.m * s
    k = cfg.w * math.sqrt(nsq)
    zone = classify_zone(cfg, E)
    if zone is Zone.EDGE:
        rho_sq = 0.0
    return EnergyPoint(nsq=nsq, k=k, E=E, rho_sq=rho_sq, zone=zone, E_over_m=s)


def edge_nsq(cfg: BarrierConfig, edge: Edge) -> float:
    u = cfg.upsilon
    nsq = 0.5 * u - 1.0 if edge is Edge.LOWER else 0.5 * u + 1.0
    if nsq <= 0:
        raise DomainError(f"lower zone edge lies at n^2 = {nsq} <= 0 for upsilon = {u}")
    return nsq


def classical_traversal(cfg: BarrierConfig, pt: EnergyPoint) -> float:
    """tau = L / v with group velocity v = dE/dk = k/E."""
    if not pt.k > 0:
        raise DomainError("classical traversal time needs k > 0")
    return cfg.L * pt.E / pt.k


def tunneling_grid(cfg: BarrierConfig, steps: int, shave: float = 1e-6,
                   nsq_min: float | None = None, nsq_max: float | None = None) -> np.ndarray:
    """Evenly spaced n**2 grid inside the open tunneling zone.

    The default range is the full zone with ``shave`` removed at each end so
    that no node sits on rho = 0.
    """
    if steps < 2:
        raise DomainError(f"grid needs at least 2 points, got {steps}")
    lo, hi = cfg.zone_bounds()
    a = lo + shave if nsq_min is None else nsq_min
    b = hi - shave if nsq_max is None else nsq_max
    if not (lo <= a < b <= hi) or a <= 0:
        raise DomainError(f"n^2 range ({a}, {b}) is not inside the tunneling zone ({lo}, {hi})")
    return np.linspace(a, b, steps)
