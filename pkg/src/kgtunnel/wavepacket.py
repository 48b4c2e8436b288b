"""Wave-packet oracle for the phase time.

A narrow momentum distribution g(k - k0), launched so that the incident
peak reaches x = 0 at t = 0, is propagated through the barrier by summing
stationary transmitted waves:

    psi(x, t) = sum_j w_j g(k_j - k0) T(k_j) exp(i k_j (x - L) - i E(k_j) t)

The time at which |psi(L, t)|**2 peaks is measured directly and compared
with the stationary-phase delay.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize

from .errors import BracketError, EdgeError, SpecError
from .kinematics import BarrierConfig, Zone, classical_traversal, derive_point
from .scattering import solve_matching
from .times import phase_time_analytic


def gaussian_window(z):
    return np.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class PacketSpec:
    """Momentum distribution and quadrature controls.

    ``window`` is an even function of z = (k - k0)/sigma; the distribution is
    window(z)/sigma, so the default Gaussian integrates to 1 over k.
    """

    k0: float
    sigma: float
    n_quad: int = 2048
    k_window: float = 5.0
    t_search: tuple[float, float] | None = None
    quadrature: str = "gauss"
    window: Callable[[np.ndarray], np.ndarray] = field(default=gaussian_window)
    n_scan: int = 401

    def __post_init__(self):
        if not self.sigma > 0:
            raise SpecError(f"sigma must be positive, got {self.sigma}")
        if self.n_quad < 128:
            raise SpecError(f"n_quad must be at least 128, got {self.n_quad}")
        if self.quadrature not in ("gauss", "trapezoid"):
            raise SpecError(f"unknown quadrature {self.quadrature!r}")

    @classmethod
    def at_nsq(cls, cfg: BarrierConfig, nsq: float, sigma_frac: float, **kw) -> "PacketSpec":
        """Centre at n**2 = ``nsq`` with sigma = sigma_frac * w."""
        return cls(k0=cfg.w * math.sqrt(nsq), sigma=sigma_frac * cfg.w, **kw)

    def nodes(self):
        half = self.k_window * self.sigma
        if self.quadrature == "gauss":
            x, wts = np.polynomial.legendre.leggauss(self.n_quad)
        else:
            x = np.linspace(-1.0, 1.0, self.n_quad)
            wts = np.full(self.n_quad, 2.0 / (self.n_quad - 1))
            wts[0] = wts[-1] = 1.0 / (self.n_quad - 1)
        return self.k0 + half * x, half * wts


def check_spec(cfg: BarrierConfig, spec: PacketSpec) -> None:
    lo, hi = cfg.zone_bounds()
    k_lo = cfg.w * math.sqrt(lo)
    k_hi = cfg.w * math.sqrt(hi)
    a = spec.k0 - spec.k_window * spec.sigma
    b = spec.k0 + spec.k_window * spec.sigma
    if not (k_lo < a and b < k_hi):
        raise SpecError(f"momentum window [{a:.6g}, {b:.6g}] is not inside the "
                        f"tunneling zone ({k_lo:.6g}, {k_hi:.6g})")


@dataclass(frozen=True)
class _Packet:
    k: np.ndarray
    E: np.ndarray
    amp: np.ndarray  # quadrature weight * g * T


def _build(cfg: BarrierConfig, spec: PacketSpec, free: bool) -> _Packet:
    if not free:
        check_spec(cfg, spec)
    k, wts = spec.nodes()
    g = spec.window((k - spec.k0) / spec.sigma) / spec.sigma
    E = np.sqrt(k * k + cfg.m * cfg.m)
    if free:
        T = np.ones_like(k, dtype=complex)
    else:
        T = np.empty(k.shape, dtype=complex)
        for j, kj in enumerate(k):
            pt = derive_point(cfg, (kj / cfg.w) ** 2)
            if pt.zone is not Zone.TUNNELING:
                raise SpecError(f"quadrature node k = {kj} is in the {pt.zone.value} zone")
            T[j] = solve_matching(cfg, pt).T
    return _Packet(k=k, E=E, amp=wts * g * T)


def synthesize_transmitted(cfg: BarrierConfig, spec: PacketSpec, x: float, t,
                           free: bool = False):
    """psi(x, t) behind the barrier; ``t`` may be an array.

    ``free=True`` forces T = 1, i.e. a packet that crosses x = L at t = 0.
    """
    if x < cfg.L:
        raise SpecError(f"transmitted packet is defined for x >= L, got x = {x}")
    return _evaluate(_build(cfg, spec, free), x - cfg.L, t)


def _evaluate(p: _Packet, dx: float, t):
    t = np.asarray(t, dtype=float)
    phase = np.multiply.outer(np.atleast_1d(t), -p.E) + p.k * dx
    out = np.exp(1j * phase) @ p.amp
    return complex(out[0]) if t.ndim == 0 else out


def _density_slope(p: _Packet, t: float) -> float:
    """d|psi(L, t)|**2/dt."""
    e = np.exp(-1j * p.E * t)
    psi = np.dot(p.amp, e)
    dpsi = np.dot(-1j * p.E * p.amp, e)
    return 2.0 * (psi.conjugate() * dpsi).real


def peak_arrival_time(cfg: BarrierConfig, spec: PacketSpec, free: bool = False) -> float:
    """Time of the global maximum of |psi(L, t)|**2 inside the search bracket.

    A coarse scan locates the maximum; it is then polished by bracketed root
    finding on the time derivative of the density, which resolves the very
    flat peak of a narrow-band packet far below the 1e-6/m target.
    """
    p = _build(cfg, spec, free)
    if spec.t_search is not None:
        t_lo, t_hi = spec.t_search
    else:
        pt = derive_point(cfg, (spec.k0 / cfg.w) ** 2)
        tau = classical_traversal(cfg, pt)
        if tau == 0.0:
            raise SpecError("zero-width barrier: pass t_search explicitly")
        t_lo, t_hi = -10.0 * tau, 10.0 * tau
    ts = np.linspace(t_lo, t_hi, spec.n_scan)
    dens = np.abs(_evaluate(p, 0.0, ts)) ** 2
    i = int(np.argmax(dens))
    if i == 0 or i == ts.size - 1:
        raise BracketError(f"density maximum sits on the bracket end t = {ts[i]:.6g}",
                           times=ts, values=dens)
    a, b = ts[i - 1], ts[i + 1]
    fa, fb = _density_slope(p, a), _density_slope(p, b)
    if fa > 0 > fb:
        return optimize.brentq(lambda t: _density_slope(p, t), a, b,
                               xtol=1e-14 / cfg.m, rtol=4 * np.finfo(float).eps)
    res = optimize.minimize_scalar(lambda t: -abs(_evaluate(p, 0.0, t)) ** 2,
                                   bounds=(a, b), method="bounded",
                                   options={"xatol": 1e-9 / cfg.m})
    return float(res.x)


def stationary_phase_delay(cfg: BarrierConfig, k0: float) -> float:
    """Absolute phase time t_phase(k0) in units of 1/m."""
    pt = derive_point(cfg, (k0 / cfg.w) ** 2)
    if pt.zone is not Zone.TUNNELING:
        raise EdgeError(f"k0 = {k0} is not strictly inside the tunneling zone")
    return phase_time_analytic(cfg, pt) * classical_traversal(cfg, pt)


@dataclass(frozen=True)
class PacketResult:
    sigma_frac: float
    t_phase: float
    arrival: float

    @property
    def discrepancy(self) -> float:
        return abs(self.arrival - self.t_phase) / abs(self.t_phase)


def sigma_trend(cfg: BarrierConfig, nsq: float, fracs=(0.02, 0.01, 0.005), **kw) -> list[PacketResult]:
    out = []
    for frac in fracs:
        spec = PacketSpec.at_nsq(cfg, nsq, frac, **kw)
        out.append(PacketResult(frac, stationary_phase_delay(cfg, spec.k0),
                                peak_arrival_time(cfg, spec)))
    return out
