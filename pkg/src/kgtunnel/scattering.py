"""Stationary scattering off the rectangular barrier.

The piecewise solution is

    x < 0      : exp(ikx) + R exp(-ikx)
    0 < x < L  : alpha exp(-qx) + beta exp(qx)          (q = w rho)
    x > L      : T exp(ik(x - L))

so R is referenced to the entry face and T to the exit face. The amplitudes
come from a direct 4x4 solve of the continuity conditions. The closed forms
below are kept separate and serve only as cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import special
from .errors import DomainError, EdgeError, NotSupportedError
from .kinematics import BarrierConfig, Edge, EnergyPoint, Zone, edge_nsq

# Above this rho*wL the closed forms switch to log-domain evaluation.
OVERFLOW_X = 50.0


@dataclass(frozen=True)
class ScatteringSolution:
    R: complex
    T: complex
    alpha: complex
    beta: complex
    phase_T: float
    k: float
    q: float
    L: float
    # beta * exp(qL); finite even when exp(qL) overflows
    beta_scaled: complex

    def psi(self, x):
        """Stationary wave function at position(s) ``x``."""
        scalar = np.ndim(x) == 0
        x = np.atleast_1d(np.asarray(x, dtype=float))
        k, q, L = self.k, self.q, self.L
        out = np.empty(x.shape, dtype=complex)
        left = x < 0
        right = x > L
        mid = ~(left | right)
        out[left] = np.exp(1j * k * x[left]) + self.R * np.exp(-1j * k * x[left])
        xm = x[mid]
        out[mid] = self.alpha * np.exp(-q * xm) + self.beta_scaled * np.exp(q * (xm - L))
        out[right] = self.T * np.exp(1j * k * (x[right] - L))
        return complex(out[0]) if scalar else out

    def interior_norm(self) -> float:
        """Integral of |psi|**2 over the barrier, done term by term in closed form."""
        k, q, L = self.k, self.q, self.L
        if L == 0.0:
            return 0.0
        decay = math.exp(-q * L)
        # (1 - exp(-2qL)) / (2q), the antiderivative of exp(-2qx) on [0, L]
        half_width = -math.expm1(-2.0 * q * L) / (2.0 * q)
        a, b = self.alpha, self.beta_scaled
        cross = 2.0 * (a * b.conjugate()).real * decay * L
        return (abs(a) ** 2 + abs(b) ** 2) * half_width + cross


def require_evanescent(pt: EnergyPoint) -> None:
    if pt.zone in (Zone.KLEIN, Zone.ABOVE_BARRIER):
        raise NotSupportedError(f"{pt.zone.value} zone amplitudes are not computed")


def solve_amplitudes(k: float, q: float, L: float) -> ScatteringSolution:
    """Match the piecewise solution for given outer and inner wavenumbers.

    Shared by the relativistic and Schrodinger paths; only the dispersion
    that produced ``k`` and ``q`` differs between them.
    """
    if k <= 0:
        raise DomainError(f"incident wavenumber must be positive, got {k}")
    if L == 0.0:
        if q > 0:
            alpha = 0.5 * (1.0 - 1j * k / q)
            beta = 0.5 * (1.0 + 1j * k / q)
        else:
            alpha, beta = 1.0 + 0j, 0j
        return ScatteringSolution(R=0j, T=1 + 0j, alpha=alpha, beta=beta, phase_T=0.0,
                                  k=k, q=q, L=0.0, beta_scaled=beta)
    if q <= 0:
        raise EdgeError("matching system is singular at rho = 0; use the series closed forms")

    d = math.exp(-q * L)
    ik = 1j * k
    # unknowns: R, alpha, beta_scaled, T
    A = np.array([
        [-1.0, 1.0, d, 0.0],
        [ik, -q, q * d, 0.0],
        [0.0, d, 1.0, -1.0],
        [0.0, -q * d, q, -ik],
    ], dtype=complex)
    rhs = np.array([1.0, ik, 0.0, 0.0], dtype=complex)
    try:
        R, alpha, beta_scaled, T = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:
        raise EdgeError(f"matching system singular (k={k}, q={q}, L={L})") from exc
    return ScatteringSolution(R=complex(R), T=complex(T), alpha=complex(alpha),
                              beta=complex(beta_scaled * d), phase_T=float(np.angle(T)),
                              k=k, q=q, L=L, beta_scaled=complex(beta_scaled))


def solve_matching(cfg: BarrierConfig, pt: EnergyPoint) -> ScatteringSolution:
    require_evanescent(pt)
    if pt.zone is Zone.EDGE and cfg.L > 0:
        raise EdgeError(f"n^2 = {pt.nsq} sits on a zone edge; use the series closed forms")
    return solve_amplitudes(pt.k, cfg.w * pt.rho, cfg.L)


def closed_form_T_magnitude(cfg: BarrierConfig, pt: EnergyPoint, as_printed: bool = False) -> float:
    """|T| from the closed form.

    The exact Klein-Gordon result is

        |T|**-2 = 1 + (n**2 + rho**2)**2 sinh**2(rho wL) / (4 n**2 rho**2)

    With ``as_printed=True`` the (n**2 + rho**2)**2 factor is dropped. That
    version is the widely quoted one and is exact only in the Schrodinger
    limit, where n**2 + rho**2 = 1.
    """
    require_evanescent(pt)
    return math.exp(0.5 * log_T_sq(pt.nsq, pt.rho_sq, cfg.wL, as_printed))


def log_T_sq(nsq: float, rho_sq: float, wl: float, as_printed: bool = False) -> float:
    """log |T|**2 from the closed form; log-domain once rho wL exceeds OVERFLOW_X."""
    coef = 1.0 if as_printed else (nsq + rho_sq) ** 2
    x = math.sqrt(rho_sq) * wl
    if x > OVERFLOW_X:
        log_c = math.log(coef) + 2.0 * special.log_sinh(x) - math.log(4.0 * nsq * rho_sq)
        return -float(np.logaddexp(0.0, log_c))
    c = coef * wl * wl * special.sinhc(x) ** 2 / (4.0 * nsq)
    return -math.log1p(c)


def phase_argument(nsq: float, rho_sq: float, wl: float) -> float:
    """(n**2 - rho**2) tanh(rho wL) / (2 n rho), finite at rho = 0."""
    x = math.sqrt(rho_sq) * wl
    return (nsq - rho_sq) * wl * special.tanhc(x) / (2.0 * math.sqrt(nsq))


def closed_form_phase(cfg: BarrierConfig, pt: EnergyPoint) -> float:
    """Transmission phase arctan[(n**2 - rho**2) tanh(rho wL) / (2 n rho)].

    Re T > 0 throughout the zone, so this principal value is already the
    continuous branch and coincides with arg T.
    """
    require_evanescent(pt)
    return math.atan(phase_argument(pt.nsq, pt.rho_sq, cfg.wL))


def unwrap_phase(phases, period: float = 2.0 * math.pi, guard: float = 0.5 * math.pi) -> np.ndarray:
    """Nearest-branch continuation along the sequence.

    Each value is shifted by a multiple of ``period`` to land closest to its
    predecessor; a remaining jump larger than ``guard`` means the grid is too
    coarse to follow the phase and raises.
    """
    p = np.asarray(phases, dtype=float).copy()
    for i in range(1, p.size):
        p[i] -= period * np.round((p[i] - p[i - 1]) / period)
        if abs(p[i] - p[i - 1]) > guard:
            raise DomainError(f"phase jump {p[i] - p[i - 1]:.3g} at index {i} exceeds guard")
    return p


def transmission_limit(cfg: BarrierConfig, edge: Edge) -> float:
    """Zone-edge limit of the as-printed |T|: [1 + wL**2 / (2 upsilon -/+ 4)]**-1/2."""
    u = cfg.upsilon
    if edge is Edge.LOWER:
        if u <= 2.0:
            raise DomainError(f"lower edge needs upsilon > 2, got {u}")
        denom = 2.0 * u - 4.0
    else:
        denom = 2.0 * u + 4.0
    return (1.0 + cfg.wL ** 2 / denom) ** -0.5


def transmission_edge_exact(cfg: BarrierConfig, edge: Edge) -> float:
    """Zone-edge limit of the exact |T|: [1 + n_edge**2 wL**2 / 4]**-1/2."""
    nsq = edge_nsq(cfg, edge)
    return (1.0 + nsq * cfg.wL ** 2 / 4.0) ** -0.5
