"""Phase time, dwell time and the identity that links them.

All single-quantity functions return the delay divided by the classical
traversal time tau = L E / k. For a zero-width barrier every delay is zero
and the normalized value is reported as 0.

With R referenced to the entry face, the energy-derivative (Smith) argument
applied to the Klein-Gordon equation gives

    t_phase = t_dwell_rescaled - (E / k**2) Im R

where t_dwell_rescaled = ((E - V0)/m) t_dwell. In units of tau the last
term is -Im R / (n wL). The shorter -Im R / E form that circulates for the
same identity follows from replacing dk/dE = E/k by its inverse. It is
kept behind ``as_printed=True`` so its residual can be inspected.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from scipy import integrate

from . import special
from .errors import DomainError, EdgeError, KGTunnelError
from .kinematics import (BarrierConfig, Edge, EnergyPoint, Zone, classical_traversal,
                         derive_point, dispersion, edge_nsq)
from .numdiff import derivative_step, richardson_derivative
from .scattering import (OVERFLOW_X, ScatteringSolution, log_T_sq, phase_argument,
                         require_evanescent, solve_matching)

# Below this rho**2 the printed rational phase-time form loses digits to
# cancellation; the smooth derivative form takes over.
SMOOTH_RHO_SQ = 1e-3
# Beyond this rho*wL the rational form is evaluated divided through by sinh**2.
SCALED_X = 20.0


def _phase_time_rational(nsq, upsilon, s, x):
    """t_phase / tau as the ratio f/g of two closed-form polynomials in n**2, upsilon."""
    N, u = nsq, upsilon
    c1 = 8.0 * N * ((2.0 + 8.0 * N * u + u * u) - (4.0 * N + 3.0 * u) * s)
    c2 = 4.0 * ((4.0 + 4.0 * N * u + u * u) * s - 2.0 * u * (2.0 + 3.0 * N * u))
    d1 = 16.0 * N * (2.0 * (1.0 + 2.0 * N * u) - s * (2.0 * N + u))
    d2 = 2.0 * ((4.0 + 8.0 * N * u + u * u) * s - 4.0 * u * (1.0 + 2.0 * N * u))
    if x <= SCALED_X:
        shch_over_x = special.sinhc(2.0 * x)
        sh2 = (x * special.sinhc(x)) ** 2
        return (c1 + c2 * shch_over_x) / (d1 + d2 * sh2)
    e = math.exp(-2.0 * x)
    inv_sh2 = 4.0 * e / (1.0 - e) ** 2
    return (c1 * inv_sh2 + c2 / (math.tanh(x) * x)) / (d1 * inv_sh2 + d2)


def _phase_time_smooth(nsq, rho_sq, upsilon, s, wl):
    """(1/wL) d(phase)/dn written in variables that stay regular at rho = 0."""
    n = math.sqrt(nsq)
    x = math.sqrt(rho_sq) * wl
    drho_sq = upsilon / s - 1.0
    h = (nsq - rho_sq) / (2.0 * n)
    dh = (1.0 - drho_sq) / (2.0 * n) - (nsq - rho_sq) / (4.0 * nsq * n)
    tc = special.tanhc(x)
    arg = wl * h * tc
    return 2.0 * n * (dh * tc + h * special.tanhc_dy(x) * wl * wl * drho_sq) / (1.0 + arg * arg)


def phase_time_analytic(cfg: BarrierConfig, pt: EnergyPoint) -> float:
    require_evanescent(pt)
    if cfg.L == 0.0:
        return 0.0
    if pt.rho_sq < SMOOTH_RHO_SQ:
        return _phase_time_smooth(pt.nsq, pt.rho_sq, cfg.upsilon, pt.E_over_m, cfg.wL)
    x = pt.rho * cfg.wL
    return _phase_time_rational(pt.nsq, cfg.upsilon, pt.E_over_m, x)


def _reduced_phase(cfg: BarrierConfig, n: float) -> float:
    nsq = n * n
    _, rho_sq = dispersion(nsq, cfg.upsilon)
    W = cfg.wL
    # analytic in rho**2, so stencil points just outside the zone are fine
    arg = (nsq - rho_sq) * W * special.tanhc_sq(rho_sq * W * W) / (2.0 * n)
    return math.atan(arg) / W


def phase_time_numeric(cfg: BarrierConfig, pt: EnergyPoint) -> float:
    """(1/wL) d(phase)/dn by Richardson-extrapolated central differences.

    Valid up to and including the zone edges. Raises EdgeError only when the
    stencil would reach n = 0 or pass a pole of the continued phase.
    """
    require_evanescent(pt)
    if cfg.L == 0.0:
        return 0.0
    n = pt.n
    h = derivative_step(n)
    if n - 2.0 * h <= 0.0:
        raise EdgeError(f"n^2 = {pt.nsq} is too close to n = 0 for the difference stencil")
    for v in (n - 2.0 * h, n + 2.0 * h):
        _, rsq = dispersion(v * v, cfg.upsilon)
        if rsq < 0 and math.sqrt(-rsq) * cfg.wL >= 0.5 * math.pi:
            raise EdgeError(f"difference stencil at n^2 = {pt.nsq} leaves the continued zone")
    return richardson_derivative(lambda v: _reduced_phase(cfg, v), n, h)


def dwell_time_analytic(cfg: BarrierConfig, pt: EnergyPoint, as_printed: bool = False) -> float:
    """t_dwell / tau = f_D |T|**2 / (2 E/m).

    f_D = (1 - n**2/rho**2) + (1 + n**2/rho**2) sinh(x)cosh(x)/x is evaluated
    as 2 + (n**2 + rho**2) wL**2 (sinh(x)cosh(x)/x - 1)/x**2, which is
    the same quantity without the 1/rho**2 cancellation. ``as_printed``
    swaps in the |T| that lacks the (n**2 + rho**2)**2 factor.
    """
    require_evanescent(pt)
    if cfg.L == 0.0:
        return 0.0
    N, rsq, W, s = pt.nsq, pt.rho_sq, cfg.wL, pt.E_over_m
    x = math.sqrt(rsq) * W
    lt = log_T_sq(N, rsq, W, as_printed)
    if x > OVERFLOW_X:
        log_fd = math.log(1.0 + N / rsq) + special.log_sinh(2.0 * x) - math.log(2.0 * x)
        return math.exp(log_fd + lt) / (2.0 * s)
    f_d = 2.0 + (N + rsq) * W * W * special.shch_excess(x)
    return f_d * math.exp(lt) / (2.0 * s)


def dwell_time_integral(cfg: BarrierConfig, pt: EnergyPoint, sol: ScatteringSolution) -> float:
    """(1/j_in) * integral of |psi|**2 over the barrier, with j_in = k/m, over tau."""
    require_evanescent(pt)
    if cfg.L == 0.0:
        return 0.0
    return sol.interior_norm() / (cfg.L * pt.E_over_m)


def rescaled_dwell(cfg: BarrierConfig, pt: EnergyPoint, t_dwell: float) -> float:
    """Multiply a dwell time (absolute or normalized) by (E - V0)/m."""
    return (pt.E_over_m - cfg.upsilon) * t_dwell


def rescaled_dwell_current(cfg: BarrierConfig, pt: EnergyPoint, sol: ScatteringSolution) -> float:
    """Rescaled dwell time from the Klein-Gordon charge density, over tau.

    For Psi = psi(x) exp(-iEt) the density with the gauge-covariant time
    derivative D0 = d/dt + i V0 and the i/2 normalization is
    (i/2) [Psi* D0 Psi - (D0 Psi)* Psi] = (E - V0) |psi|**2. Its integral
    over the barrier divided by j_in = k gives the rescaled dwell time.
    """
    require_evanescent(pt)
    if cfg.L == 0.0:
        return 0.0
    d0 = -1j * (pt.E - cfg.V0)

    def density(x):
        p = sol.psi(x)
        return (0.5j * (p.conjugate() * d0 * p - (d0 * p).conjugate() * p)).real

    j0, _ = integrate.quad(density, 0.0, cfg.L, epsabs=0.0, epsrel=1e-13, limit=200)
    return (j0 / pt.k) / classical_traversal(cfg, pt)


def self_interference(cfg: BarrierConfig, pt: EnergyPoint, sol: ScatteringSolution,
                      as_printed: bool = False) -> float:
    """Self-interference delay over tau: -(E/k**2) Im R, or -Im R / E if ``as_printed``."""
    require_evanescent(pt)
    if cfg.L == 0.0:
        return 0.0
    if as_printed:
        return -sol.R.imag / pt.E / classical_traversal(cfg, pt)
    return -sol.R.imag / (pt.n * cfg.wL)


def phase_time_edge_limit(cfg: BarrierConfig, edge: Edge) -> float:
    """Exact t_phase/tau at a zone edge for the given wL.

    (3/2 - u/s - n**2 wL**2 (u/s - 1)/3) / (1 + n**2 wL**2 / 4), s = E/m.
    """
    nsq = edge_nsq(cfg, edge)
    u = cfg.upsilon
    s = u - 1.0 if edge is Edge.LOWER else u + 1.0
    W2 = cfg.wL ** 2
    return (1.5 - u / s - nsq * W2 * (u / s - 1.0) / 3.0) / (1.0 + nsq * W2 / 4.0)


def phase_time_opaque_edge_limit(upsilon: float, edge: Edge) -> float:
    """wL -> infinity value of the zone-edge phase time, -(4/3)/(1 +/- 2 n**2)."""
    if edge is Edge.LOWER:
        nsq = 0.5 * upsilon - 1.0
        return -4.0 / 3.0 / (1.0 + 2.0 * nsq)
    nsq = 0.5 * upsilon + 1.0
    return -4.0 / 3.0 / (1.0 - 2.0 * nsq)


@dataclass(frozen=True)
class TimeReport:
    """All delays at one energy. Absolute times are in units of 1/m."""

    nsq: float
    E: float
    tau: float
    t_phase: float
    t_dwell: float
    t_dwell_rescaled: float
    t_self_interference: float
    identity_residual: float
    t_phase_norm: float
    t_dwell_norm: float
    t_dwell_rescaled_norm: float
    t_self_interference_norm: float
    identity_residual_norm: float
    # same identity with -Im R / E as the interference term
    t_self_interference_printed_norm: float
    identity_residual_printed_norm: float


def time_report(cfg: BarrierConfig, pt: EnergyPoint, phase: str = "analytic") -> TimeReport:
    sol = solve_matching(cfg, pt)
    tau = classical_traversal(cfg, pt)
    if phase == "analytic":
        tp = phase_time_analytic(cfg, pt)
    elif phase == "numeric":
        tp = phase_time_numeric(cfg, pt)
    else:
        raise DomainError(f"unknown phase-time path {phase!r}")
    td = dwell_time_integral(cfg, pt, sol)
    tdr = rescaled_dwell(cfg, pt, td)
    ti = self_interference(cfg, pt, sol)
    ti_printed = self_interference(cfg, pt, sol, as_printed=True)
    res = tp - (tdr + ti)
    res_printed = tp - (tdr + ti_printed)
    return TimeReport(
        nsq=pt.nsq, E=pt.E, tau=tau,
        t_phase=tp * tau, t_dwell=td * tau, t_dwell_rescaled=tdr * tau,
        t_self_interference=ti * tau, identity_residual=res * tau,
        t_phase_norm=tp, t_dwell_norm=td, t_dwell_rescaled_norm=tdr,
        t_self_interference_norm=ti, identity_residual_norm=res,
        t_self_interference_printed_norm=ti_printed,
        identity_residual_printed_norm=res_printed,
    )


def identity_report(cfg: BarrierConfig, nsq_grid, phase: str = "analytic",
                    workers: int = 1) -> list[TimeReport]:
    """TimeReport for every grid point strictly inside the tunneling zone.

    Points outside the zone, or too close to an edge for the chosen
    phase-time path, are dropped with a warning. Output order follows the
    grid regardless of ``workers``.
    """

    def one(nsq):
        try:
            pt = derive_point(cfg, float(nsq))
            if pt.zone is not Zone.TUNNELING:
                raise DomainError(f"n^2 = {nsq} is in the {pt.zone.value} zone")
            return time_report(cfg, pt, phase)
        except KGTunnelError as exc:
            return exc

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, nsq_grid))
    else:
        results = [one(v) for v in nsq_grid]

    reports = []
    for nsq, r in zip(nsq_grid, results):
        if isinstance(r, Exception):
            warnings.warn(f"skipped n^2 = {nsq}: {r}", RuntimeWarning, stacklevel=2)
        else:
            reports.append(r)
    return reports
