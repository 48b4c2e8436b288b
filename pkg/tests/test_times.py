import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import UPSILONS, WLS
from kgtunnel.errors import DomainError, EdgeError
from kgtunnel.kinematics import BarrierConfig, Edge, derive_point
from kgtunnel.numdiff import central_difference, richardson_derivative
from kgtunnel.scattering import solve_matching
from kgtunnel import times
from kgtunnel.times import (dwell_time_analytic, dwell_time_integral, identity_report,
                            phase_time_analytic, phase_time_edge_limit, phase_time_numeric,
                            phase_time_opaque_edge_limit, rescaled_dwell, rescaled_dwell_current,
                            self_interference, time_report)


def inside(u, frac, wl):
    cfg = BarrierConfig.from_dimensionless(u, wl)
    lo, hi = cfg.zone_bounds()
    return cfg, derive_point(cfg, lo + frac * (hi - lo))


def phase_derivative_oracle(cfg, pt):
    """d arg T / dE from the matching solver, over tau."""
    dE = 1e-6 * pt.E

    def phase_at(E):
        nsq = (E * E - cfg.m ** 2) / cfg.w ** 2
        return solve_matching(cfg, derive_point(cfg, nsq)).phase_T

    return richardson_derivative(phase_at, pt.E, dE) / (cfg.L * pt.E / pt.k)


class TestPhaseTime:
    @pytest.mark.parametrize("u", UPSILONS)
    @pytest.mark.parametrize("wl", WLS)
    @pytest.mark.parametrize("frac", [0.02, 0.25, 0.5, 0.75, 0.98])
    def test_analytic_matches_solver_derivative(self, u, wl, frac):
        cfg, pt = inside(u, frac, wl)
        assert phase_time_analytic(cfg, pt) == pytest.approx(
            phase_derivative_oracle(cfg, pt), rel=1e-7, abs=1e-9)

    @settings(max_examples=60, deadline=None)
    @given(u=st.floats(0.05, 30.0), frac=st.floats(1e-3, 1 - 1e-3), wl=st.floats(0.05, 25.0))
    def test_analytic_matches_numeric(self, u, frac, wl):
        cfg, pt = inside(u, frac, wl)
        assert phase_time_analytic(cfg, pt) == pytest.approx(
            phase_time_numeric(cfg, pt), rel=1e-7, abs=1e-8)

    @pytest.mark.parametrize("rho_sq_target", [0.5 * times.SMOOTH_RHO_SQ, 2 * times.SMOOTH_RHO_SQ])
    def test_branches_agree_near_switch(self, rho_sq_target):
        cfg = BarrierConfig.from_dimensionless(5.0, 2 * math.pi)
        nsq = 3.5 - rho_sq_target  # rho^2 ~ distance to the upper edge there
        pt = derive_point(cfg, nsq)
        s = pt.E_over_m
        rational = times._phase_time_rational(nsq, cfg.upsilon, s, pt.rho * cfg.wL)
        smooth = times._phase_time_smooth(nsq, pt.rho_sq, cfg.upsilon, s, cfg.wL)
        assert rational == pytest.approx(smooth, rel=1e-9)

    @pytest.mark.parametrize("x", [19.0, 21.0, 40.0, 400.0])
    def test_opaque_barrier_scaled_branch(self, x):
        cfg0, pt0 = inside(5.0, 0.5, 1.0)
        cfg = BarrierConfig.from_dimensionless(5.0, x / pt0.rho)
        pt = derive_point(cfg, pt0.nsq)
        val = phase_time_analytic(cfg, pt)
        assert math.isfinite(val)
        if x < 100:
            assert val == pytest.approx(phase_time_numeric(cfg, pt), rel=1e-7)

    def test_hartman_saturation(self):
        # for an opaque barrier the absolute phase time stops growing with L
        cfg0, pt0 = inside(5.0, 0.5, 1.0)
        vals = []
        for x in (20.0, 40.0, 80.0):
            cfg = BarrierConfig.from_dimensionless(5.0, x / pt0.rho)
            pt = derive_point(cfg, pt0.nsq)
            vals.append(phase_time_analytic(cfg, pt) * cfg.L * pt.E / pt.k)
        assert vals[1] == pytest.approx(vals[0], rel=1e-12)
        assert vals[2] == pytest.approx(vals[0], rel=1e-12)

    @pytest.mark.parametrize("offset", [1e-12, 1e-9, 1e-6, 0.0])
    def test_numeric_through_edges(self, fig2, offset):
        for nsq in (1.5 + offset, 3.5 - offset):
            pt = derive_point(fig2, nsq)
            assert phase_time_numeric(fig2, pt) == pytest.approx(
                phase_time_analytic(fig2, pt), abs=1e-8)

    def test_numeric_rejects_stencil_at_origin(self):
        cfg = BarrierConfig.from_dimensionless(1.0, 1.0)
        with pytest.raises(EdgeError):
            phase_time_numeric(cfg, derive_point(cfg, 1e-13))

    def test_unknown_path(self):
        cfg, pt = inside(5.0, 0.5, 1.0)
        with pytest.raises(DomainError):
            time_report(cfg, pt, phase="spline")


class TestEdgeLimits:
    @pytest.mark.parametrize("u", UPSILONS)
    @pytest.mark.parametrize("wl", WLS)
    def test_exact_edge_value(self, u, wl):
        cfg = BarrierConfig.from_dimensionless(u, wl)
        lo, hi = cfg.zone_bounds()
        upper = phase_time_analytic(cfg, derive_point(cfg, hi - 1e-9))
        assert upper == pytest.approx(phase_time_edge_limit(cfg, Edge.UPPER), abs=1e-6)
        lower = phase_time_analytic(cfg, derive_point(cfg, lo + 1e-9))
        assert lower == pytest.approx(phase_time_edge_limit(cfg, Edge.LOWER), abs=1e-6)

    def test_opaque_limit_is_the_large_width_limit(self):
        for edge, expected in ((Edge.LOWER, -1.0 / 3.0), (Edge.UPPER, 2.0 / 9.0)):
            assert phase_time_opaque_edge_limit(5.0, edge) == pytest.approx(expected)
            big = phase_time_edge_limit(BarrierConfig.from_dimensionless(5.0, 1e5), edge)
            assert big == pytest.approx(expected, abs=1e-6)

    def test_edge_value_depends_on_width(self):
        vals = [phase_time_edge_limit(BarrierConfig.from_dimensionless(5.0, wl), Edge.LOWER)
                for wl in WLS]
        assert vals == pytest.approx([-0.209, -0.296, -0.323], abs=2e-3)


class TestDwell:
    @settings(max_examples=60, deadline=None)
    @given(u=st.floats(0.05, 30.0), frac=st.floats(1e-5, 1 - 1e-5), wl=st.floats(0.05, 25.0))
    def test_rational_matches_integral(self, u, frac, wl):
        cfg, pt = inside(u, frac, wl)
        sol = solve_matching(cfg, pt)
        a = dwell_time_analytic(cfg, pt)
        assert a > 0
        assert a == pytest.approx(dwell_time_integral(cfg, pt, sol), rel=1e-8)

    def test_printed_variant_differs(self, fig2):
        pt = derive_point(fig2, 2.0)
        a = dwell_time_analytic(fig2, pt)
        printed = dwell_time_analytic(fig2, pt, as_printed=True)
        assert abs(printed - a) / a > 0.1

    @pytest.mark.parametrize("x", [45.0, 55.0, 500.0])
    def test_opaque_log_domain(self, x):
        cfg0, pt0 = inside(5.0, 0.5, 1.0)
        cfg = BarrierConfig.from_dimensionless(5.0, x / pt0.rho)
        pt = derive_point(cfg, pt0.nsq)
        a = dwell_time_analytic(cfg, pt)
        assert 0 < a < 1
        assert a == pytest.approx(dwell_time_integral(cfg, pt, solve_matching(cfg, pt)), rel=1e-9)

    @given(frac=st.floats(0.01, 0.99))
    def test_rescaled_from_density_current(self, frac):
        cfg, pt = inside(5.0, frac, 2 * math.pi)
        sol = solve_matching(cfg, pt)
        expect = rescaled_dwell(cfg, pt, dwell_time_integral(cfg, pt, sol))
        assert rescaled_dwell_current(cfg, pt, sol) == pytest.approx(expect, rel=1e-10, abs=1e-14)

    @pytest.mark.parametrize("u", [3.0, 5.0, 10.0])
    def test_rescaled_sign_changes_at_E_equals_V0(self, u):
        cfg = BarrierConfig.from_dimensionless(u, 2 * math.pi)
        t0 = cfg.nsq_turning()
        below = derive_point(cfg, t0 * (1 - 1e-6))
        above = derive_point(cfg, t0 * (1 + 1e-6))
        f = lambda p: rescaled_dwell(cfg, p, dwell_time_analytic(cfg, p))
        assert f(below) < 0 < f(above)


class TestIdentity:
    @pytest.mark.parametrize("u", UPSILONS)
    @pytest.mark.parametrize("wl", WLS)
    def test_closes_on_grid(self, u, wl):
        cfg = BarrierConfig.from_dimensionless(u, wl)
        lo, hi = cfg.zone_bounds()
        grid = np.linspace(lo + 1e-6, hi - 1e-6, 200)
        reps = identity_report(cfg, grid)
        assert len(reps) == 200
        assert max(abs(r.identity_residual_norm) for r in reps) <= 1e-10
        num = identity_report(cfg, grid, phase="numeric")
        assert len(num) == 200
        assert max(abs(r.identity_residual_norm) for r in num) <= 1e-6

    def test_printed_interference_term_leaves_residual(self, fig2):
        rep = time_report(fig2, derive_point(fig2, 2.0))
        assert abs(rep.identity_residual_printed_norm) > 1e-4
        assert abs(rep.identity_residual_norm) < 1e-12

    def test_absolute_fields_scale_with_tau(self, fig2):
        rep = time_report(fig2, derive_point(fig2, 2.0))
        assert rep.t_phase == pytest.approx(rep.t_phase_norm * rep.tau)
        assert rep.t_phase == pytest.approx(
            rep.t_dwell_rescaled + rep.t_self_interference, rel=1e-11)

    def test_skips_with_warning_and_keeps_order(self, fig2):
        grid = [1.0, 2.0, 2.5, 3.5, 5.0, 3.0]
        with pytest.warns(RuntimeWarning) as rec:
            reps = identity_report(fig2, grid, workers=4)
        assert [r.nsq for r in reps] == [2.0, 2.5, 3.0]
        assert len(rec) == 3

    def test_threads_match_serial(self, fig2):
        grid = np.linspace(1.6, 3.4, 64)
        a = identity_report(fig2, grid)
        b = identity_report(fig2, grid, workers=8)
        assert a == b


def test_zero_width_times_vanish():
    cfg = BarrierConfig(m=1.0, V0=5.0, L=0.0)
    pt = derive_point(cfg, 2.5)
    sol = solve_matching(cfg, pt)
    assert phase_time_analytic(cfg, pt) == 0.0
    assert dwell_time_analytic(cfg, pt) == 0.0
    assert dwell_time_integral(cfg, pt, sol) == 0.0
    assert self_interference(cfg, pt, sol) == 0.0
    assert rescaled_dwell_current(cfg, pt, sol) == 0.0


@pytest.mark.parametrize("x0", [0.3, 1.7, 4.0])
def test_richardson_beats_central_difference(x0):
    h = 1e-2
    exact = math.cos(x0)
    r = abs(richardson_derivative(math.sin, x0, h) - exact)
    c = abs(central_difference(math.sin, x0, h) - exact)
    assert r < 1e-9 and r < c / 100
