"""Relativistic delays against the Schrodinger reference as upsilon -> 0.

    python3 scripts/nr_limit.py
"""

import math

import numpy as np

from kgtunnel.kinematics import BarrierConfig, derive_point
from kgtunnel.nr_reference import (NrPoint, dwell_time_schrodinger, phase_time_schrodinger,
                                   transmission_schrodinger)
from kgtunnel.scattering import solve_matching
from kgtunnel.times import dwell_time_analytic, phase_time_analytic


def discrepancies(u, nsq, wl):
    cfg = BarrierConfig.from_dimensionless(u, wl)
    pt = derive_point(cfg, nsq)
    p = NrPoint(nsq, wl)
    pairs = ((abs(solve_matching(cfg, pt).T), transmission_schrodinger(p)),
             (phase_time_analytic(cfg, pt), phase_time_schrodinger(p)),
             (dwell_time_analytic(cfg, pt), dwell_time_schrodinger(p)))
    return [abs(a - b) / abs(b) for a, b in pairs]


def main():
    us = np.logspace(-6, -2, 9)
    for wl in (math.pi, 2 * math.pi, 4 * math.pi):
        for nsq in (0.25, 0.5, 0.75):
            d = np.array([discrepancies(u, nsq, wl) for u in us])
            slopes = [np.polyfit(np.log(us), np.log(d[:, j]), 1)[0] for j in range(3)]
            coef = (d.max(axis=1) / us).max()
            print(f"wL={wl:7.4f} n^2={nsq:.2f}  exponents |T| {slopes[0]:.3f} "
                  f"phase {slopes[1]:.3f} dwell {slopes[2]:.3f}  max disc/u {coef:.2f}")


if __name__ == "__main__":
    main()
