"""Wave-packet peak arrival against the stationary-phase delay.

Shrinks the momentum width and reports the relative discrepancy, which
falls as sigma**2, then checks quadrature and window convergence at one width.

    python3 scripts/packet_convergence.py [nsq]
"""

import math
import sys
import time

from kgtunnel.kinematics import BarrierConfig
from kgtunnel.wavepacket import PacketSpec, peak_arrival_time, sigma_trend


def main(nsq="2.5"):
    nsq = float(nsq)
    cfg = BarrierConfig.from_dimensionless(5.0, 2 * math.pi)
    fracs = (0.04, 0.02, 0.01, 0.005, 0.0025)
    t0 = time.perf_counter()
    res = sigma_trend(cfg, nsq, fracs)
    print("sigma/w    t_phase          arrival          discrepancy  ratio")
    prev = None
    for r in res:
        ratio = "" if prev is None else f"{prev / r.discrepancy:.3f}"
        print(f"{r.sigma_frac:<10g} {r.t_phase:<16.10f} {r.arrival:<16.10f} {r.discrepancy:.3e}    {ratio}")
        prev = r.discrepancy
    print(f"({time.perf_counter() - t0:.1f} s)")

    base = peak_arrival_time(cfg, PacketSpec.at_nsq(cfg, nsq, 0.01))
    for label, kw in (("n_quad 4096", dict(n_quad=4096)), ("window 7 sigma", dict(k_window=7.0)),
                      ("window 9 sigma", dict(k_window=9.0))):
        t = peak_arrival_time(cfg, PacketSpec.at_nsq(cfg, nsq, 0.01, **kw))
        print(f"{label:15s} relative shift {abs(t - base) / abs(base):.2e}")


if __name__ == "__main__":
    main(*sys.argv[1:])
