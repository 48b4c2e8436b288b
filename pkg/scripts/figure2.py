"""Delay-time curves over the tunneling zone for upsilon = 5, wL = 2 pi.

Writes figure2.csv and figure2.gp into the output directory and prints the
extremes of each curve plus the zone-edge values.

    python3 scripts/figure2.py [outdir]
"""

import math
import pathlib
import sys

import numpy as np

from kgtunnel import cli
from kgtunnel.kinematics import BarrierConfig, Edge
from kgtunnel.scattering import transmission_edge_exact, transmission_limit
from kgtunnel.times import phase_time_edge_limit, phase_time_opaque_edge_limit


def main(outdir="."):
    out = pathlib.Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "figure2.csv"
    sc = cli.SweepConfig(upsilon=5.0, wl=2 * math.pi)
    text = cli.run_sweep(sc, workers=cli.worker_count())
    csv_path.write_text(text, encoding="ascii")
    header = text.split("\n", 1)[0].split(",")
    (out / "figure2.gp").write_text(cli.emit_plot_script(str(csv_path), header=header))

    data = np.genfromtxt(csv_path, delimiter=",", skip_header=2, comments="#")
    for name in ("t_phase_norm", "t_dwell_norm", "t_dwell_rescaled_norm", "t_interference_norm"):
        col = data[:, header.index(name)]
        print(f"{name:24s} min {col.min(): .5f}  max {col.max(): .5f}")
    res = np.abs(data[:, header.index("identity_residual")]).max()
    print(f"identity residual max   {res:.2e}")

    cfg = sc.barrier()
    print(f"E = V0 at n^2 = {cfg.nsq_turning():.4f}")
    for edge in Edge:
        print(f"{edge.value:5s} edge: |T| {transmission_edge_exact(cfg, edge):.5f} "
              f"(quoted formula {transmission_limit(cfg, edge):.5f}), "
              f"t_phase/tau {phase_time_edge_limit(cfg, edge):.4f} "
              f"(opaque limit {phase_time_opaque_edge_limit(cfg.upsilon, edge):.4f})")


if __name__ == "__main__":
    main(*sys.argv[1:])
