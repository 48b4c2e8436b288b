"""Command-line front end: delay-time sweeps, packet checks, plot scripts.

    kgtunnel --figure2 --out fig2.csv --plot-script fig2.gp
    kgtunnel --upsilon 3 --wl 3.14159 --steps 200
    kgtunnel --figure2 --packet-k0-nsq 2.5 --packet-sigma 0.005

Exit codes: 0 success (row warnings possible), 2 usage error, 3 numerical
failure that aborts the run.
"""

from __future__ import annotations

import argparse
import io
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, KGTunnelError, SchemaError, SpecError
from .kinematics import BarrierConfig, Zone, derive_point, tunneling_grid
from .scattering import solve_matching, unwrap_phase
from .times import (dwell_time_integral, phase_time_analytic, rescaled_dwell,
                    self_interference)
from .wavepacket import PacketSpec, peak_arrival_time, sigma_trend, stationary_phase_delay

COLUMNS = (
    "nsq", "E_over_m", "rho", "T_mag", "phase_unwrapped", "t_phase_norm",
    "t_dwell_norm", "t_dwell_rescaled_norm", "t_interference_norm", "identity_residual",
)
OUTPUT_COLUMNS = {
    "transmission": ("T_mag", "phase_unwrapped"),
    "phase": ("t_phase_norm",),
    "dwell": ("t_dwell_norm",),
    "dwell_rescaled": ("t_dwell_rescaled_norm",),
    "interference": ("t_interference_norm",),
    "residual": ("identity_residual",),
}
ALWAYS = ("nsq", "E_over_m", "rho")
PLOT_CURVES = (
    # column, title, gnuplot style for the figure layout
    ("t_phase_norm", "Phase time", "dt 4 lc rgb 'black'"),
    ("t_dwell_norm", "Dwell time", "dt 2 lc rgb 'black'"),
    ("t_interference_norm", "Self-interference", "dt 1 lc rgb 'black'"),
    ("t_dwell_rescaled_norm", "Rescaled dwell time", "dt 2 lc rgb 'red'"),
)
FIGURE2 = {"upsilon": 5.0, "wl": 2.0 * math.pi}
EDGE_SHAVE = 1e-6

EXIT_USAGE = 2
EXIT_NUMERICAL = 3


class NumericalFailure(KGTunnelError):
    pass


def _fmt(v: float) -> str:
    return "%.17g" % v


@dataclass(frozen=True)
class SweepConfig:
    upsilon: float
    wl: float
    nsq_min: float | None = None
    nsq_max: float | None = None
    steps: int = 512
    outputs: frozenset = field(default_factory=lambda: frozenset(OUTPUT_COLUMNS))
    format: str = "csv"

    def barrier(self) -> BarrierConfig:
        return BarrierConfig.from_dimensionless(self.upsilon, self.wl)

    def grid(self) -> np.ndarray:
        unknown = set(self.outputs) - set(OUTPUT_COLUMNS)
        if unknown:
            raise DomainError(f"unknown outputs {sorted(unknown)}")
        if self.format not in ("csv", "plot-script"):
            raise DomainError(f"unknown format {self.format!r}")
        return tunneling_grid(self.barrier(), self.steps, shave=EDGE_SHAVE,
                              nsq_min=self.nsq_min, nsq_max=self.nsq_max)

    def columns(self) -> tuple[str, ...]:
        keep = set(ALWAYS)
        for name in self.outputs:
            keep.update(OUTPUT_COLUMNS[name])
        return tuple(c for c in COLUMNS if c in keep)

    def describe(self) -> str:
        lo, hi = self.grid()[[0, -1]]
        outs = "+".join(sorted(self.outputs))
        return (f"# config: upsilon={_fmt(self.upsilon)} wl={_fmt(self.wl)} "
                f"nsq_min={_fmt(lo)} nsq_max={_fmt(hi)} steps={self.steps} outputs={outs}")


def _row(cfg: BarrierConfig, nsq: float) -> dict:
    pt = derive_point(cfg, nsq)
    if pt.zone is not Zone.TUNNELING:
        raise DomainError(f"n^2 = {nsq} is in the {pt.zone.value} zone")
    sol = solve_matching(cfg, pt)
    tp = phase_time_analytic(cfg, pt)
    td = dwell_time_integral(cfg, pt, sol)
    tdr = rescaled_dwell(cfg, pt, td)
    ti = self_interference(cfg, pt, sol)
    return {
        "nsq": nsq, "E_over_m": pt.E_over_m, "rho": pt.rho, "T_mag": abs(sol.T),
        "phase_unwrapped": sol.phase_T, "t_phase_norm": tp, "t_dwell_norm": td,
        "t_dwell_rescaled_norm": tdr, "t_interference_norm": ti,
        "identity_residual": tp - (tdr + ti),
    }


def worker_count() -> int:
    raw = os.environ.get("KG_TUNNEL_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"KG_TUNNEL_THREADS must be an integer, got {raw!r}")
    if n < 0:
        raise DomainError("KG_TUNNEL_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)


def run_sweep(sc: SweepConfig, workers: int = 1, diag=None) -> str:
    """CSV document for the sweep; failed rows carry nan and a diagnostic line."""
    diag = sys.stderr if diag is None else diag
    grid = sc.grid()
    cfg = sc.barrier()

    def one(nsq):
        try:
            return _row(cfg, float(nsq))
        except KGTunnelError as exc:
            return exc

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, grid))
    else:
        rows = [one(v) for v in grid]

    failed = 0
    for i, r in enumerate(rows):
        if isinstance(r, Exception):
            failed += 1
            print(f"warning: row {i} (nsq={_fmt(grid[i])}) failed: {r}", file=diag)
            rows[i] = {c: (float(grid[i]) if c == "nsq" else math.nan) for c in COLUMNS}
    if failed == len(rows):
        raise NumericalFailure("every sweep row failed")

    good = [i for i, r in enumerate(rows) if np.isfinite(r["phase_unwrapped"])]
    unwrapped = unwrap_phase([rows[i]["phase_unwrapped"] for i in good])
    for i, v in zip(good, unwrapped):
        rows[i]["phase_unwrapped"] = v

    cols = sc.columns()
    buf = io.StringIO(newline="")
    buf.write(",".join(cols) + "\n")
    buf.write(sc.describe() + "\n")
    for r in rows:
        buf.write(",".join(_fmt(r[c]) for c in cols) + "\n")
    return buf.getvalue()


def read_header(csv_path: str) -> list[str]:
    with open(csv_path, encoding="ascii", newline="") as fh:
        return fh.readline().rstrip("\n").split(",")


def emit_plot_script(csv_path: str, style: str = "figure", header: list[str] | None = None) -> str:
    """gnuplot script drawing the four delay curves from a sweep CSV.

    ``style="figure"``: dash-dotted phase time, dashed black dwell time, solid
    self-interference and dashed red rescaled dwell time. ``style="plain"``
    leaves styling to gnuplot.
    """
    if style not in ("figure", "plain"):
        raise DomainError(f"unknown plot style {style!r}")
    header = read_header(csv_path) if header is None else header
    missing = [c for c, _, _ in PLOT_CURVES if c not in header] + \
        ([] if "nsq" in header else ["nsq"])
    if missing:
        raise SchemaError(f"{csv_path}: missing columns {missing}")
    x = header.index("nsq") + 1
    lines = [
        f"# gnuplot script for {os.path.basename(csv_path)}; run: gnuplot -p <this file>",
        "set datafile separator ','",
        "set datafile commentschars '#'",
        "set xlabel 'n^2'",
        "set ylabel 't / tau'",
        "set xzeroaxis",
        "set key top left",
    ]
    parts = []
    for i, (col, title, sty) in enumerate(PLOT_CURVES):
        src = f"'{csv_path}'" if i == 0 else "''"
        y = header.index(col) + 1
        extra = f" {sty}" if style == "figure" else ""
        parts.append(f"{src} skip 1 using {x}:{y} with lines{extra} title '{title}'")
    lines.append("plot " + ", \\\n     ".join(parts))
    return "\n".join(lines) + "\n"


def run_packet_check(cfg: BarrierConfig, spec: PacketSpec, free: bool = False,
                     trend=(0.02, 0.01, 0.005)) -> str:
    """Report comparing the packet peak arrival with the stationary-phase delay."""
    out = io.StringIO(newline="")
    if free:
        arrival = peak_arrival_time(cfg, spec, free=True)
        out.write("mode=free\n")
        out.write(f"arrival={_fmt(arrival)}\n")
        return out.getvalue()
    nsq = (spec.k0 / cfg.w) ** 2
    t_phase = stationary_phase_delay(cfg, spec.k0)
    arrival = peak_arrival_time(cfg, spec)
    out.write("mode=barrier\n")
    out.write(f"upsilon={_fmt(cfg.upsilon)}\nwl={_fmt(cfg.wL)}\nk0_nsq={_fmt(nsq)}\n")
    out.write(f"sigma_over_w={_fmt(spec.sigma / cfg.w)}\n")
    out.write(f"t_phase={_fmt(t_phase)}\narrival={_fmt(arrival)}\n")
    out.write(f"discrepancy={_fmt(abs(arrival - t_phase) / abs(t_phase))}\n")
    out.write("sigma_over_w,t_phase,arrival,discrepancy\n")
    for r in sigma_trend(cfg, nsq, trend, n_quad=spec.n_quad, k_window=spec.k_window):
        out.write(f"{_fmt(r.sigma_frac)},{_fmt(r.t_phase)},{_fmt(r.arrival)},{_fmt(r.discrepancy)}\n")
    return out.getvalue()


def read_config_file(path: str) -> dict:
    """key=value lines; '#' starts a comment; keys match the long flags."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected key=value")
            key, val = (s.strip() for s in line.split("=", 1))
            values[key.replace("-", "_")] = val
    return values


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kgtunnel", description=__doc__.split("\n")[0])
    p.add_argument("--upsilon", type=float, help="V0/m")
    p.add_argument("--wl", type=float, help="dimensionless barrier width w*L")
    p.add_argument("--nsq-min", type=float)
    p.add_argument("--nsq-max", type=float)
    p.add_argument("--steps", type=int, default=512)
    p.add_argument("--outputs", default=",".join(OUTPUT_COLUMNS),
                   help="comma list of " + ",".join(OUTPUT_COLUMNS))
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--figure2", action="store_true", help="preset upsilon=5, wL=2pi")
    p.add_argument("--packet-k0-nsq", type=float, help="run the wave-packet check at this n^2")
    p.add_argument("--packet-sigma", type=float, default=0.005, help="sigma in units of w")
    p.add_argument("--packet-free", action="store_true", help="free-propagation self-test")
    p.add_argument("--plot-script", help="write a gnuplot script for the CSV here")
    p.add_argument("--plot-style", choices=("figure", "plain"), default="figure")
    p.add_argument("--config", help="key=value file; flags win on conflict")
    return p


_BOOL_KEYS = {"figure2", "packet_free"}
_TYPES = {"upsilon": float, "wl": float, "nsq_min": float, "nsq_max": float, "steps": int,
          "packet_k0_nsq": float, "packet_sigma": float}


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    pre, _ = parser.parse_known_args(argv)
    if pre.config:
        try:
            raw = read_config_file(pre.config)
        except (OSError, DomainError) as exc:
            parser.error(str(exc))
        known = {a.dest for a in parser._actions}
        defaults = {}
        for key, val in raw.items():
            if key not in known or key == "config":
                parser.error(f"unknown config key {key!r}")
            try:
                if key in _BOOL_KEYS:
                    defaults[key] = val.lower() in ("1", "true", "yes", "on")
                else:
                    defaults[key] = _TYPES.get(key, str)(val)
            except ValueError:
                parser.error(f"bad value for {key}: {val!r}")
        parser.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    args = parse_args(argv)
    upsilon, wl = args.upsilon, args.wl
    if args.figure2:
        upsilon = FIGURE2["upsilon"] if upsilon is None else upsilon
        wl = FIGURE2["wl"] if wl is None else wl
    if upsilon is None or wl is None:
        print("usage error: --upsilon and --wl are required (or --figure2)", file=sys.stderr)
        return EXIT_USAGE

    try:
        if args.packet_k0_nsq is not None or args.packet_free:
            cfg = BarrierConfig.from_dimensionless(upsilon, wl)
            nsq = args.packet_k0_nsq if args.packet_k0_nsq is not None else 0.5 * upsilon
            spec = PacketSpec.at_nsq(cfg, nsq, args.packet_sigma)
            report = run_packet_check(cfg, spec, free=args.packet_free)
            _write(args.out, report)
            return 0

        outputs = frozenset(s.strip() for s in args.outputs.split(",") if s.strip())
        sc = SweepConfig(upsilon=upsilon, wl=wl, nsq_min=args.nsq_min, nsq_max=args.nsq_max,
                         steps=args.steps, outputs=outputs)
        sc.grid()
    except (DomainError, SpecError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KGTunnelError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    try:
        workers = worker_count()
        text = run_sweep(sc, workers=workers)
    except DomainError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KGTunnelError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    _write(args.out, text)

    if args.plot_script:
        csv_path = args.out or "sweep.csv"
        header = text.split("\n", 1)[0].split(",")
        try:
            script = emit_plot_script(csv_path, args.plot_style, header=header)
        except SchemaError as exc:
            print(f"usage error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        _write(args.plot_script, script)
    return 0


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)


if __name__ == "__main__":
    sys.exit(main())
