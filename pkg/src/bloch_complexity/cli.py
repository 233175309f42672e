"""Command-line interface.

    bloch-complexity fixture fig4-AB --format table
    bloch-complexity run evolution.cfg --dump-trajectory traj.csv
    bloch-complexity sweep sweep.cfg --out sweep.csv --jobs 4

Exit codes: 0 success, 2 usage or configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .config import FORMATS, RunConfig
from .errors import InputError, NumericalError
from .propagation import PropagationConfig, travel_time
from .scenarios import FIXTURES, Evolution, MetricReport, analyze, fixture_evolution, sweep_alpha

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3
DIGITS = 12
SYMBOLIC_TOL = 1e-9

REPORT_FIELDS = (
    "s0", "s", "travel_time", "eta_ge", "eta_se_mean", "eta_se_min", "eta_se_max",
    "kappa2", "v_bar", "v_max", "c", "l_c", "quadrature_error",
)
SWEEP_FIELDS = ("alpha", "travel_time", "s0", "s", "eta_ge", "eta_se_mean", "kappa2", "v_bar", "v_max", "c", "l_c")
TRAJECTORY_FIELDS = ("t", "re_c0", "im_c0", "re_c1", "im_c1", "x", "y", "z", "theta_u", "phi_u", "v_instant")

# (symbol, value) pairs tried in order for the symbolic annotation
_BASES = (("", 1.0), ("pi", math.pi), ("sqrt(2)", math.sqrt(2.0)), ("sqrt(2)*pi", math.sqrt(2.0) * math.pi))
_DENOMINATORS = (1, 2, 3, 4, 6, 8, 12, 16)


def fmt(x: float) -> str:
    """12 significant digits; negative zero printed as 0."""
    x = float(x)
    if x == 0.0:
        return "0"
    return f"{x:.{DIGITS}g}"


def symbolic(x: float, tol: float = SYMBOLIC_TOL) -> Optional[str]:
    """Closed form p/q * {1, pi, sqrt(2), sqrt(2) pi} within ``tol``, else None."""
    x = float(x)
    if not math.isfinite(x):
        return None
    if abs(x) < tol:
        return "0"
    for name, base in _BASES:
        for q in _DENOMINATORS:
            p = round(x * q / base)
            if p == 0 or abs(p) > 64 or abs(p * base / q - x) > tol:
                continue
            frac = Fraction(p, q)
            num, den = frac.numerator, frac.denominator
            if not name:
                return str(num) if den == 1 else f"{num}/{den}"
            head = name if num == 1 else ("-" + name if num == -1 else f"{num}*{name}")
            return head if den == 1 else f"{head}/{den}"
    return None


def _report_dict(report: MetricReport) -> dict:
    d = report.as_dict()
    out = {k: d[k] for k in REPORT_FIELDS}
    out["shape"] = d["shape"]
    return out


def _csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if isinstance(v, (float, int, np.floating)) else v for v in row])
    return buf.getvalue()


def render_report(report: MetricReport, style: str, name: str = "") -> str:
    data = _report_dict(report)
    if style == "json":
        payload = {"name": name} if name else {}
        payload.update({k: float(fmt(v)) for k, v in data.items() if k != "shape"})
        payload["shape"] = data["shape"]
        payload["symbolic"] = {k: sym for k in REPORT_FIELDS if k != "quadrature_error" and (sym := symbolic(data[k]))}
        return json.dumps(payload, indent=2) + "\n"
    header = ["name"] * bool(name) + list(REPORT_FIELDS) + ["shape"]
    row = [name] * bool(name) + [data[k] for k in REPORT_FIELDS] + [data["shape"]]
    if style == "csv":
        return _csv_text(header, [row])
    cells = [c if isinstance(c, str) else fmt(c) for c in row]
    widths = [max(len(h), len(c)) for h, c in zip(header, cells)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths)), "  ".join(c.rjust(w) for c, w in zip(cells, widths))]
    return "\n".join(lines) + "\n"


def trajectory_csv(evo: Evolution) -> str:
    traj = evo.trajectory
    st, b = traj.states, traj.bloch
    rows = zip(
        traj.times, st[:, 0].real, st[:, 0].imag, st[:, 1].real, st[:, 1].imag,
        b[:, 0], b[:, 1], b[:, 2], traj.angles.theta_u, traj.angles.phi_u, evo.volumes,
    )
    return _csv_text(TRAJECTORY_FIELDS, list(rows))


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_fixture(args) -> int:
    if args.name not in FIXTURES:
        print(f"error: unknown fixture {args.name!r}; choose from {', '.join(FIXTURES)}", file=sys.stderr)
        return EXIT_USAGE
    evo = fixture_evolution(args.name, samples=args.samples or 4096)
    _write(args.out, render_report(evo.report, args.format or "table", args.name))
    if args.dump_trajectory:
        _write(args.dump_trajectory, trajectory_csv(evo))
    return EXIT_OK


def cmd_run(args) -> int:
    cfg = RunConfig.from_file(args.config)
    samples = args.samples or cfg.samples
    if cfg.t_end == "auto":
        t_end = travel_time(cfg.field, cfg.initial_state, cfg.target_state, PropagationConfig(samples=samples))
    else:
        t_end = cfg.t_end
    evo = analyze(cfg.field, cfg.initial_state, t_end, samples)
    _write(args.out, render_report(evo.report, args.format or cfg.format))
    if args.dump_trajectory:
        _write(args.dump_trajectory, trajectory_csv(evo))
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = RunConfig.from_file(args.config, require_alpha=False)
    if cfg.family is None:
        raise InputError("hamiltonian.family: a sweep needs a family Hamiltonian")
    if cfg.alphas is None:
        raise InputError("sweep.alpha: no alpha grid given")
    result = sweep_alpha(
        cfg.alphas,
        cfg.family.a_hat,
        cfg.family.b_hat,
        energy=cfg.family.energy,
        samples=args.samples or cfg.samples,
        initial=cfg.initial_state,
        target=cfg.target_state,
        jobs=args.jobs or cfg.jobs,
    )
    rows = []
    for alpha, rep in result.rows:
        d = rep.as_dict()
        rows.append([alpha] + [d[k] for k in SWEEP_FIELDS[1:]])
    _write(args.out, _csv_text(SWEEP_FIELDS, rows))
    a_sym = symbolic(result.argmin_alpha)
    t_sym = symbolic(result.min_travel_time)
    summary = (
        f"argmin alpha = {fmt(result.argmin_alpha)}" + (f" ({a_sym})" if a_sym else "")
        + f", travel_time = {fmt(result.min_travel_time)}" + (f" ({t_sym})" if t_sym else "")
    )
    # keep stdout clean when the CSV itself goes there
    print(summary, file=sys.stdout if args.out not in (None, "-") else sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bloch-complexity", description="Geometric quality metrics of qubit evolutions.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=None, help="report format (default table)")
    common.add_argument("--samples", type=int, default=None, help="time samples per trajectory")
    common.add_argument("--out", default=None, help="write the report or sweep CSV here instead of stdout")
    common.add_argument("--dump-trajectory", default=None, metavar="PATH", help="write per-sample trajectory CSV")
    common.add_argument("--jobs", type=int, default=None, help="worker threads for sweeps")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fixture", parents=[common], help="run a named reference evolution")
    p.add_argument("name", help=f"one of: {', '.join(FIXTURES)}")
    p.set_defaults(func=cmd_fixture)

    p = sub.add_parser("run", parents=[common], help="run an evolution described by a config file")
    p.add_argument("config")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", parents=[common], help="sweep alpha over the one-parameter family")
    p.add_argument("config")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.samples is not None and args.samples < 3:
        print("error: --samples must be >= 3", file=sys.stderr)
        return EXIT_USAGE
    if args.jobs is not None and args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
