"""Command line: ``relqsl compute`` for one point, ``relqsl sweep`` for tables.

Exit codes: 0 success, 2 invalid flags or parameters, 3 numerical
convergence failure. Floats are printed so that they re-parse to the same
double (17 significant digits in CSV, shortest round-trip repr in JSON).
"""
from __future__ import annotations

import argparse
import contextlib
import json
import math
import sys

import numpy as np

from . import __version__
from .dephasing import DephasingSpec, decoherence_factor, is_markovian_window
from .numerics import ConvergenceError, Tolerance
from .qslt import EvolutionWindow, QsltProblem, markovian_qslt, relativistic_qslt, unified_qslt
from .relativity import BoostedPacketSpec, chi, chi_mc_oracle
from .sweep import PRESETS, SUPER_OHMIC_N, VARIABLES, SweepFixed, SweepSpec, preset, run_sweep

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONVERGENCE = 3

SWEEP_HEADER = ("var", "value", "chi", "p_tau", "qslt_ohmic", "qslt_superohmic", "flags")


class UsageError(ValueError):
    pass


def _real(text: str) -> float:
    """Float parser accepting ``inf``/``infinity`` for rapidity and tau."""
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if math.isnan(v):
        raise argparse.ArgumentTypeError("NaN is not a valid parameter")
    return v


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _json_value(x):
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else fmt(x)
    return x


def _physics_flags(p: argparse.ArgumentParser, ohmicity: bool):
    g = p.add_argument_group("physics (defaults: delta_tau=1, eta=1, omega_c=1, theta=pi/4)")
    if ohmicity:
        g.add_argument("--ohmicity", type=_real, default=1.0, help="bath exponent n (1 = Ohmic)")
    else:
        g.add_argument("--superohmic-n", type=_real, default=SUPER_OHMIC_N, help="exponent of the super-Ohmic bath")
    g.add_argument("--eta", type=_real, default=1.0)
    g.add_argument("--omega-c", type=_real, default=1.0)
    g.add_argument("--alpha", type=_real, default=0.0, help="rapidity magnitude; 'inf' for the infinite limit")
    g.add_argument("--K", type=_real, default=1.0, help="mean momentum / mass")
    g.add_argument("--W", type=_real, default=4.0, help="wavepacket width / mass")
    th = g.add_mutually_exclusive_group()
    th.add_argument("--theta", type=_real, default=None, help="coherence angle in radians, [0, pi/4]")
    th.add_argument("--theta-deg", type=_real, default=None, help="coherence angle in degrees")
    g.add_argument("--tau", type=_real, default=0.0, help="initial time; 'inf' allowed")
    g.add_argument("--delta-tau", type=_real, default=1.0)


def _common_flags(p: argparse.ArgumentParser, formats):
    p.add_argument("--tol-rel", type=_real, default=1e-8)
    p.add_argument("--tol-abs", type=_real, default=1e-12)
    p.add_argument("--mc-samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--out", default=None, help="write to PATH instead of standard output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relqsl", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"relqsl {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="QSLT at a single parameter point")
    _physics_flags(c, ohmicity=True)
    _common_flags(c, ("csv", "json"))
    c.add_argument("--chi-method", choices=("quad", "mc"), default="quad")

    s = sub.add_parser("sweep", help="QSLT table over one parameter")
    _physics_flags(s, ohmicity=False)
    _common_flags(s, ("csv", "json"))
    s.add_argument("--preset", choices=PRESETS)
    s.add_argument("--var", choices=VARIABLES)
    s.add_argument("--from", dest="start", type=_real)
    s.add_argument("--to", dest="stop", type=_real)
    s.add_argument("--points", type=int)
    s.add_argument("--with-inf", action="store_true", help="append an infinite-value limit row (tau or alpha)")
    s.add_argument("--no-cross-check", action="store_true", help="skip the closed-form/raw-trace cross-check")
    return parser


def _theta(args) -> float:
    if args.theta_deg is not None:
        return math.radians(args.theta_deg)
    return math.pi / 4 if args.theta is None else args.theta


def _tolerance(args) -> Tolerance:
    return Tolerance(args.tol_rel, args.tol_abs)


@contextlib.contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            yield fh


# --- compute ------------------------------------------------------------------


def compute_record(args) -> dict:
    tol = _tolerance(args)
    bath = DephasingSpec(args.eta, args.omega_c, args.ohmicity)
    packet = BoostedPacketSpec(_theta(args), args.K, args.W, args.alpha)
    window = EvolutionWindow(args.tau, args.delta_tau)
    if args.chi_method == "mc":
        chi_res = chi_mc_oracle(packet, args.mc_samples, args.seed)
    else:
        chi_res = chi(packet, tol)
    problem = QsltProblem(bath, window, chi_res.value, packet.theta, tol)
    p_tau = decoherence_factor(bath, window.tau, tol)
    p_t = decoherence_factor(bath, window.t_end, tol)
    flags = []
    if not bath.supported:
        flags.append("unsupported-n")
    if window.finite:
        qslt = relativistic_qslt(problem)
        unified = unified_qslt(problem)
        ml, mt, active = unified.ml_term, unified.mt_term, unified.active_bound
        markovian = is_markovian_window(bath, (window.tau, window.t_end))
        if not markovian:
            flags.append("non-markovian")
    else:
        # only the Markovian closed form has a tau -> inf limit; there MT = ML / sqrt 2
        qslt = markovian_qslt(p_tau, window.delta_tau, chi_res.value, packet.theta)
        ml, mt, active = qslt, qslt / math.sqrt(2.0), "ML"
        markovian = True
        flags.append("tau-limit")
    return {
        "chi": chi_res.value,
        "chi_error": chi_res.error_estimate,
        "chi_method": chi_res.method,
        "p_tau": p_tau,
        "p_t": p_t,
        "qslt": qslt,
        "ml_bound": ml,
        "mt_bound": mt,
        "active_bound": active,
        "qslt_markovian": markovian_qslt(p_tau, window.delta_tau, chi_res.value, packet.theta),
        "markovian_window": markovian,
        "tol_rel": tol.rel,
        "tol_abs": tol.abs,
        "flags": ";".join(flags),
    }


def write_record(record: dict, fmt_name: str, out) -> None:
    if fmt_name == "json":
        out.write(json.dumps({k: _json_value(v) for k, v in record.items()}, allow_nan=False) + "\n")
    else:
        out.write(",".join(record) + "\n")
        out.write(",".join(fmt(v) for v in record.values()) + "\n")


def cmd_compute(args) -> int:
    record = compute_record(args)
    with _output(args.out) as out:
        write_record(record, args.format, out)
    return EXIT_OK


# --- sweep --------------------------------------------------------------------


def sweep_spec_from_args(args) -> SweepSpec:
    tol = _tolerance(args)
    cross = not args.no_cross_check
    if args.preset:
        if args.var is not None:
            raise UsageError("use either --preset or --var, not both")
        spec = preset(args.preset)
        return SweepSpec(spec.variable, spec.grid, spec.fixed, spec.curves, spec.preset, tol, cross)
    if args.var is None or args.start is None or args.stop is None or args.points is None:
        raise UsageError("sweep needs --preset, or --var with --from/--to/--points")
    if args.points < 1:
        raise UsageError("--points must be >= 1")
    if not (math.isfinite(args.start) and math.isfinite(args.stop)):
        raise UsageError("--from and --to must be finite; add --with-inf for a limit row")
    grid = tuple(np.linspace(args.start, args.stop, args.points))
    if args.with_inf:
        grid += (math.inf,)
    fixed = SweepFixed(
        ohmic=DephasingSpec(args.eta, args.omega_c, 1.0),
        superohmic=DephasingSpec(args.eta, args.omega_c, args.superohmic_n),
        packet=BoostedPacketSpec(_theta(args), args.K, args.W, args.alpha),
        window=EvolutionWindow(args.tau, args.delta_tau),
    )
    return SweepSpec(args.var, grid, fixed, preset=None, tol=tol, cross_check=cross)


def write_table(table, fmt_name: str, out) -> None:
    var = table.spec.variable
    if fmt_name == "json":
        payload = {
            "metadata": {k: _json_value(v) for k, v in table.metadata.items()},
            "rows": [
                {
                    "var": var,
                    "curve": r.curve,
                    "value": _json_value(r.value),
                    "chi": _json_value(r.chi),
                    "p_tau": _json_value(r.p_tau),
                    "p_tau_superohmic": _json_value(r.p_tau_superohmic),
                    "qslt_ohmic": _json_value(r.qslt_ohmic),
                    "qslt_superohmic": _json_value(r.qslt_superohmic),
                    "flags": list(r.flags),
                }
                for r in table.rows
            ],
        }
        out.write(json.dumps(payload, allow_nan=False) + "\n")
        return
    for key, value in table.metadata.items():
        out.write(f"# {key}: {fmt(value)}\n")
    out.write(",".join(SWEEP_HEADER) + "\n")
    for r in table.rows:
        flags = (f"curve={r.curve}", f"p_tau_superohmic={fmt(r.p_tau_superohmic)}") + r.flags
        cells = (var, fmt(r.value), fmt(r.chi), fmt(r.p_tau), fmt(r.qslt_ohmic), fmt(r.qslt_superohmic))
        out.write(",".join(cells) + "," + ";".join(flags) + "\n")


def cmd_sweep(args) -> int:
    spec = sweep_spec_from_args(args)
    table = run_sweep(spec, threads=max(1, args.threads))
    with _output(args.out) as out:
        write_table(table, args.format, out)
    return EXIT_OK if any(r.ok for r in table.rows) else EXIT_CONVERGENCE


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "compute":
            return cmd_compute(args)
        return cmd_sweep(args)
    except ConvergenceError as exc:
        print(f"relqsl: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except ValueError as exc:
        print(f"relqsl: {exc}", file=sys.stderr)
        return EXIT_USAGE
