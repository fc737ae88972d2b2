"""One-parameter sweeps of the QSLT and the figure presets.

A sweep evaluates every (curve, grid value) pair. Curves are labelled
parameter overrides on top of a shared fixed bundle, so one table can hold
e.g. the four initial times drawn in a rapidity figure. Rows are computed
independently and assembled in (curve, grid) order, so the table does not
depend on the number of worker threads.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__
from ._kernels import BACKEND
from .dephasing import DephasingSpec, decoherence_factor, is_markovian_window
from .numerics import DEFAULT_TOLERANCE, ConvergenceError, Tolerance
from .qslt import EvolutionWindow, QsltProblem, markovian_qslt, relativistic_qslt, unified_qslt
from .relativity import BoostedPacketSpec, chi

VARIABLES = ("tau", "alpha", "width")
PRESETS = ("fig1", "fig2a", "fig2b", "fig3a", "fig3b")
SUPER_OHMIC_N = 2.0
CROSS_CHECK_RTOL = 1e-9
_PARAM_KEYS = ("tau", "alpha", "K", "W")


@dataclass(frozen=True)
class Curve:
    label: str
    overrides: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        if any(ch in self.label for ch in ",;\n"):
            raise ValueError(f"curve label {self.label!r} must not contain ',', ';' or newlines")
        for key, _ in self.overrides:
            if key not in _PARAM_KEYS:
                raise ValueError(f"unknown curve parameter {key!r}")


@dataclass(frozen=True)
class SweepFixed:
    ohmic: DephasingSpec = DephasingSpec(1.0, 1.0, 1.0)
    superohmic: DephasingSpec = DephasingSpec(1.0, 1.0, SUPER_OHMIC_N)
    packet: BoostedPacketSpec = BoostedPacketSpec()
    window: EvolutionWindow = EvolutionWindow()


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    grid: tuple[float, ...]
    fixed: SweepFixed = SweepFixed()
    curves: tuple[Curve, ...] = (Curve("base"),)
    preset: str | None = None
    tol: Tolerance = DEFAULT_TOLERANCE
    cross_check: bool = True

    def __post_init__(self):
        if self.variable not in VARIABLES:
            raise ValueError(f"variable must be one of {VARIABLES}, got {self.variable!r}")
        grid = tuple(float(v) for v in self.grid)
        object.__setattr__(self, "grid", grid)
        if not grid:
            raise ValueError("sweep grid is empty")
        if any(math.isnan(v) for v in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("sweep grid must be strictly increasing")
        if math.isinf(grid[-1]) and self.variable == "width":
            raise ValueError("an infinite width is not allowed")
        if not self.curves:
            raise ValueError("a sweep needs at least one curve")


@dataclass(frozen=True)
class SweepRow:
    curve: str
    value: float
    chi: float
    p_tau: float
    p_tau_superohmic: float
    qslt_ohmic: float
    qslt_superohmic: float
    flags: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not any(f.startswith("error") for f in self.flags)


@dataclass
class SweepTable:
    spec: SweepSpec
    rows: list[SweepRow]
    metadata: dict = field(default_factory=dict)

    def curve(self, label: str) -> list[SweepRow]:
        return [r for r in self.rows if r.curve == label]

    def column(self, name: str, label: str | None = None) -> np.ndarray:
        rows = self.rows if label is None else self.curve(label)
        return np.array([getattr(r, name) for r in rows], dtype=float)


def _point(spec: SweepSpec, curve: Curve, value: float):
    params = {
        "tau": spec.fixed.window.tau,
        "alpha": spec.fixed.packet.alpha,
        "K": spec.fixed.packet.K,
        "W": spec.fixed.packet.W,
    }
    params.update(dict(curve.overrides))
    params[{"tau": "tau", "alpha": "alpha", "width": "W"}[spec.variable]] = value
    packet = replace(spec.fixed.packet, alpha=params["alpha"], K=params["K"], W=params["W"])
    window = replace(spec.fixed.window, tau=params["tau"])
    return packet, window


def _chi_key(packet: BoostedPacketSpec):
    # chi does not depend on K or W when alpha = 0
    return (packet.alpha, packet.K, packet.W) if packet.alpha != 0 else (0.0, 0.0, 0.0)


def _compute_chi(args):
    packet, tol = args
    try:
        return chi(packet, tol).value, None
    except ConvergenceError as exc:
        return exc.result.value, "error:chi-convergence"


def _reservoir(label, bath, chi_value, packet, window, tol, cross_check, flags):
    p_tau = decoherence_factor(bath, window.tau, tol)
    q = markovian_qslt(p_tau, window.delta_tau, chi_value, packet.theta)
    if not bath.supported:
        flags.append(f"unsupported-n:{label}")
    if not window.finite:
        flags.append(f"tau-limit:{label}")
        return p_tau, q
    if not is_markovian_window(bath, (window.tau, window.t_end)):
        flags.append(f"non-markovian:{label}")
        return p_tau, q
    if cross_check:
        problem = QsltProblem(bath, window, chi_value, packet.theta, tol)
        closed = relativistic_qslt(problem)
        unified = unified_qslt(problem)
        flags.append(f"{label}:{unified.active_bound}")
        scale = max(abs(q), 1e-300)
        if abs(closed - q) > CROSS_CHECK_RTOL * scale or abs(unified.value - q) > CROSS_CHECK_RTOL * scale:
            flags.append(f"xcheck-mismatch:{label}")
    return p_tau, q


def _evaluate_row(args) -> SweepRow:
    spec, curve, value, packet, window, chi_value, chi_flag = args
    flags = [] if chi_flag is None else [chi_flag]
    try:
        p_o, q_o = _reservoir(
            "ohmic", spec.fixed.ohmic, chi_value, packet, window, spec.tol, spec.cross_check, flags
        )
        p_s, q_s = _reservoir(
            "superohmic", spec.fixed.superohmic, chi_value, packet, window, spec.tol, spec.cross_check, flags
        )
    except ConvergenceError:
        nan = math.nan
        return SweepRow(curve.label, value, chi_value, nan, nan, nan, nan, tuple(flags + ["error:convergence"]))
    except ValueError:
        nan = math.nan
        return SweepRow(curve.label, value, chi_value, nan, nan, nan, nan, tuple(flags + ["error:domain"]))
    return SweepRow(curve.label, value, chi_value, p_o, p_s, q_o, q_s, tuple(flags))


def run_sweep(spec: SweepSpec, threads: int = 1) -> SweepTable:
    """Evaluate the Markovian QSLT on every (curve, grid value) point.

    Finite Markovian windows are cross-checked against the closed form and
    the bound assembled from raw traces; disagreement beyond 1e-9 relative is
    flagged on the row. A failing point is flagged, not raised.
    """
    points = []
    for curve in spec.curves:
        for v in spec.grid:
            try:
                points.append((curve, v, *_point(spec, curve, v)))
            except ValueError:
                points.append((curve, v, None, None))
    keys = {}
    for _, _, packet, _ in points:
        if packet is not None:
            keys.setdefault(_chi_key(packet), packet)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        chis = dict(zip(keys, pool.map(_compute_chi, [(p, spec.tol) for p in keys.values()])))
        jobs = [(spec, c, v, pk, w, *chis[_chi_key(pk)]) for c, v, pk, w in points if pk is not None]
        computed = iter(pool.map(_evaluate_row, jobs))
    nan = math.nan
    rows = [
        next(computed) if pk is not None else SweepRow(c.label, v, nan, nan, nan, nan, nan, ("error:domain",))
        for c, v, pk, _ in points
    ]
    return SweepTable(spec, rows, sweep_metadata(spec))


def sweep_metadata(spec: SweepSpec) -> dict:
    f = spec.fixed
    return {
        "relqsl_version": __version__,
        "kernel_backend": BACKEND,
        "preset": spec.preset or "none",
        "variable": spec.variable,
        "grid_points": len(spec.grid),
        "grid_first": spec.grid[0],
        "grid_last": spec.grid[-1],
        "eta": f.ohmic.eta,
        "omega_c": f.ohmic.omega_c,
        "n_ohmic": f.ohmic.n,
        "eta_superohmic": f.superohmic.eta,
        "omega_c_superohmic": f.superohmic.omega_c,
        "n_superohmic": f.superohmic.n,
        "theta": f.packet.theta,
        "K": f.packet.K,
        "W": f.packet.W,
        "alpha": f.packet.alpha,
        "tau": f.window.tau,
        "delta_tau": f.window.delta_tau,
        "tol_rel": spec.tol.rel,
        "tol_abs": spec.tol.abs,
        "cross_check": spec.cross_check,
        "curves": "; ".join(
            c.label + (" (" + ", ".join(f"{k}={v!r}" for k, v in c.overrides) + ")" if c.overrides else "")
            for c in spec.curves
        ),
        "p_tau_column": "ohmic bath; the super-Ohmic value is the p_tau_superohmic flag",
    }


# --- presets ------------------------------------------------------------------

_TAUS = (0.0, 0.5, 1.0, math.inf)


def _tau_curves():
    return tuple(Curve(f"tau={t!r}", (("tau", t),)) for t in _TAUS)


def preset(tag: str, points: int = 201) -> SweepSpec:
    """Sweep reproducing one figure panel (eta = omega_c = 1, delta_tau = 1, theta = pi/4)."""
    base = SweepFixed()
    if tag == "fig1":
        fixed = replace(base, packet=BoostedPacketSpec(theta=math.pi / 4, K=100.0, W=4.0, alpha=0.0))
        grid = tuple(np.linspace(0.0, 10.0, points)) + (math.inf,)
        curves = (
            Curve("alpha=0", (("alpha", 0.0),)),
            Curve("K=100/alpha=inf", (("K", 100.0), ("alpha", math.inf))),
            Curve("K=0.01/alpha=inf", (("K", 0.01), ("alpha", math.inf))),
        )
        return SweepSpec("tau", grid, fixed, curves, preset=tag)
    if tag in ("fig2a", "fig2b"):
        K = 100.0 if tag == "fig2a" else 0.01
        fixed = replace(base, packet=BoostedPacketSpec(theta=math.pi / 4, K=K, W=30.0, alpha=0.0))
        grid = tuple(np.linspace(0.0, 12.0, points - 1)) + (math.inf,)
        return SweepSpec("alpha", grid, fixed, _tau_curves(), preset=tag)
    if tag in ("fig3a", "fig3b"):
        K = 100.0 if tag == "fig3a" else 0.01
        fixed = replace(base, packet=BoostedPacketSpec(theta=math.pi / 4, K=K, W=4.0, alpha=math.inf))
        grid = tuple(np.linspace(60.0 / points, 60.0, points))
        return SweepSpec("width", grid, fixed, _tau_curves(), preset=tag)
    raise ValueError(f"unknown preset {tag!r}; expected one of {PRESETS}")
