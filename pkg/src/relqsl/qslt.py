"""Quantum speed limit time for the dephased, boosted spin.

Two independent routes are provided. ``unified_qslt`` assembles the ML and
MT bounds from explicit density matrices: relative purity from traces,
singular values from a generic SVD of the state and of the generator, time
averages by quadrature. ``relativistic_qslt`` evaluates the closed form in
the decoherence factor p_t directly. ``markovian_qslt`` is the reduction
valid when p_t is monotone, and the only route defined for tau = inf.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dephasing import (
    DephasingSpec,
    decoherence_drop,
    decoherence_factor,
    dephasing_generator,
    gamma_rate,
    kraus_evolve,
)
from .numerics import DEFAULT_TOLERANCE, Tolerance, integrate_1d
from .relativity import BoostedPacketSpec, chi, initial_state

_TINY = 1e-300


@dataclass(frozen=True)
class EvolutionWindow:
    """Initial time ``tau`` (may be inf) and driving time ``delta_tau``."""

    tau: float = 0.0
    delta_tau: float = 1.0

    def __post_init__(self):
        if not self.tau >= 0:
            raise ValueError(f"tau must be >= 0 or inf, got {self.tau}")
        if not self.delta_tau > 0 or math.isinf(self.delta_tau):
            raise ValueError(f"delta_tau must be finite and > 0, got {self.delta_tau}")

    @property
    def finite(self) -> bool:
        return not math.isinf(self.tau)

    @property
    def t_end(self) -> float:
        return self.tau + self.delta_tau


@dataclass(frozen=True)
class QsltProblem:
    """Everything a QSLT evaluation needs; chi enters as a number."""

    dephasing: DephasingSpec
    window: EvolutionWindow
    chi: float
    theta: float
    tol: Tolerance = DEFAULT_TOLERANCE

    @classmethod
    def from_packet(
        cls,
        dephasing: DephasingSpec,
        packet: BoostedPacketSpec,
        window: EvolutionWindow,
        tol: Tolerance = DEFAULT_TOLERANCE,
    ) -> "QsltProblem":
        return cls(dephasing, window, chi(packet, tol).value, packet.theta, tol)

    @property
    def critical(self) -> bool:
        # coherences of the boosted state vanish identically
        return 1.0 - 4.0 * self.chi == 0.0


@dataclass(frozen=True)
class QsltResult:
    value: float
    ml_term: float
    mt_term: float
    active_bound: str
    f_final: float
    purity_initial: float


def relative_purity(rho_t, rho_tau) -> float:
    """tr(rho_t rho_tau) / tr(rho_tau^2)."""
    rho_t = np.asarray(rho_t, dtype=complex)
    rho_tau = np.asarray(rho_tau, dtype=complex)
    return float(np.trace(rho_t @ rho_tau).real / np.trace(rho_tau @ rho_tau).real)


def state_singular_values(p_t, chi_value: float, theta: float):
    """(lambda_+, lambda_-) of the dephased state; vectorizes over ``p_t``."""
    a = (np.asarray(p_t, dtype=float) * (1.0 - 4.0 * chi_value)) ** 2
    b = (1.0 - 2.0 * chi_value) ** 2
    # a + b - (a - b) cos 4theta == 2 (a sin^2 2theta + b cos^2 2theta), which cannot go negative
    r = 0.5 * np.sqrt(a * math.sin(2 * theta) ** 2 + b * math.cos(2 * theta) ** 2)
    if np.ndim(r) == 0:
        r = float(r)
    return 0.5 + r, 0.5 - r


def generator_singular_values(p_t, rate, chi_value: float, theta: float):
    """(mu_1, mu_2) of the dephasing generator acting on the state; both equal."""
    mu = 0.5 * np.abs(np.asarray(rate, dtype=float) * np.asarray(p_t, dtype=float) * (1.0 - 4.0 * chi_value)) * math.sin(
        2 * theta
    )
    if np.ndim(mu) == 0:
        mu = float(mu)
    return mu, mu


def time_average(g, window: EvolutionWindow, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """(1/delta_tau) * integral of g over [tau, tau + delta_tau]."""
    if not window.finite:
        raise ValueError("time_average needs a finite window")
    return integrate_1d(g, window.tau, window.t_end, tol).value / window.delta_tau


class _Trajectory:
    """p(t) and the explicit states along one problem, with a node cache.

    The two bound denominators are integrated over the same nodes; caching
    avoids recomputing p(t) (a quadrature itself when n != 1).
    """

    def __init__(self, problem: QsltProblem):
        self.problem = problem
        self.rho0 = initial_state(problem.chi, problem.theta)
        self._p = {}

    def p(self, t):
        t = np.asarray(t, dtype=float)
        out = np.empty(t.shape)
        for i, v in enumerate(t.ravel()):
            key = float(v)
            if key not in self._p:
                self._p[key] = decoherence_factor(self.problem.dephasing, key, self.problem.tol)
            out.flat[i] = self._p[key]
        return out

    def spectra(self, t):
        """Singular values of rho(t) and of the generator at times ``t`` (generic SVD)."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        rho = kraus_evolve(self.rho0, self.p(t))
        gen = dephasing_generator(rho, gamma_rate(self.problem.dephasing, t))
        lam = np.linalg.svd(rho, compute_uv=False)
        mu = np.linalg.svd(gen, compute_uv=False)
        return lam, mu


def _bound_terms(problem: QsltProblem):
    """Shared pieces of the open-system bounds.

    Returns ``(numerator, avg_sum_lambda_mu, avg_hs_norm, f_final, purity)``
    where numerator = |f(t) - 1| tr(rho(tau)^2).
    """
    w = problem.window
    if not w.finite:
        raise ValueError("open-system bounds need a finite tau")
    traj = _Trajectory(problem)
    p_tau = float(traj.p(w.tau))
    p_t = p_tau - decoherence_drop(problem.dephasing, w.tau, w.t_end, problem.tol)
    rho_tau = kraus_evolve(traj.rho0, p_tau)
    rho_t = kraus_evolve(traj.rho0, p_t)
    purity = float(np.trace(rho_tau @ rho_tau).real)
    # tr(rho_t rho_tau) - tr(rho_tau^2) as one compensated sum of entrywise products
    diff = rho_t - rho_tau
    numerator = abs(math.fsum((diff[i, j] * rho_tau[j, i]).real for i in range(2) for j in range(2)))
    f_final = relative_purity(rho_t, rho_tau)

    def sum_lambda_mu(t):
        lam, mu = traj.spectra(t)
        return np.sum(lam * mu, axis=-1)

    def hs_norm(t):
        _, mu = traj.spectra(t)
        return np.sqrt(np.sum(mu * mu, axis=-1))

    avg_lm = time_average(sum_lambda_mu, w, problem.tol)
    avg_hs = time_average(hs_norm, w, problem.tol)
    return numerator, avg_lm, avg_hs, f_final, purity


def _ratio(numerator: float, denominator: float, problem: QsltProblem) -> float:
    if denominator < _TINY:
        # no evolution at all, unless the coherences vanish at the critical chi
        return 0.0 if problem.critical else math.inf
    return numerator / denominator


def ml_bound_open(problem: QsltProblem) -> float:
    """Margolus-Levitin type bound for the nonunitary evolution."""
    num, avg_lm, _, _, _ = _bound_terms(problem)
    return _ratio(num, avg_lm, problem)


def mt_bound_open(problem: QsltProblem) -> float:
    """Mandelstam-Tamm type bound (Hilbert-Schmidt norm of the generator)."""
    num, _, avg_hs, _, _ = _bound_terms(problem)
    return _ratio(num, avg_hs, problem)


def ml_bound_closed_value(f_value: float, purity: float, averaged_energy: float) -> float:
    """|f - 1| tr(rho^2) / (2 E) for a time-averaged energy E > 0."""
    if not averaged_energy > 0:
        raise ValueError(f"averaged energy must be > 0, got {averaged_energy}")
    return abs(f_value - 1.0) * purity / (2.0 * averaged_energy)


def ml_bound_closed(problem: QsltProblem, averaged_energy: float) -> float:
    """Closed-system ML bound with the relative purity of the problem's window."""
    w = problem.window
    if not w.finite:
        raise ValueError("ml_bound_closed needs a finite tau")
    rho0 = initial_state(problem.chi, problem.theta)
    p_tau = decoherence_factor(problem.dephasing, w.tau, problem.tol)
    p_t = decoherence_factor(problem.dephasing, w.t_end, problem.tol)
    rho_tau = kraus_evolve(rho0, p_tau)
    rho_t = kraus_evolve(rho0, p_t)
    purity = float(np.trace(rho_tau @ rho_tau).real)
    return ml_bound_closed_value(relative_purity(rho_t, rho_tau), purity, averaged_energy)


def unified_qslt(problem: QsltProblem) -> QsltResult:
    """max(ML, MT) bound with the shared numerator computed once."""
    num, avg_lm, avg_hs, f_final, purity = _bound_terms(problem)
    ml = _ratio(num, avg_lm, problem)
    mt = _ratio(num, avg_hs, problem)
    active = "ML" if ml >= mt else "MT"
    return QsltResult(max(ml, mt), ml, mt, active, f_final, purity)


def relativistic_qslt(problem: QsltProblem) -> float:
    """Closed-form QSLT in terms of p_tau, p_t and the time-averaged |dp/dt|."""
    w = problem.window
    if not w.finite:
        raise ValueError("relativistic_qslt needs a finite tau; use markovian_qslt for tau = inf")
    spec = problem.dephasing
    p_tau = decoherence_factor(spec, w.tau, problem.tol)
    drop = decoherence_drop(spec, w.tau, w.t_end, problem.tol)
    numerator = abs((1.0 - 4.0 * problem.chi) * p_tau * drop) * math.sin(2 * problem.theta)

    def abs_pdot(t):
        return np.abs(gamma_rate(spec, t) * decoherence_factor(spec, t, problem.tol))

    return _ratio(numerator, time_average(abs_pdot, w, problem.tol), problem)


def markovian_qslt(p_tau: float, delta_tau: float, chi_value: float, theta: float) -> float:
    """p_tau * delta_tau * |1 - 4 chi| * sin(2 theta)."""
    if not 0 <= p_tau <= 1:
        raise ValueError(f"p_tau must lie in [0, 1], got {p_tau}")
    if not delta_tau > 0:
        raise ValueError(f"delta_tau must be > 0, got {delta_tau}")
    return p_tau * delta_tau * abs(1.0 - 4.0 * chi_value) * math.sin(2 * theta)


def markovian_qslt_for(problem: QsltProblem) -> float:
    """markovian_qslt with p_tau taken from the bath; tau = inf uses the limit p_inf."""
    p_tau = decoherence_factor(problem.dephasing, problem.window.tau, problem.tol)
    return markovian_qslt(p_tau, problem.window.delta_tau, problem.chi, problem.theta)
