"""Pure-dephasing channel of a qubit coupled to an Ohmic-like bosonic bath.

Units: hbar = c = 1, times in units of 1/omega_c when omega_c = 1.

Two time functions are kept apart here. ``gamma_accumulated(t)`` is the
exponent of the decoherence factor ``p_t = exp(-gamma_accumulated(t))``;
``gamma_rate(t)`` is its time derivative, the rate that enters the
dephasing generator. With that split ``dp/dt = -gamma_rate * p`` holds
identically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import DEFAULT_TOLERANCE, Tolerance, euler_gamma, integrate_1d

QubitState = np.ndarray  # 2x2 complex density matrix

SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)

SUPPORTED_OHMICITY = (1.0, 2.0)


@dataclass(frozen=True)
class DephasingSpec:
    """Bath parameters: coupling ``eta``, cutoff ``omega_c`` and Ohmicity ``n``."""

    eta: float = 1.0
    omega_c: float = 1.0
    n: float = 1.0

    def __post_init__(self):
        if not self.eta >= 0 or math.isinf(self.eta):
            raise ValueError(f"eta must be finite and >= 0, got {self.eta}")
        if not self.omega_c > 0 or math.isinf(self.omega_c):
            raise ValueError(f"omega_c must be finite and > 0, got {self.omega_c}")
        if not self.n > 0 or math.isinf(self.n):
            raise ValueError(f"Ohmicity n must be finite and > 0, got {self.n}")

    @property
    def supported(self) -> bool:
        """True for the validated regime 1 <= n <= 2 (Markovian at all times)."""
        lo, hi = SUPPORTED_OHMICITY
        return lo <= self.n <= hi

    @property
    def ohmic(self) -> bool:
        return self.n == 1.0


def spectral_density(spec: DephasingSpec, omega):
    """J(omega) = eta * omega^n / omega_c^(n-1) * exp(-omega / omega_c)."""
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0) or np.any(np.isnan(w)):
        raise ValueError("spectral_density is defined for omega >= 0 only")
    out = spec.eta * w**spec.n / spec.omega_c ** (spec.n - 1) * np.exp(-w / spec.omega_c)
    return float(out) if out.ndim == 0 else out


def gamma_rate(spec: DephasingSpec, t):
    """Instantaneous dephasing rate d(gamma_accumulated)/dt.

    For n = 1 this is the derivative of the closed form
    eta*ln(1 + (omega_c t)^2); otherwise the Ohmic-like kernel
    eta*omega_c*Gamma(n)*sin(n*arctan(omega_c t))*(1 + (omega_c t)^2)^(-n/2).
    """
    x = spec.omega_c * np.asarray(t, dtype=float)
    if spec.ohmic:
        out = 2.0 * spec.eta * spec.omega_c * x / (1.0 + x * x)
    else:
        out = (
            spec.eta
            * spec.omega_c
            * euler_gamma(spec.n)
            * np.sin(spec.n * np.arctan(x))
            * (1.0 + x * x) ** (-0.5 * spec.n)
        )
    return float(out) if out.ndim == 0 else out


def gamma_infinity(spec: DephasingSpec, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """Limit of gamma_accumulated as t -> inf; +inf for n <= 1."""
    if spec.n <= 1.0:
        return math.inf
    if spec.eta == 0:
        return 0.0
    return integrate_1d(lambda s: gamma_rate(spec, s), 0.0, math.inf, tol).value


def _gamma_scalar(spec: DephasingSpec, t: float, tol: Tolerance) -> float:
    if math.isnan(t) or t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    if math.isinf(t):
        return gamma_infinity(spec, tol)
    if spec.ohmic:
        x = spec.omega_c * t
        return spec.eta * math.log1p(x * x)
    if t == 0 or spec.eta == 0:
        return 0.0
    return integrate_1d(lambda s: gamma_rate(spec, s), 0.0, t, tol).value


def gamma_accumulated(spec: DephasingSpec, t, tol: Tolerance = DEFAULT_TOLERANCE):
    """Accumulated dephasing exponent gamma(t); accepts scalars or arrays, t may be inf."""
    if np.ndim(t) == 0:
        return _gamma_scalar(spec, float(t), tol)
    arr = np.asarray(t, dtype=float)
    return np.array([_gamma_scalar(spec, float(v), tol) for v in arr.ravel()]).reshape(arr.shape)


def decoherence_factor(spec: DephasingSpec, t, tol: Tolerance = DEFAULT_TOLERANCE):
    """p_t = exp(-gamma_accumulated(t)), the off-diagonal damping factor."""
    return np.exp(-gamma_accumulated(spec, t, tol)) if np.ndim(t) else math.exp(-gamma_accumulated(spec, t, tol))


def decoherence_drop(spec: DephasingSpec, t0: float, t1: float, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """p(t0) - p(t1) for t0 <= t1, without subtracting two nearly equal factors.

    The exponent increment is integrated over [t0, t1] directly, so short or
    late windows keep full relative accuracy.
    """
    if math.isnan(t0) or math.isnan(t1) or not 0 <= t0 <= t1:
        raise ValueError(f"need 0 <= t0 <= t1, got t0={t0}, t1={t1}")
    p0 = decoherence_factor(spec, t0, tol)
    if math.isinf(t1):
        return p0 - decoherence_factor(spec, t1, tol)
    if t0 == t1 or spec.eta == 0:
        return 0.0
    if spec.ohmic:
        x0, x1 = spec.omega_c * t0, spec.omega_c * t1
        # ln((1 + x1^2) / (1 + x0^2)) with the ratio written as 1 + small
        increment = spec.eta * math.log1p((x1 - x0) * (x1 + x0) / (1.0 + x0 * x0))
    else:
        increment = integrate_1d(lambda s: gamma_rate(spec, s), t0, t1, tol).value
    return -p0 * math.expm1(-increment)


def validate_state(rho, atol: float = 1e-12) -> QubitState:
    """Check the density-matrix invariants and return ``rho`` as a complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError(f"qubit state must be 2x2, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise ValueError("qubit state has non-finite entries")
    if np.max(np.abs(rho - rho.conj().T)) > atol:
        raise ValueError("qubit state is not Hermitian")
    if abs(np.trace(rho) - 1.0) > atol:
        raise ValueError(f"qubit state trace is {np.trace(rho).real}, not 1")
    if np.min(np.linalg.eigvalsh(rho)) < -atol:
        raise ValueError("qubit state is not positive semidefinite")
    return rho


def kraus_evolve(rho, p_t):
    """Apply the dephasing channel with decoherence factor ``p_t``.

    Equivalent to the Kraus sum with E1 = diag(1, p_t), E2 = diag(0, sqrt(1 - p_t^2)),
    applied entrywise: populations are copied bit-for-bit and coherences are
    scaled by ``p_t``. ``p_t`` may be an array, giving a stack of states.
    """
    p = np.asarray(p_t, dtype=float)
    if np.any(np.isnan(p)) or np.any(p < 0) or np.any(p > 1):
        raise ValueError("decoherence factor must lie in [0, 1]")
    rho = np.asarray(rho, dtype=complex)
    out = np.empty(np.broadcast_shapes(p.shape, rho.shape[:-2]) + (2, 2), dtype=complex)
    out[..., 0, 0] = rho[..., 0, 0]
    out[..., 1, 1] = rho[..., 1, 1]
    out[..., 0, 1] = p * rho[..., 0, 1]
    out[..., 1, 0] = p * rho[..., 1, 0]
    return out


def dephasing_generator(rho, rate):
    """(rate / 2) * (sigma_z rho sigma_z - rho); works on stacks of states."""
    rho = np.asarray(rho, dtype=complex)
    r = np.asarray(rate, dtype=float)[..., None, None]
    return 0.5 * r * (SIGMA_Z @ rho @ SIGMA_Z - rho)


def is_markovian_window(spec: DephasingSpec, window, points: int = 2001) -> bool:
    """True when the dephasing rate stays non-negative on a dense grid of the window."""
    t0, t1 = window
    if not 0 <= t0 < t1:
        raise ValueError(f"window must satisfy 0 <= t_start < t_end, got {window}")
    if math.isinf(t1):
        # rate tends to eta*omega_c*Gamma(n)*sin(n*pi/2)*x^-n; sample in arctan
        grid = np.tan(np.linspace(math.atan(t0 * spec.omega_c), 0.5 * math.pi, points)[:-1]) / spec.omega_c
    else:
        grid = np.linspace(t0, t1, points)
    return bool(np.all(gamma_rate(spec, grid) >= -1e-12))
