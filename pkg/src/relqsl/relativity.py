"""Spin of a boosted Gaussian wavepacket: Wigner amplitudes and the chi factor.

Momenta are in units of the particle mass (K = k/m, W = w/m, m = 1). The
wavepacket moves along +x with mean momentum K; the detector boost is along
x with rapidity magnitude ``alpha``. The signed rapidity used in the Wigner
rotation is ``-alpha``, so the boosted energy is

    p0 = q0 cosh(alpha) - qx sinh(alpha).

chi summarises how much the boost entangles spin with momentum: the reduced
spin state has its coherences scaled by (1 - 4 chi) and its polarization by
(1 - 2 chi).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import chi_panel
from .dephasing import QubitState
from .numerics import DEFAULT_TOLERANCE, Tolerance, adaptive_2d, mc_integrate_gaussian3d

THETA_MAX = math.pi / 4
CHI_MAX = 0.5
# Gaussian envelope cut: exp(-10^2) is far below double precision relative to the peak
TRUNCATION = 10.0
_LOG_DOMAIN_ALPHA = 30.0


@dataclass(frozen=True)
class BoostedPacketSpec:
    theta: float = math.pi / 4
    K: float = 1.0
    W: float = 4.0
    alpha: float = 0.0

    def __post_init__(self):
        if not 0 <= self.theta <= THETA_MAX + 1e-12:
            raise ValueError(f"theta must lie in [0, pi/4], got {self.theta}")
        if not self.K >= 0 or math.isinf(self.K):
            raise ValueError(f"K must be finite and >= 0, got {self.K}")
        if not self.W > 0 or math.isinf(self.W):
            raise ValueError(f"W must be finite and > 0, got {self.W}")
        if not self.alpha >= 0:
            raise ValueError(f"alpha is a rapidity magnitude and must be >= 0, got {self.alpha}")


@dataclass(frozen=True)
class ChiResult:
    value: float
    error_estimate: float
    method: str  # quadrature-2d | mc-oracle | analytic-zero | infinite-limit


@dataclass(frozen=True)
class WignerAmplitudes:
    a1: complex | np.ndarray
    a2: complex | np.ndarray
    q: np.ndarray
    q0: float | np.ndarray
    p0: float | np.ndarray


def gaussian_amplitude(q, K: float, W: float):
    """Normalized momentum-space Gaussian centred on (K, 0, 0), unit mass."""
    q = np.asarray(q, dtype=float)
    d2 = (q[..., 0] - K) ** 2 + q[..., 1] ** 2 + q[..., 2] ** 2
    return math.pi**-0.75 * W**-1.5 * np.exp(-d2 / (2.0 * W * W))


def _spinor_factors(q, alpha: float):
    """Wigner-rotation pieces without the Gaussian envelope.

    Returns ``(k, b1, b2, q0, p0)`` with a1 = k f b1 and a2 = k f b2.
    """
    q = np.asarray(q, dtype=float)
    qx, qy, qz = q[..., 0], q[..., 1], q[..., 2]
    q0 = np.sqrt(qx * qx + qy * qy + qz * qz + 1.0)
    a = -alpha
    c, s = math.cosh(0.5 * a), math.sinh(0.5 * a)
    p0 = q0 * math.cosh(a) + qx * math.sinh(a)
    k = np.sqrt((q0 / p0) / ((q0 + 1.0) * (p0 + 1.0)))
    b1 = c * (q0 + 1.0) + s * (qx + 1j * qy)
    b2 = s * qz
    return k, b1, b2, q0, p0


def wigner_amplitudes(q, spec: BoostedPacketSpec) -> WignerAmplitudes:
    """Spin amplitudes (a1, a2) of the boosted packet at momentum ``q``.

    ``q`` may be a single 3-vector or an (N, 3) array. Requires finite alpha.
    """
    if math.isinf(spec.alpha):
        raise ValueError("wigner_amplitudes needs a finite rapidity")
    q = np.asarray(q, dtype=float)
    k, b1, b2, q0, p0 = _spinor_factors(q, spec.alpha)
    kf = k * gaussian_amplitude(q, spec.K, spec.W)
    a1, a2 = kf * b1, kf * b2 + 0j
    if q.ndim == 1:
        return WignerAmplitudes(complex(a1), complex(a2), q, float(q0), float(p0))
    return WignerAmplitudes(a1, a2, q, q0, p0)


def _chi_integral(K: float, W: float, alpha: float, tol: Tolerance):
    # substitution u = (Qx - K)/W, v = Qr/W turns pi^-1/2 W^-3 dQx dQr Qr^3 into pi^-1/2 W^2 du dv v^3
    pre = W * W / math.sqrt(math.pi)
    inner_tol = Tolerance(tol.rel, tol.abs / pre)
    res = adaptive_2d(
        lambda u0, u1, v0, v1: chi_panel(u0, u1, v0, v1, K, W, alpha),
        (-TRUNCATION, TRUNCATION),
        (0.0, TRUNCATION),
        inner_tol,
        initial=(8, 4),
    )
    return pre * res.value, pre * res.error_estimate


def chi(spec: BoostedPacketSpec, tol: Tolerance = DEFAULT_TOLERANCE) -> ChiResult:
    """Relativistic spin-degradation factor by adaptive 2-D quadrature.

    The azimuth about the boost axis is integrated analytically, leaving
    (Qx, Qr) over [K - 10W, K + 10W] x [0, 10W].
    """
    if spec.alpha == 0:
        return ChiResult(0.0, 0.0, "analytic-zero")
    if math.isinf(spec.alpha):
        return chi_infinite(spec.K, spec.W, tol)
    value, err = _chi_integral(spec.K, spec.W, spec.alpha, tol)
    return ChiResult(value, err, "quadrature-2d")


def chi_infinite(K: float, W: float, tol: Tolerance = DEFAULT_TOLERANCE) -> ChiResult:
    """Infinite-rapidity limit: sinh^2(a/2)/(P0 + 1) -> 1/(2 (Q0 - Qx))."""
    if not K >= 0 or not W > 0:
        raise ValueError(f"need K >= 0 and W > 0, got K={K}, W={W}")
    value, err = _chi_integral(K, W, math.inf, tol)
    return ChiResult(value, err, "infinite-limit")


def _oracle_weight(q, alpha: float):
    """Non-Gaussian factor |a2|^2 p0 / (q0 |f|^2), built from the spinor amplitudes."""
    qx = q[:, 0]
    qr2 = q[:, 1] ** 2 + q[:, 2] ** 2
    if alpha <= _LOG_DOMAIN_ALPHA:
        k, _, b2, q0, p0 = _spinor_factors(q, alpha)
        return (k * k) * (b2 * b2) * p0 / q0
    q0 = np.sqrt(qx * qx + qr2 + 1.0)
    # q0 - qx for the x-moving packet, written as (1 + qr^2)/(q0 + qx) where qx > 0
    minus = np.where(qx > 0, (1.0 + qr2) / (q0 + np.abs(qx)), q0 - qx)
    if math.isinf(alpha):
        return q[:, 2] ** 2 / (2.0 * (q0 + 1.0) * minus)
    plus = (1.0 + qr2) / minus
    log_s2 = alpha - 2.0 * math.log(2.0) + 2.0 * math.log1p(-math.exp(-alpha))
    log_p0p1 = alpha + np.log(0.5 * minus + 0.5 * math.exp(-2 * alpha) * plus + math.exp(-alpha))
    return q[:, 2] ** 2 * np.exp(log_s2 - log_p0p1) / (q0 + 1.0)


def chi_mc_oracle(spec: BoostedPacketSpec, samples: int = 1_000_000, seed: int = 0) -> ChiResult:
    """Monte-Carlo estimate of chi from the boosted spinor amplitudes.

    Samples q from |f(q)|^2 (mean (K, 0, 0), per-axis sigma W / sqrt 2) and
    averages |a2(q)|^2 p0 / (q0 |f(q)|^2). Deterministic for a fixed seed.
    """
    res = mc_integrate_gaussian3d(
        lambda q: _oracle_weight(q, spec.alpha),
        (spec.K, 0.0, 0.0),
        spec.W / math.sqrt(2.0),
        samples,
        seed,
    )
    return ChiResult(res.value, res.error_estimate, "mc-oracle")


def initial_state(chi_value: float, theta: float) -> QubitState:
    """Reduced spin state of the boosted packet."""
    if not -1e-10 <= chi_value <= CHI_MAX:
        raise ValueError(f"chi must lie in [0, {CHI_MAX}], got {chi_value}")
    if not 0 <= theta <= THETA_MAX + 1e-12:
        raise ValueError(f"theta must lie in [0, pi/4], got {theta}")
    chi_value = max(chi_value, 0.0)
    pol = (1.0 - 2.0 * chi_value) * math.cos(2.0 * theta)
    coh = (1.0 - 4.0 * chi_value) * math.sin(2.0 * theta)
    return 0.5 * np.array([[1.0 + pol, coh], [coh, 1.0 - pol]], dtype=complex)
