"""Numpy implementation of the hot kernels.

Used when the compiled extension is not built. Signatures and results match
``_ckernels`` to rounding.
"""
import numpy as np

from ._rules import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES


def boost_weight(qx, qr2, alpha):
    """sinh^2(a/2) / ((q0 + 1)(p0 + 1)) with p0 = q0 cosh(a) - qx sinh(a).

    Evaluated with everything scaled by exp(-a), so it is finite for any
    ``alpha`` including ``inf``.
    """
    qx = np.asarray(qx, dtype=float)
    qr2 = np.asarray(qr2, dtype=float)
    q0 = np.sqrt(qr2 + qx * qx + 1.0)
    # q0 - qx and q0 + qx without cancellation; their product is 1 + qr^2
    pos = qx >= 0.0
    big = q0 + np.abs(qx)
    small = (1.0 + qr2) / big
    minus = np.where(pos, small, big)
    if np.isinf(alpha):
        return 1.0 / (2.0 * (q0 + 1.0) * minus)
    plus = np.where(pos, big, small)
    ea = np.exp(-alpha)
    num = 0.25 * np.expm1(-alpha) ** 2
    return num / ((q0 + 1.0) * (0.5 * minus + 0.5 * ea * ea * plus + ea))


def chi_panel(u0, u1, v0, v1, K, W, alpha):
    """GK15 x GK15 product rule for the scaled chi integrand on one rectangle.

    The integrand is ``v^3 exp(-u^2 - v^2) * boost_weight(K + W u, (W v)^2)``.
    Returns ``(kk, gk, kg, gg)``: Kronrod/Gauss along u crossed with
    Kronrod/Gauss along v.
    """
    hu = 0.5 * (u1 - u0)
    hv = 0.5 * (v1 - v0)
    u = 0.5 * (u0 + u1) + hu * NODES
    v = 0.5 * (v0 + v1) + hv * NODES
    uu, vv = np.meshgrid(u, v, indexing="ij")
    vals = vv**3 * np.exp(-uu * uu - vv * vv) * boost_weight(K + W * uu, (W * vv) ** 2, alpha)
    ku = KRONROD_WEIGHTS @ vals
    gu = GAUSS_WEIGHTS @ vals
    scale = hu * hv
    return (
        float(ku @ KRONROD_WEIGHTS) * scale,
        float(gu @ KRONROD_WEIGHTS) * scale,
        float(ku @ GAUSS_WEIGHTS) * scale,
        float(gu @ GAUSS_WEIGHTS) * scale,
    )


def chi_mc_values(q, alpha):
    """Per-sample chi estimator ``qz^2 * boost_weight`` for an (N, 3) array."""
    q = np.asarray(q, dtype=float)
    qz2 = q[:, 2] ** 2
    return qz2 * boost_weight(q[:, 0], q[:, 1] ** 2 + qz2, alpha)
