# cython: language_level=3
"""Compiled versions of the kernels in ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, expm1, sqrt, fabs, isinf

from ._rules import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES

cnp.import_array()

cdef double _X[15]
cdef double _WK[15]
cdef double _WG[15]
for _i in range(15):
    _X[_i] = NODES[_i]
    _WK[_i] = KRONROD_WEIGHTS[_i]
    _WG[_i] = GAUSS_WEIGHTS[_i]


cdef inline double _boost_weight(double qx, double qr2, double alpha) noexcept nogil:
    cdef double q0 = sqrt(qr2 + qx * qx + 1.0)
    cdef double big = q0 + fabs(qx)
    cdef double small = (1.0 + qr2) / big
    cdef double minus, plus, ea, num
    if qx >= 0.0:
        minus = small
        plus = big
    else:
        minus = big
        plus = small
    if isinf(alpha):
        return 1.0 / (2.0 * (q0 + 1.0) * minus)
    ea = exp(-alpha)
    num = expm1(-alpha)
    num = 0.25 * num * num
    return num / ((q0 + 1.0) * (0.5 * minus + 0.5 * ea * ea * plus + ea))


def boost_weight(qx, qr2, double alpha):
    cdef double[::1] x = np.ascontiguousarray(np.ravel(qx), dtype=np.float64)
    cdef double[::1] r = np.ascontiguousarray(np.ravel(qr2), dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0], i
    out = np.empty(n)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _boost_weight(x[i], r[i], alpha)
    return out.reshape(np.shape(qx))


def chi_panel(double u0, double u1, double v0, double v1, double K, double W, double alpha):
    cdef double hu = 0.5 * (u1 - u0)
    cdef double hv = 0.5 * (v1 - v0)
    cdef double cu = 0.5 * (u0 + u1)
    cdef double cv = 0.5 * (v0 + v1)
    cdef double ku[15]
    cdef double gu[15]
    cdef double u, v, f, kk = 0.0, gk = 0.0, kg = 0.0, gg = 0.0
    cdef int i, j
    with nogil:
        for j in range(15):
            ku[j] = 0.0
            gu[j] = 0.0
        for i in range(15):
            u = cu + hu * _X[i]
            for j in range(15):
                v = cv + hv * _X[j]
                f = v * v * v * exp(-u * u - v * v) * _boost_weight(K + W * u, (W * v) * (W * v), alpha)
                ku[j] += _WK[i] * f
                gu[j] += _WG[i] * f
        for j in range(15):
            kk += ku[j] * _WK[j]
            gk += gu[j] * _WK[j]
            kg += ku[j] * _WG[j]
            gg += gu[j] * _WG[j]
    cdef double scale = hu * hv
    return kk * scale, gk * scale, kg * scale, gg * scale


def chi_mc_values(q, double alpha):
    cdef double[:, ::1] a = np.ascontiguousarray(q, dtype=np.float64)
    cdef Py_ssize_t n = a.shape[0], i
    out = np.empty(n)
    cdef double[::1] o = out
    cdef double qz2
    with nogil:
        for i in range(n):
            qz2 = a[i, 2] * a[i, 2]
            o[i] = qz2 * _boost_weight(a[i, 0], a[i, 1] * a[i, 1] + qz2, alpha)
    return out
