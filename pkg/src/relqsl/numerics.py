"""Quadrature, Monte-Carlo integration and special functions.

Integrands passed to :func:`integrate_1d` and :func:`integrate_2d` are called
with numpy arrays of abscissae and must return an array of the same shape
(or a scalar, which is broadcast).
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._kernels._rules import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES

MAX_EVALUATIONS = 1_000_000
_MC_CHUNK = 1 << 16


@dataclass(frozen=True)
class Tolerance:
    rel: float = 1e-8
    abs: float = 1e-12

    def __post_init__(self):
        if not self.rel > 0:
            raise ValueError(f"relative tolerance must be > 0, got {self.rel}")
        if not self.abs >= 0:
            raise ValueError(f"absolute tolerance must be >= 0, got {self.abs}")

    def target(self, value: float) -> float:
        return max(self.abs, self.rel * abs(value))


DEFAULT_TOLERANCE = Tolerance()


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int


class ConvergenceError(ArithmeticError):
    """Raised when an integral misses its tolerance within the evaluation budget.

    The best available estimate is kept on ``result``.
    """

    def __init__(self, message: str, result: QuadratureResult):
        super().__init__(f"{message} (value={result.value!r}, error={result.error_estimate!r})")
        self.result = result


def euler_gamma(n: float) -> float:
    """Gamma function for real ``n > 0``."""
    if not n > 0:
        raise ValueError(f"euler_gamma needs n > 0, got {n}")
    return math.gamma(n)


def _call(f, *xs):
    y = np.asarray(f(*xs), dtype=float)
    if y.shape != xs[0].shape:
        y = np.broadcast_to(y, xs[0].shape)
    return y


def _map_interval(f, a: float, b: float):
    """Return ``(g, lo, hi)`` with the integral of g over [lo, hi] equal to that of f over [a, b]."""
    if math.isnan(a) or math.isnan(b):
        raise ValueError("integration limits must not be NaN")
    if a > b:
        raise ValueError(f"need a <= b, got a={a}, b={b}")
    a_inf, b_inf = math.isinf(a), math.isinf(b)
    if not a_inf and not b_inf:
        return (lambda x: _call(f, x)), a, b
    if a_inf and b_inf:
        if a > 0 or b < 0:
            raise ValueError("empty infinite interval")

        def g(t):
            d = 1.0 - t * t
            return _call(f, t / d) * (1.0 + t * t) / (d * d)

        return g, -1.0, 1.0
    if b_inf:
        if a == math.inf:
            raise ValueError("lower limit cannot be +inf")

        def g(t):
            d = 1.0 - t
            return _call(f, a + t / d) / (d * d)

        return g, 0.0, 1.0
    if b == -math.inf:
        raise ValueError("upper limit cannot be -inf")

    def g(s):
        d = 1.0 - s
        return _call(f, b - s / d) / (d * d)

    return g, 0.0, 1.0


def _gk15(g, lo: float, hi: float):
    h = 0.5 * (hi - lo)
    y = g(0.5 * (lo + hi) + h * NODES)
    k = float(KRONROD_WEIGHTS @ y) * h
    gs = float(GAUSS_WEIGHTS @ y) * h
    return k, abs(k - gs)


def integrate_1d(
    f: Callable,
    a: float,
    b: float,
    tol: Tolerance = DEFAULT_TOLERANCE,
    max_evaluations: int = MAX_EVALUATIONS,
) -> QuadratureResult:
    """Globally adaptive Gauss-Kronrod (7/15) quadrature of ``f`` over [a, b].

    Infinite limits are handled by a rational change of variables. Raises
    :class:`ConvergenceError` when the budget is exhausted.
    """
    g, lo, hi = _map_interval(f, a, b)
    value, err = _gk15(g, lo, hi)
    evals = 15
    heap = [(-err, lo, hi, value)]
    total, total_err = value, err
    frozen = []  # panels too narrow to bisect
    while total_err > tol.target(total):
        if not heap:
            break
        if evals + 30 > max_evaluations:
            res = _finish_1d(heap, frozen, evals)
            raise ConvergenceError("integrate_1d: evaluation budget exhausted", res)
        neg_err, p_lo, p_hi, p_val = heapq.heappop(heap)
        mid = 0.5 * (p_lo + p_hi)
        if not p_lo < mid < p_hi:
            frozen.append((neg_err, p_lo, p_hi, p_val))
            continue
        v1, e1 = _gk15(g, p_lo, mid)
        v2, e2 = _gk15(g, mid, p_hi)
        evals += 30
        heapq.heappush(heap, (-e1, p_lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, p_hi, v2))
        total += v1 + v2 - p_val
        total_err = max(0.0, total_err + e1 + e2 + neg_err)
    res = _finish_1d(heap, frozen, evals)
    if res.error_estimate > tol.target(res.value) and not heap:
        raise ConvergenceError("integrate_1d: roundoff limits the attainable accuracy", res)
    return res


def _finish_1d(heap, frozen, evals):
    panels = heap + frozen
    value = math.fsum(p[3] for p in panels)
    err = math.fsum(-p[0] for p in panels)
    return QuadratureResult(value, err, evals)


# --- two dimensions -----------------------------------------------------------


def _tensor_panel(f):
    """Build a rectangle evaluator returning (kk, gk, kg, gg) for integrand f(x, y)."""

    def panel(x0, x1, y0, y1):
        hx, hy = 0.5 * (x1 - x0), 0.5 * (y1 - y0)
        xs = 0.5 * (x0 + x1) + hx * NODES
        ys = 0.5 * (y0 + y1) + hy * NODES
        xx, yy = np.meshgrid(xs, ys, indexing="ij")
        vals = f(xx, yy)
        kx = KRONROD_WEIGHTS @ vals
        gx = GAUSS_WEIGHTS @ vals
        s = hx * hy
        return (
            float(kx @ KRONROD_WEIGHTS) * s,
            float(gx @ KRONROD_WEIGHTS) * s,
            float(kx @ GAUSS_WEIGHTS) * s,
            float(gx @ GAUSS_WEIGHTS) * s,
        )

    return panel


def adaptive_2d(
    panel: Callable,
    x_range: tuple[float, float],
    y_range: tuple[float, float],
    tol: Tolerance = DEFAULT_TOLERANCE,
    max_evaluations: int = MAX_EVALUATIONS,
    initial: tuple[int, int] = (1, 1),
) -> QuadratureResult:
    """Globally adaptive cubature driver over a finite rectangle.

    ``panel(x0, x1, y0, y1)`` must return the product-rule estimates
    ``(kk, gk, kg, gg)`` (Kronrod or Gauss along x, then along y). The per-axis
    error is the change from dropping to the Gauss rule on that axis; the
    worst rectangle is bisected along its worse axis.
    """
    xs = np.linspace(x_range[0], x_range[1], initial[0] + 1)
    ys = np.linspace(y_range[0], y_range[1], initial[1] + 1)
    heap = []
    evals = 0
    counter = 0  # tie-breaker keeps heap ordering deterministic
    for i in range(initial[0]):
        for j in range(initial[1]):
            rect = (float(xs[i]), float(xs[i + 1]), float(ys[j]), float(ys[j + 1]))
            heap.append(_rect_entry(panel, rect, counter))
            counter += 1
            evals += 225
    heapq.heapify(heap)
    total = sum(e[3] for e in heap)
    total_err = sum(-e[0] for e in heap)
    frozen = []
    while total_err > tol.target(total):
        if not heap:
            break
        if evals + 450 > max_evaluations:
            raise ConvergenceError("integrate_2d: evaluation budget exhausted", _finish_2d(heap, frozen, evals))
        entry = heapq.heappop(heap)
        neg_err, _, rect, val, split_x = entry
        x0, x1, y0, y1 = rect
        if split_x:
            mid = 0.5 * (x0 + x1)
            ok = x0 < mid < x1
            halves = ((x0, mid, y0, y1), (mid, x1, y0, y1))
        else:
            mid = 0.5 * (y0 + y1)
            ok = y0 < mid < y1
            halves = ((x0, x1, y0, mid), (x0, x1, mid, y1))
        if not ok:
            frozen.append(entry)
            continue
        for r in halves:
            e = _rect_entry(panel, r, counter)
            counter += 1
            heapq.heappush(heap, e)
            total += e[3]
            total_err += -e[0]
        evals += 450
        total -= val
        total_err = max(0.0, total_err + neg_err)
    res = _finish_2d(heap, frozen, evals)
    if res.error_estimate > tol.target(res.value) and not heap:
        raise ConvergenceError("integrate_2d: roundoff limits the attainable accuracy", res)
    return res


def _rect_entry(panel, rect, counter):
    kk, gk, kg, _ = panel(*rect)
    ex, ey = abs(kk - gk), abs(kk - kg)
    return (-(ex + ey), counter, rect, kk, ex >= ey)


def _finish_2d(heap, frozen, evals):
    panels = heap + frozen
    return QuadratureResult(
        math.fsum(p[3] for p in panels), math.fsum(-p[0] for p in panels), evals
    )


def _map_axis(a: float, b: float):
    """Return ``(phi, jac, lo, hi)`` mapping a (possibly infinite) interval to a finite one."""
    if math.isnan(a) or math.isnan(b) or a > b:
        raise ValueError(f"invalid axis range ({a}, {b})")
    if not math.isinf(a) and not math.isinf(b):
        return (lambda t: t), (lambda t: 1.0), a, b
    if math.isinf(a) and math.isinf(b):
        return (lambda t: t / (1 - t * t)), (lambda t: (1 + t * t) / (1 - t * t) ** 2), -1.0, 1.0
    if math.isinf(b):
        return (lambda t: a + t / (1 - t)), (lambda t: 1.0 / (1 - t) ** 2), 0.0, 1.0
    return (lambda s: b - s / (1 - s)), (lambda s: 1.0 / (1 - s) ** 2), 0.0, 1.0


def integrate_2d(
    f: Callable,
    domain: tuple[tuple[float, float], tuple[float, float]],
    tol: Tolerance = DEFAULT_TOLERANCE,
    max_evaluations: int = MAX_EVALUATIONS,
) -> QuadratureResult:
    """Adaptive cubature of ``f(x, y)`` over a rectangle; either axis may be (semi-)infinite."""
    (ax, bx), (ay, by) = domain
    px, jx, lx, hx = _map_axis(ax, bx)
    py, jy, ly, hy = _map_axis(ay, by)

    def g(t, s):
        return _call(f, px(t), py(s)) * jx(t) * jy(s)

    return adaptive_2d(_tensor_panel(g), (lx, hx), (ly, hy), tol, max_evaluations, initial=(2, 2))


# --- Monte Carlo --------------------------------------------------------------


def mc_integrate_gaussian3d(
    g: Callable,
    mean,
    sigma: float,
    samples: int,
    seed: int,
) -> QuadratureResult:
    """Estimate E[g(q)] for q ~ N(mean, sigma^2 I_3).

    ``g`` receives an ``(m, 3)`` array and returns ``m`` values. Draws come
    from a Philox counter-based generator seeded by ``seed``; a given
    ``(seed, samples)`` pair always gives the same result. The error
    estimate is the sample standard error of the mean.
    """
    if samples < 1000:
        raise ValueError(f"need at least 1000 samples, got {samples}")
    if not sigma > 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    mean = np.asarray(mean, dtype=float).reshape(3)
    rng = np.random.Generator(np.random.Philox(seed))
    n_tot, mu, m2 = 0, 0.0, 0.0
    remaining = samples
    while remaining:
        m = min(_MC_CHUNK, remaining)
        q = mean + sigma * rng.standard_normal((m, 3))
        y = np.asarray(g(q), dtype=float)
        if y.shape != (m,):
            y = np.broadcast_to(y, (m,))
        c_mu = float(np.mean(y))
        c_m2 = float(np.sum((y - c_mu) ** 2))
        # Chan et al. pairwise update of mean and sum of squared deviations
        n_new = n_tot + m
        delta = c_mu - mu
        mu += delta * m / n_new
        m2 += c_m2 + delta * delta * n_tot * m / n_new
        n_tot = n_new
        remaining -= m
    se = math.sqrt(m2 / (n_tot - 1) / n_tot)
    return QuadratureResult(mu, se, n_tot)
