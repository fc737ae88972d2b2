import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as sp_integrate
from scipy import special

from relqsl.dephasing import DephasingSpec, gamma_rate
from relqsl.numerics import (
    ConvergenceError,
    Tolerance,
    adaptive_2d,
    euler_gamma,
    integrate_1d,
    integrate_2d,
    mc_integrate_gaussian3d,
)
from relqsl._kernels._rules import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES


def test_rule_constants_exactness():
    # Kronrod 15 is exact through degree 22 (23 for odd), Gauss 7 through degree 13
    for k in range(0, 24):
        exact = 0.0 if k % 2 else 2.0 / (k + 1)
        assert math.isclose(float(KRONROD_WEIGHTS @ NODES**k), exact, abs_tol=1e-15)
    for k in range(0, 14):
        exact = 0.0 if k % 2 else 2.0 / (k + 1)
        assert math.isclose(float(GAUSS_WEIGHTS @ NODES**k), exact, abs_tol=1e-15)
    assert not math.isclose(float(GAUSS_WEIGHTS @ NODES**14), 2.0 / 15, abs_tol=1e-6)


def test_integrate_1d_examples():
    assert integrate_1d(lambda x: 1.0, 0.0, 1.0).value == pytest.approx(1.0, abs=1e-14)
    assert integrate_1d(np.sin, 0.0, math.pi).value == pytest.approx(2.0, abs=1e-12)
    ohmic = DephasingSpec(1.0, 1.0, 1.0)
    res = integrate_1d(lambda t: gamma_rate(ohmic, t), 0.0, 1.0)
    assert res.value == pytest.approx(math.log(2.0), abs=1e-12)
    assert res.error_estimate <= 1e-8 * res.value


def test_integrate_1d_infinite_limits_against_scipy():
    for f, a, b in [
        (lambda x: np.exp(-x * x), -math.inf, math.inf),
        (lambda x: 1.0 / (1.0 + x * x), 0.0, math.inf),
        (lambda x: np.exp(x), -math.inf, 0.0),
        (lambda x: 1.0 / (1 + x) ** 3, 2.0, math.inf),
    ]:
        ref = sp_integrate.quad(f, a, b, epsabs=1e-13, epsrel=1e-12)[0]
        assert integrate_1d(f, a, b).value == pytest.approx(ref, rel=1e-9, abs=1e-12)


def test_integrate_1d_rejects_reversed_or_nan_limits():
    with pytest.raises(ValueError):
        integrate_1d(np.cos, 1.0, 0.0)
    with pytest.raises(ValueError):
        integrate_1d(np.cos, math.nan, 1.0)


def test_integrate_1d_budget_exhaustion_raises_with_estimate():
    with pytest.raises(ConvergenceError) as info:
        integrate_1d(lambda x: np.sin(1.0 / x), 1e-9, 1.0, Tolerance(1e-14, 0.0), max_evaluations=300)
    assert math.isfinite(info.value.result.value)
    assert info.value.result.evaluations <= 300


@settings(max_examples=40, deadline=None)
@given(
    c=st.floats(-5, 5),
    d=st.floats(-5, 5),
    lo=st.floats(-3, 0),
    mid=st.floats(0.01, 2),
    span=st.floats(0.01, 2),
)
def test_integrate_1d_linearity_and_additivity(c, d, lo, mid, span):
    f = np.exp
    g = np.cos
    a, m, b = lo, lo + mid, lo + mid + span
    lhs = integrate_1d(lambda x: c * f(x) + d * g(x), a, b).value
    rhs = c * integrate_1d(f, a, b).value + d * integrate_1d(g, a, b).value
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-11)
    whole = integrate_1d(f, a, b).value
    parts = integrate_1d(f, a, m).value + integrate_1d(f, m, b).value
    assert whole == pytest.approx(parts, rel=1e-12)


def test_integrate_2d_examples():
    assert integrate_2d(lambda x, y: 1.0, ((0, 1), (0, 1))).value == pytest.approx(1.0, abs=1e-14)
    res = integrate_2d(lambda x, y: np.exp(-x * x - y * y), ((0, math.inf), (0, math.inf)))
    assert res.value == pytest.approx(math.pi / 4, rel=1e-9)
    assert integrate_2d(lambda x, y: x * y, ((0, 1), (0, 1))).value == pytest.approx(0.25, abs=1e-14)


def test_integrate_2d_against_scipy_dblquad():
    f = lambda x, y: np.exp(-x) * np.sin(3 * y) ** 2 / (1 + x * y)  # noqa: E731
    ref = sp_integrate.dblquad(lambda y, x: f(x, y), 0, 2, 0, 1, epsabs=1e-13, epsrel=1e-12)[0]
    assert integrate_2d(f, ((0, 2), (0, 1))).value == pytest.approx(ref, rel=1e-9)


def test_adaptive_2d_budget_raises():
    def panel(x0, x1, y0, y1):
        # estimates never agree, so refinement never converges
        return 1.0, 0.0, 0.0, 0.0

    with pytest.raises(ConvergenceError):
        adaptive_2d(panel, (0, 1), (0, 1), max_evaluations=5000)


def test_euler_gamma_examples_and_recurrence():
    assert euler_gamma(1) == 1.0
    assert euler_gamma(4) == pytest.approx(6.0, rel=1e-15)
    assert euler_gamma(1.5) == pytest.approx(0.8862269255, abs=1e-10)
    for x in np.linspace(0.1, 20, 57):
        assert euler_gamma(x + 1) == pytest.approx(x * euler_gamma(x), rel=1e-13)
        assert euler_gamma(x) == pytest.approx(special.gamma(x), rel=1e-13)
    for bad in (0.0, -1.0, math.nan):
        with pytest.raises(ValueError):
            euler_gamma(bad)


def test_mc_examples():
    res = mc_integrate_gaussian3d(lambda q: np.ones(len(q)), (0, 0, 0), 1.0, 10_000, 1)
    assert res.value == 1.0 and res.error_estimate == 0.0
    res = mc_integrate_gaussian3d(lambda q: (q[:, 0] - 2.0) ** 2, (2, 0, 0), 1.0, 200_000, 7)
    assert abs(res.value - 1.0) < 3 * res.error_estimate


def test_mc_determinism_and_scaling():
    g = lambda q: q[:, 1] ** 2 + np.sin(q[:, 2])  # noqa: E731
    a = mc_integrate_gaussian3d(g, (1, 2, 3), 0.7, 100_000, 11)
    b = mc_integrate_gaussian3d(g, (1, 2, 3), 0.7, 100_000, 11)
    assert a == b
    c = mc_integrate_gaussian3d(g, (1, 2, 3), 0.7, 400_000, 12)
    assert c.error_estimate / a.error_estimate == pytest.approx(0.5, rel=0.05)


def test_mc_rejects_bad_input():
    with pytest.raises(ValueError):
        mc_integrate_gaussian3d(lambda q: q[:, 0], (0, 0, 0), 1.0, 10, 0)
    with pytest.raises(ValueError):
        mc_integrate_gaussian3d(lambda q: q[:, 0], (0, 0, 0), 0.0, 10_000, 0)


def test_tolerance_validation():
    with pytest.raises(ValueError):
        Tolerance(0.0, 1e-12)
    with pytest.raises(ValueError):
        Tolerance(1e-8, -1.0)
    assert Tolerance(1e-8, 1e-12).target(1e6) == pytest.approx(1e-2)
