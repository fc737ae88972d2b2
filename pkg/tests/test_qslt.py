import math

import numpy as np
import pytest

from relqsl.dephasing import DephasingSpec, decoherence_factor, dephasing_generator, gamma_rate, kraus_evolve
from relqsl.qslt import (
    EvolutionWindow,
    QsltProblem,
    generator_singular_values,
    markovian_qslt,
    markovian_qslt_for,
    ml_bound_closed,
    ml_bound_closed_value,
    ml_bound_open,
    mt_bound_open,
    relative_purity,
    relativistic_qslt,
    state_singular_values,
    time_average,
    unified_qslt,
)
from relqsl.relativity import BoostedPacketSpec, initial_state

OHMIC = DephasingSpec(1.0, 1.0, 1.0)
SUPER = DephasingSpec(1.0, 1.0, 2.0)
Q = math.pi / 4


def problem(chi=0.0, theta=Q, tau=0.0, dt=1.0, bath=OHMIC):
    return QsltProblem(bath, EvolutionWindow(tau, dt), chi, theta)


def test_relative_purity_examples():
    rho = initial_state(0.1, 0.5)
    assert relative_purity(rho, rho) == pytest.approx(1.0, rel=1e-15)
    plus = 0.5 * np.ones((2, 2))
    p = 0.37
    assert relative_purity(0.5 * np.array([[1, p], [p, 1]]), plus) == pytest.approx((1 + p) / 2)
    assert relative_purity(rho, 0.5 * np.eye(2)) == pytest.approx(1.0)


def test_state_singular_values_examples():
    for th in (0.0, 0.3, Q):
        assert state_singular_values(1.0, 0.0, th) == pytest.approx((1.0, 0.0), abs=1e-15)
    lp, lm = state_singular_values(0.7, 0.25, math.pi / 8)
    assert lp == pytest.approx(0.5 + math.sqrt(2) / 8, abs=1e-15)
    assert lm == pytest.approx(0.5 - math.sqrt(2) / 8, abs=1e-15)
    assert state_singular_values(0.0, 0.0, Q) == pytest.approx((0.5, 0.5))


def test_state_singular_values_match_svd():
    rng = np.random.default_rng(0)
    for _ in range(200):
        p, c, th = rng.uniform(), rng.uniform(0, 0.5), rng.uniform(0, Q)
        rho = kraus_evolve(initial_state(c, th), p)
        ref = np.linalg.svd(rho, compute_uv=False)
        assert np.allclose(state_singular_values(p, c, th), ref, atol=1e-14)


def test_generator_singular_values_examples_and_svd():
    assert generator_singular_values(0.5, 1.0, 0.1, 0.0) == (0.0, 0.0)
    assert generator_singular_values(0.5, 1.0, 0.25, 0.3) == (0.0, 0.0)
    assert generator_singular_values(0.5, 1.0, 0.0, Q) == pytest.approx((0.25, 0.25))
    rng = np.random.default_rng(1)
    for _ in range(100):
        p, r, c, th = rng.uniform(), rng.uniform(0, 3), rng.uniform(0, 0.5), rng.uniform(0, Q)
        gen = dephasing_generator(kraus_evolve(initial_state(c, th), p), r)
        assert np.allclose(generator_singular_values(p, r, c, th), np.linalg.svd(gen, compute_uv=False), atol=1e-14)


def test_time_average_examples():
    w = EvolutionWindow(0.0, 1.0)
    assert time_average(lambda t: 2.5, w) == pytest.approx(2.5)
    assert time_average(lambda t: t, w) == pytest.approx(0.5)
    pdot = lambda t: np.abs(gamma_rate(OHMIC, t) * decoherence_factor(OHMIC, t))  # noqa: E731
    assert time_average(pdot, w) == pytest.approx(0.5, abs=1e-12)
    with pytest.raises(ValueError):
        time_average(lambda t: t, EvolutionWindow(math.inf, 1.0))


def test_open_bounds_guards():
    assert ml_bound_open(problem(theta=0.0)) == math.inf
    assert mt_bound_open(problem(theta=0.0)) == math.inf
    for bath in (OHMIC, SUPER):
        crit = problem(chi=0.25, bath=bath, tau=0.7)
        assert ml_bound_open(crit) == 0.0
        assert mt_bound_open(crit) == 0.0
        assert relativistic_qslt(crit) == 0.0
        assert unified_qslt(crit).value == 0.0


def test_ml_bound_open_equals_closed_form_at_reference_point():
    pr = problem()
    assert ml_bound_open(pr) == pytest.approx(relativistic_qslt(pr), rel=1e-12)


def test_ml_bound_closed_examples():
    assert ml_bound_closed_value(1.0, 0.8, 2.0) == 0.0
    assert ml_bound_closed_value(0.0, 1.0, 0.5) == pytest.approx(1.0)
    assert ml_bound_closed_value(0.5, 1.0, 1.0) == pytest.approx(0.25)
    with pytest.raises(ValueError):
        ml_bound_closed_value(0.5, 1.0, 0.0)
    pr = problem(tau=0.0)
    # f = (1 + p_1)/2 = 3/4 and tr rho^2 = 1 for the pure initial state
    assert ml_bound_closed(pr, 1.0) == pytest.approx(0.125, rel=1e-12)


def test_unified_reference_points():
    r0 = unified_qslt(problem(tau=0.0))
    assert r0.value == pytest.approx(1.0, rel=1e-12)
    assert r0.active_bound == "ML"
    assert unified_qslt(problem(tau=1.0)).value == pytest.approx(0.5, rel=1e-12)
    assert markovian_qslt(1.0, 1.0, 0.0, Q) == 1.0
    assert markovian_qslt(decoherence_factor(OHMIC, 1.0), 1.0, 0.0, Q) == pytest.approx(0.5)


def test_markovian_examples_and_validation():
    rng = np.random.default_rng(4)
    for _ in range(20):
        assert markovian_qslt(rng.uniform(), rng.uniform(0.1, 5), 0.25, rng.uniform(0, Q)) == 0.0
    with pytest.raises(ValueError):
        markovian_qslt(1.2, 1.0, 0.0, Q)
    with pytest.raises(ValueError):
        markovian_qslt(0.5, 0.0, 0.0, Q)


def test_tau_infinite_routes():
    pr = problem(chi=0.1, tau=math.inf, bath=SUPER)
    assert markovian_qslt_for(pr) == pytest.approx(math.exp(-1) * 0.6, rel=1e-9)
    assert markovian_qslt_for(problem(tau=math.inf)) == 0.0
    with pytest.raises(ValueError):
        relativistic_qslt(pr)
    with pytest.raises(ValueError):
        unified_qslt(pr)


def test_random_parameter_sets_unified_vs_closed():
    rng = np.random.default_rng(12)
    for _ in range(60):
        bath = DephasingSpec(rng.uniform(0.05, 3), rng.uniform(0.1, 4), float(rng.choice([1.0, 2.0])))
        pr = QsltProblem(
            bath, EvolutionWindow(rng.uniform(0, 8), rng.uniform(0.05, 4)), rng.uniform(0, 0.5), rng.uniform(0.01, Q)
        )
        u = unified_qslt(pr)
        c = relativistic_qslt(pr)
        assert u.value == pytest.approx(c, rel=1e-9)
        assert u.active_bound == "ML"
        assert u.mt_term / u.ml_term == pytest.approx(1 / math.sqrt(2), abs=1e-12)
        assert c == pytest.approx(markovian_qslt_for(pr), rel=1e-9)


def test_scale_covariance():
    # rescaling time by 1/omega_c and the window by omega_c leaves p(tau), p(t) invariant
    base = QsltProblem(SUPER, EvolutionWindow(0.8, 1.5), 0.1, 0.6)
    s = 3.0
    scaled = QsltProblem(DephasingSpec(1.0, s, 2.0), EvolutionWindow(0.8 / s, 1.5 / s), 0.1, 0.6)
    assert relativistic_qslt(scaled) * s == pytest.approx(relativistic_qslt(base), rel=1e-10)


def test_qslt_decreases_with_tau_for_monotone_damping():
    for bath in (OHMIC, SUPER):
        vals = [markovian_qslt_for(problem(chi=0.1, tau=t, bath=bath)) for t in np.linspace(0, 10, 21)]
        assert np.all(np.diff(vals) <= 1e-15)


def test_from_packet_uses_chi():
    pk = BoostedPacketSpec(theta=Q, K=100, W=30, alpha=math.inf)
    pr = QsltProblem.from_packet(OHMIC, pk, EvolutionWindow(0.0, 1.0))
    assert pr.chi == pytest.approx(0.48049, abs=2e-5)
    assert relativistic_qslt(pr) == pytest.approx(abs(1 - 4 * pr.chi), rel=1e-9)


def test_window_validation():
    for bad in ((-1, 1), (0, 0), (0, math.inf), (math.nan, 1)):
        with pytest.raises(ValueError):
            EvolutionWindow(*bad)
