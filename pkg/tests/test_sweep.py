import math

import numpy as np
import pytest

from relqsl.sweep import Curve, SweepFixed, SweepSpec, preset, run_sweep

SMALL = 21


def test_preset_parameters():
    assert preset("fig1").fixed.packet.W == 4
    assert preset("fig2a").fixed.packet.K == 100
    assert preset("fig2b").fixed.packet.K == 0.01
    assert preset("fig3a").fixed.packet.K == 100
    assert preset("fig3b").fixed.packet.K == 0.01
    assert math.isinf(preset("fig3b").fixed.packet.alpha)
    for tag in ("fig1", "fig2a", "fig3b"):
        spec = preset(tag)
        assert spec.fixed.ohmic.n == 1 and spec.fixed.superohmic.n == 2
        assert spec.fixed.packet.theta == pytest.approx(math.pi / 4)
        assert spec.fixed.window.delta_tau == 1
    with pytest.raises(ValueError):
        preset("fig9")


def test_fig1_first_row():
    table = run_sweep(preset("fig1", points=SMALL))
    row = table.curve("alpha=0")[0]
    assert row.value == 0 and row.qslt_ohmic == pytest.approx(1.0, abs=1e-12)
    assert all(r.ok for r in table.rows)
    assert not any("xcheck-mismatch" in f for r in table.rows for f in r.flags)


def test_fig2b_non_increasing():
    table = run_sweep(preset("fig2b", points=41))
    for label in ("tau=0.0", "tau=inf"):
        for name in ("qslt_ohmic", "qslt_superohmic"):
            assert np.all(np.diff(table.column(name, label)) <= 1e-12)
    assert table.column("qslt_ohmic", "tau=0.0")[-1] > 0
    # the Ohmic p_tau vanishes at tau = inf; the super-Ohmic one does not
    assert table.column("qslt_superohmic", "tau=inf")[-1] > 0


def test_fig2a_has_deep_interior_minimum():
    table = run_sweep(preset("fig2a"))
    col = table.column("qslt_ohmic", "tau=0.0")
    i = int(np.argmin(col))
    assert 0 < i < len(col) - 1
    assert col[i] < 0.05 * col[0]


def test_rows_do_not_depend_on_thread_count():
    spec = preset("fig3b", points=SMALL)
    a = run_sweep(spec, threads=1)
    b = run_sweep(spec, threads=4)
    assert a.rows == b.rows and a.metadata == b.metadata


def test_row_independence():
    spec = preset("fig2a", points=SMALL)
    whole = run_sweep(spec)
    sub = SweepSpec(spec.variable, spec.grid[5:7], spec.fixed, spec.curves[1:2])
    part = run_sweep(sub)
    assert part.rows == whole.curve(spec.curves[1].label)[5:7]


def test_non_markovian_and_unsupported_flags():
    from relqsl.dephasing import DephasingSpec

    fixed = SweepFixed(superohmic=DephasingSpec(1.0, 1.0, 4.0))
    table = run_sweep(SweepSpec("tau", (0.0, 2.0), fixed))
    flags = table.rows[1].flags
    assert "non-markovian:superohmic" in flags
    assert "unsupported-n:superohmic" in flags
    assert table.rows[1].ok


def test_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec("mass", (0.0,))
    with pytest.raises(ValueError):
        SweepSpec("tau", (1.0, 0.5))
    with pytest.raises(ValueError):
        SweepSpec("tau", ())
    with pytest.raises(ValueError):
        SweepSpec("width", (1.0, math.inf))
    with pytest.raises(ValueError):
        Curve("a,b")
    with pytest.raises(ValueError):
        Curve("x", (("mass", 1.0),))


def test_domain_error_is_flagged_not_raised():
    # width 0 is invalid; the row carries the error instead of aborting the table
    table = run_sweep(SweepSpec("alpha", (0.0, 1.0), SweepFixed(), (Curve("bad", (("W", 0.0),)),)))
    assert [r.flags for r in table.rows] == [("error:domain",)] * 2
    assert not any(r.ok for r in table.rows)
