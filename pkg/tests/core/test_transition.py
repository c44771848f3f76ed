import math

import numpy as np
import pytest

from cutbirth.core.equilibrium import Potential
from cutbirth.core.errors import CutBirthError, InsufficientData, SweepError
from cutbirth.core.transition import (
    ONE_CUT,
    TWO_CUT,
    SweepRow,
    TransitionReport,
    auto_equilibrium,
    derivative_jump,
    equilibrium_at,
    newcut_width_scaling,
    run_sweep,
    transition_grid,
    transition_report,
)


def _piecewise_rows(T_c=1.0):
    """ell = T^2 below T_c and T^2 + 2 (T - T_c)^2 above, F its antiderivative."""
    rows = []
    for T in transition_grid(T_c, 0.08, 12):
        x = T - T_c
        if T < T_c:
            rows.append(SweepRow(T, ONE_CUT, (-1.0, 1.0), T * T, T**3 / 3.0))
        else:
            rows.append(
                SweepRow(
                    T,
                    TWO_CUT,
                    (-1.0, 1.0, 3.0, 3.1),
                    T * T + 2.0 * x * x,
                    T**3 / 3.0 + 2.0 * x**3 / 3.0,
                )
            )
    return rows


def _newborn_rows(T_c=1.0, amplitude=3.0):
    """ell = T^2 below T_c; above it gains amplitude * x / ln x, F the matching x^2 / ln x term."""
    rows = []
    for T in transition_grid(T_c, 0.08, 12):
        x = T - T_c
        if T < T_c:
            rows.append(SweepRow(T, ONE_CUT, (-1.0, 1.0), T * T, T**3 / 3.0))
        else:
            log = math.log(x / T_c)
            rows.append(
                SweepRow(
                    T,
                    TWO_CUT,
                    (-1.0, 1.0, 3.0, 3.1),
                    T * T + amplitude * x / log,
                    T**3 / 3.0 + 0.5 * amplitude * x * x / log,
                )
            )
    return rows


def _width_rows(T_c=1.0):
    rows = []
    for offset in np.geomspace(1e-4, 0.09, 8):
        half = 1.5 * math.sqrt(offset)
        rows.append(SweepRow(T_c + offset, TWO_CUT, (-1.0, 1.0, 3.0 - half, 3.0 + half), 0.0, 0.0))
    return rows


def test_transition_grid():
    grid = transition_grid(2.0, 0.08, 12)
    assert len(grid) == 24
    assert grid == sorted(grid)
    assert 2.0 not in grid
    assert grid[0] == pytest.approx(2.0 - 0.16)
    assert grid[-1] == pytest.approx(2.0 + 0.16)
    assert grid[11] == pytest.approx(2.0 - 0.16 / 32.0)


def test_piecewise_quadratic_jump():
    report = derivative_jump(_piecewise_rows(), 1.0, nu=1)
    assert report.cont_F < 1e-10
    assert report.cont_F1 < 1e-10
    assert report.cont_F2 < 1e-8
    assert report.jump_F3 == pytest.approx(4.0, abs=1e-6)
    assert abs(report.jump_F3) > 10.0 * report.jump_F3_err
    assert report.n_below == report.n_above == 12
    assert report.nu == 1


def test_smooth_rows_have_no_jump():
    rows = [SweepRow(T, ONE_CUT, (-1.0, 1.0), T, 0.5 * T * T) for T in transition_grid(1.0)]
    report = derivative_jump(rows, 1.0)
    assert report.cont_F1 < 1e-10
    assert report.cont_F2 < 1e-8
    assert abs(report.jump_F3) < 1e-6
    assert report.alpha is None


def test_newborn_log_term_is_absorbed():
    report = derivative_jump(_newborn_rows(), 1.0)
    assert report.log_amplitude == pytest.approx(3.0, abs=1e-6)
    assert report.cont_F1 < 1e-8
    assert report.cont_F2 < 1e-6
    assert abs(report.jump_F3) < 1e-4
    assert report.cont_F < 1e-8


def test_plain_quadratics_miss_the_log_term():
    corrected = derivative_jump(_newborn_rows(), 1.0)
    plain = derivative_jump(_newborn_rows(), 1.0, log_corrected=False)
    assert plain.log_amplitude is None
    assert plain.cont_F2 > 100.0 * corrected.cont_F2 + 0.1


def test_jump_needs_rows_on_both_sides():
    rows = [r for r in _piecewise_rows() if r.T < 1.0]
    with pytest.raises(InsufficientData):
        derivative_jump(rows, 1.0)


def test_square_root_width_growth():
    alpha, stderr = newcut_width_scaling(_width_rows(), 1.0)
    assert alpha == pytest.approx(0.5, abs=1e-10)
    assert stderr < 1e-8


def test_width_scaling_needs_rows():
    with pytest.raises(InsufficientData):
        newcut_width_scaling(_width_rows()[:2], 1.0)


def test_report_serialises():
    report = derivative_jump(_piecewise_rows(), 1.0)
    restored = TransitionReport.from_dict(report.to_dict())
    assert restored == report


def test_gaussian_sweep(gaussian):
    rows = run_sweep(gaussian, [0.5, 1.0, 1.5])
    assert [r.phase for r in rows] == [ONE_CUT] * 3
    for row in rows:
        assert row.ell == pytest.approx(row.T - row.T * math.log(row.T), abs=1e-7)
        assert row.new_cut_mass == 0.0


def test_sweep_grid_checks(gaussian):
    assert run_sweep(gaussian, []) == []
    with pytest.raises(ValueError):
        run_sweep(gaussian, [1.0, 0.5])


def test_sweep_wraps_failures():
    # no valid one-cut state of the symmetric double well at T = 0.5
    double_well = Potential((0.0, 0.0, -1.0, 0.0, 0.25))
    with pytest.raises(SweepError) as info:
        run_sweep(double_well, [0.5])
    assert info.value.T == 0.5
    assert isinstance(info.value.cause, CutBirthError)


def test_auto_equilibrium_single_well(gaussian):
    rd, crit = auto_equilibrium(gaussian, 1.0)
    assert crit is None
    assert rd.s == 1


@pytest.mark.slow
def test_phase_flips_at_critical_point(birth_demo, birth_critical):
    T_c = birth_critical.T_c
    rows = run_sweep(birth_demo, [0.95 * T_c, 0.99 * T_c, 1.01 * T_c, 1.05 * T_c], birth_critical)
    assert [r.phase for r in rows] == [ONE_CUT, ONE_CUT, TWO_CUT, TWO_CUT]
    assert rows[0].new_cut_mass == 0.0 and rows[1].new_cut_mass == 0.0
    assert rows[2].new_cut_mass > 0.0 and rows[3].new_cut_mass > rows[2].new_cut_mass


@pytest.mark.slow
def test_two_cut_state_above_critical(birth_demo, birth_critical):
    rd = equilibrium_at(birth_demo, 1.05 * birth_critical.T_c, birth_critical)
    assert rd.s == 2


@pytest.mark.slow
def test_birth_demo_transition_report(birth_demo, birth_critical):
    report, rows = transition_report(birth_demo, birth_critical)
    assert len(rows) == 24
    assert report.cont_F < 10.0 * report.cont_F_err
    assert report.cont_F1 < 10.0 * report.cont_F1_err
    assert report.cont_F2 < 10.0 * report.cont_F2_err
    assert report.log_amplitude > 0.0
    assert math.isfinite(report.jump_F3) and report.jump_F3_err > 0.0
    assert 0.3 < report.alpha < 0.8
    masses = [r.new_cut_mass for r in rows if r.T > birth_critical.T_c]
    assert masses[0] > 0.0
    assert all(b > a for a, b in zip(masses, masses[1:]))
    sweep = [r.new_cut_mass for r in rows]
    assert all(b >= a for a, b in zip(sweep, sweep[1:]))
