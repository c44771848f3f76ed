import numpy as np
import pytest

import cutbirth.core.criticality as criticality

from cutbirth.core.algebra import Poly
from cutbirth.core.criticality import (
    CriticalData,
    classify_nu,
    continuation_schedule,
    continue_two_cut,
    fermi_gap,
    find_critical_temperature,
    second_well_point,
)
from cutbirth.core.equilibrium import (
    ResolventData,
    SupportGeometry,
    cut_masses,
    solve_endpoints,
    validate_phase,
)
from cutbirth.core.errors import (
    BelowCritical,
    EvenOrderZero,
    NoConvergence,
    NoSecondWell,
    NotBracketed,
    NotCritical,
    ValidationError,
)


def _synthetic(potential, M):
    return ResolventData(
        potential=potential,
        T=1.0,
        geometry=SupportGeometry((-1.0, 1.0)),
        M=M,
        residual_norm=0.0,
    )


def test_second_well_of_constructed_polynomial(birth_demo):
    rd = _synthetic(birth_demo, Poly.from_roots([2.5, 3.5]))
    e, barrier = second_well_point(rd)
    assert e == pytest.approx(3.5)
    assert barrier == pytest.approx(2.5)


def test_single_well_has_no_second_well(gaussian, semicircle):
    with pytest.raises(NoSecondWell):
        second_well_point(semicircle)
    with pytest.raises(NoSecondWell):
        fermi_gap(gaussian, 1.0)


def test_second_well_of_birth_demo(birth_demo):
    rd = solve_endpoints(birth_demo, 0.1, 1)
    e, barrier = second_well_point(rd)
    assert 2.5 < e < 3.5 and e != 3.0
    assert 1.5 < barrier < 2.5
    assert rd.endpoints[-1] < barrier < e


def test_gap_positive_in_deep_one_cut_regime(birth_demo):
    assert fermi_gap(birth_demo, 0.05) > 0.0


def test_classify_simple_zero():
    nu, Q = classify_nu(Poly.from_roots([3.0, 1.0]), 3.0)
    assert nu == 1
    assert np.allclose(Q.coeffs, (-1.0, 1.0))


def test_classify_triple_zero():
    nu, Q = classify_nu(Poly.from_roots([3.0, 3.0, 3.0, 4.0]), 3.0)
    assert nu == 2
    assert np.allclose(Q.coeffs, (-4.0, 1.0), atol=1e-8)


def test_classify_rejects_non_critical_points():
    with pytest.raises(NotCritical):
        classify_nu(Poly.from_roots([1.0, 2.0]), 3.0)
    with pytest.raises(EvenOrderZero):
        classify_nu(Poly.from_roots([3.0, 3.0, 1.0]), 3.0)


def test_continuation_schedule():
    schedule = continuation_schedule(1.0, 1.1)
    assert schedule[0] == pytest.approx(1.0001)
    assert schedule[-1] == 1.1
    steps = np.diff([1.0] + schedule)
    assert np.all(steps > 0)
    assert np.all(steps <= 0.01 * np.array(schedule) + 1e-15)


def test_continuation_schedule_resumes():
    schedule = continuation_schedule(1.0, 1.1, 1.05)
    assert schedule[0] > 1.05
    assert schedule[-1] == 1.1
    with pytest.raises(BelowCritical):
        continuation_schedule(1.0, 1.0)


def test_continuation_below_critical(birth_demo):
    crit = CriticalData(
        T_c=1.0,
        e=3.0,
        nu=1,
        Q=Poly((1.0,)),
        barrier=2.0,
        distance=1.0,
        resolvent=None,
        gap=0.0,
    )
    with pytest.raises(BelowCritical):
        continue_two_cut(birth_demo, crit, 1.0)


def test_gaussian_has_no_critical_point(gaussian):
    with pytest.raises(NoSecondWell):
        find_critical_temperature(gaussian, (0.05, 5.0))


def test_bracket_must_be_ordered(birth_demo):
    with pytest.raises(ValidationError):
        find_critical_temperature(birth_demo, (1.0, 0.5))


def test_bracket_below_critical_point(birth_demo):
    with pytest.raises(NotBracketed) as info:
        find_critical_temperature(birth_demo, (0.05, 0.1))
    assert info.value.gap_hi > 0.0


@pytest.mark.slow
def test_birth_demo_critical_point(birth_critical):
    crit = birth_critical
    assert 0.2 < crit.T_c < 0.6
    assert crit.gap < 1e-10
    assert crit.b < crit.barrier < crit.e
    assert crit.nu == 1
    assert abs(crit.Q(crit.e)) > 1e-6


@pytest.mark.slow
def test_one_cut_above_critical_is_invalid(birth_demo, birth_critical):
    rd = solve_endpoints(birth_demo, 1.1 * birth_critical.T_c, 1, check_density=False)
    verdict = validate_phase(rd)
    assert not verdict.valid
    assert verdict.location == pytest.approx(birth_critical.e, abs=0.3)


@pytest.mark.slow
def test_new_cut_is_born_small(birth_demo, birth_critical):
    crit = birth_critical
    rd = continue_two_cut(birth_demo, crit, 1.001 * crit.T_c)
    a, b, c, d = rd.endpoints
    assert d - c < 0.1 * (crit.e - crit.b)
    assert c < crit.e < d
    assert cut_masses(rd)[1] > 0.0


@pytest.mark.slow
def test_outer_cut_evolves_continuously(birth_demo, birth_critical):
    crit = birth_critical
    rd = continue_two_cut(birth_demo, crit, 1.2 * crit.T_c)
    a, b, _, _ = rd.endpoints
    a_c, b_c = crit.resolvent.endpoints
    assert abs(a - a_c) < 0.5 and abs(b - b_c) < 0.5
    assert sum(cut_masses(rd)) == pytest.approx(1.2 * crit.T_c, abs=1e-8)


@pytest.mark.slow
def test_gap_strictly_decreasing_below_critical(birth_demo, birth_critical):
    temps = np.linspace(0.05, 0.97 * birth_critical.T_c, 50)
    init = None
    gaps = []
    for T in temps:
        init = solve_endpoints(birth_demo, T, 1, init).endpoints
        gaps.append(fermi_gap(birth_demo, T, init))
    assert np.all(np.diff(gaps) < 0.0)
    assert gaps[-1] > 0.0


@pytest.mark.slow
def test_moment_polynomial_factors_at_birth(birth_demo, birth_critical):
    crit = birth_critical
    linear = Poly((-crit.e, 1.0))
    contact = Poly((1.0,))
    for _ in range(2 * crit.nu - 2):
        contact = contact * linear
    below = crit.resolvent.M - contact * linear * crit.Q
    assert below.norm < 1e-8 * crit.resolvent.M.norm
    above = continue_two_cut(birth_demo, crit, (1.0 + 1e-4) * crit.T_c).M
    expected = contact * crit.Q
    assert above.degree == expected.degree
    assert np.allclose(above.coeffs, expected.coeffs, rtol=0.0, atol=1e-2 * expected.norm)


@pytest.mark.slow
def test_unresolved_root_is_reported(birth_demo, monkeypatch):
    monkeypatch.setattr(criticality, "CRITICAL_TOLERANCE", -1.0)
    with pytest.raises(NoConvergence):
        find_critical_temperature(birth_demo, (0.05, 5.0))
