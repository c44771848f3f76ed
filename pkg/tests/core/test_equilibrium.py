import math

import numpy as np
import pytest

from cutbirth.core.equilibrium import (
    Potential,
    asymptotic_residuals,
    chemical_potential,
    cumulative_mass,
    cut_quantiles,
    default_one_cut_guess,
    density,
    effective_potential_gap,
    free_energy,
    free_energy_by_integration,
    resolvent_value,
    solve_endpoints,
    thermodynamics,
    validate_phase,
)
from cutbirth.core.errors import (
    InvalidPotential,
    NegativeDensity,
    OnSupport,
    ValidationError,
)

DOUBLE_WELL = Potential((0.0, 0.0, -1.0, 0.0, 0.25))


@pytest.mark.parametrize("coeffs", [(0.0, 1.0), (0.0, 0.0, -1.0), (0.0, 0.0, 0.0, 1.0)])
def test_unconfined_potentials_rejected(coeffs):
    with pytest.raises(InvalidPotential):
        Potential(coeffs)


def test_presets(birth_demo):
    assert birth_demo.global_minimum() == pytest.approx(0.0, abs=1e-12)
    assert birth_demo(3.0) == pytest.approx(2.25)
    assert birth_demo(2.0) == pytest.approx(8.0 / 3.0)
    with pytest.raises(InvalidPotential):
        Potential.from_preset("no-such-preset")


def test_residuals_vanish_on_semicircle(gaussian):
    r = asymptotic_residuals(gaussian, 1.0, (-2.0, 2.0))
    assert np.max(np.abs(r)) < 1e-12


def test_residuals_detect_wrong_endpoints(gaussian):
    r = asymptotic_residuals(gaussian, 1.0, (-1.0, 1.0))
    assert np.max(np.abs(r)) > 0.1


def test_residuals_respect_parity(gaussian):
    r = asymptotic_residuals(gaussian, 0.7, (-1.3, 1.3))
    assert abs(r[0]) < 1e-14


@pytest.mark.parametrize("T", [0.25, 1.0, 4.0])
def test_gaussian_oracle(gaussian, T):
    rd = solve_endpoints(gaussian, T, 1)
    edge = 2.0 * math.sqrt(T)
    assert rd.endpoints == pytest.approx((-edge, edge), abs=1e-9)
    assert rd.M.coeffs == pytest.approx((1.0,), abs=1e-9)
    thermo = thermodynamics(rd)
    assert thermo.ell == pytest.approx(T - T * math.log(T), abs=1e-7)
    assert thermo.F == pytest.approx(0.75 * T * T - 0.5 * T * T * math.log(T), abs=1e-7)
    assert sum(thermo.masses) == pytest.approx(T, abs=1e-8)


def test_solve_from_explicit_guess(gaussian):
    rd = solve_endpoints(gaussian, 1.0, 1, (-1.5, 1.5))
    assert rd.endpoints == pytest.approx((-2.0, 2.0), abs=1e-9)
    assert rd.residual_norm < 1e-10


def test_shifted_gaussian(gaussian):
    rd = solve_endpoints(gaussian.shifted(1.0), 1.0, 1)
    assert rd.endpoints == pytest.approx((-1.0, 3.0), abs=1e-9)


def test_default_guess_is_centred_on_the_minimum(gaussian):
    assert default_one_cut_guess(gaussian, 0.01) == pytest.approx((-0.5, 0.5))


def test_invalid_solver_input(gaussian):
    with pytest.raises(ValidationError):
        solve_endpoints(gaussian, 0.0, 1)
    with pytest.raises(ValueError):
        solve_endpoints(gaussian, 1.0, 2)


def test_density(semicircle):
    assert density(semicircle, 0.0) == pytest.approx(1.0 / math.pi, abs=1e-9)
    assert density(semicircle, 2.5) == 0.0


def test_resolvent(semicircle):
    assert resolvent_value(semicircle, 3.0) == pytest.approx((3.0 - math.sqrt(5.0)) / 2.0, abs=1e-9)
    assert 100.0 * resolvent_value(semicircle, 100.0) == pytest.approx(1.0, abs=1e-3)
    with pytest.raises(OnSupport):
        resolvent_value(semicircle, 0.5)


def test_resolvent_far_from_support(semicircle):
    x = 1e4
    exact = 2.0 / (x + math.sqrt(x * x - 4.0))
    assert resolvent_value(semicircle, x) == pytest.approx(exact, rel=1e-12)
    assert resolvent_value(semicircle, -x) == pytest.approx(-exact, rel=1e-12)


def test_resolvent_branches_agree_at_switch(even_sextic):
    rd = solve_endpoints(even_sextic, 1.5, 1)
    switch = 10.0 * max(abs(v) for v in rd.endpoints)
    inside = resolvent_value(rd, switch * (1.0 - 1e-12))
    outside = resolvent_value(rd, switch * (1.0 + 1e-12))
    assert outside == pytest.approx(inside, rel=1e-7)


def test_resolvent_decay_even_sextic(even_sextic):
    rd = solve_endpoints(even_sextic, 1.5, 1)
    a, b = rd.endpoints
    x = 100.0 * (max(abs(a), abs(b)) + 1.0)
    second_moment = rd.density_data.integrate(lambda t: t**2, a, b)
    assert x * resolvent_value(rd, x) == pytest.approx(1.5 + second_moment / x**2, abs=1e-8)


def test_effective_potential_gap(semicircle):
    assert effective_potential_gap(semicircle, semicircle.endpoints[-1]) == 0.0
    expected = 1.5 * math.sqrt(5.0) - 2.0 * math.acosh(1.5)
    assert effective_potential_gap(semicircle, 3.0) == pytest.approx(expected, abs=1e-7)


def test_chemical_potential_vanishes_at_e(gaussian):
    rd = solve_endpoints(gaussian, math.e, 1)
    assert chemical_potential(rd) == pytest.approx(0.0, abs=1e-7)


def test_translation_leaves_thermodynamics_unchanged(gaussian):
    plain = thermodynamics(solve_endpoints(gaussian, 1.3, 1))
    moved = thermodynamics(solve_endpoints(gaussian.shifted(0.7), 1.3, 1))
    assert moved.ell == pytest.approx(plain.ell, abs=1e-8)
    assert moved.F == pytest.approx(plain.F, abs=1e-8)


def test_maxwell_identity(gaussian):
    T, h = 1.5, 1e-4
    up = free_energy(solve_endpoints(gaussian, T + h, 1))
    down = free_energy(solve_endpoints(gaussian, T - h, 1))
    ell = chemical_potential(solve_endpoints(gaussian, T, 1))
    assert (up - down) / (2.0 * h) == pytest.approx(ell, abs=1e-6)


def test_free_energy_by_integration():
    F = free_energy_by_integration([0.0, 1.0, 2.0], [1.0, 1.0, 1.0], 5.0)
    assert F == pytest.approx([5.0, 6.0, 7.0])


def test_integrated_ell_matches_free_energy(gaussian):
    temps = np.linspace(1.0, 2.0, 81)
    ells = [chemical_potential(solve_endpoints(gaussian, T, 1)) for T in temps]
    F_start = free_energy(solve_endpoints(gaussian, temps[0], 1))
    integrated = free_energy_by_integration(temps, ells, F_start)
    assert integrated[-1] == pytest.approx(free_energy(solve_endpoints(gaussian, temps[-1], 1)), abs=5e-5)
    assert integrated[40] == pytest.approx(free_energy(solve_endpoints(gaussian, temps[40], 1)), abs=5e-5)


def test_cumulative_mass_and_quantiles(semicircle):
    assert cumulative_mass(semicircle, 0.0) == pytest.approx(0.5, abs=1e-10)
    assert cumulative_mass(semicircle, -3.0) == 0.0
    assert cumulative_mass(semicircle, 3.0) == pytest.approx(1.0, abs=1e-10)
    median = cut_quantiles(semicircle, 0, [0.5])
    assert median[0] == pytest.approx(0.0, abs=1e-10)


def test_gaussian_phase_is_valid(semicircle):
    assert validate_phase(semicircle).valid


def test_double_well_one_cut_is_wrong_phase():
    rd = solve_endpoints(DOUBLE_WELL, 0.5, 1, (-1.5, 1.5), check_density=False)
    verdict = validate_phase(rd)
    assert not verdict.valid
    assert abs(verdict.location) < 0.1


def test_double_well_density_check():
    with pytest.raises(NegativeDensity) as info:
        solve_endpoints(DOUBLE_WELL, 0.5, 1, (-1.5, 1.5))
    assert info.value.value < 0.0
