"""
Large-N saddle point of a one-matrix model with polynomial potential.

For a potential V, a temperature T (total spectral mass, weight exp(-(N/T) V))
and a cut count s, the resolvent is W = (V' - M sqrt(sigma)) / 2. The endpoints
of the support are fixed by requiring W(z) = T/z + O(z^-2) and, for two cuts,
equal Fermi levels on both cuts. This module solves those conditions and
evaluates the quantities built on the solution: density, resolvent, effective
potential, chemical potential ell = dF/dT and the planar free energy F.

Classes
-------
Potential
    Confining polynomial potential.
SupportGeometry
    Sorted endpoints of one or two cuts.
ResolventData
    Converged solution (endpoints, M, residual).
Thermo
    Chemical potential, free energy and cut masses at one temperature.
PhaseVerdict
    Outcome of `validate_phase`.
"""
import logging

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from scipy.integrate import cumulative_trapezoid
from scipy.optimize import brentq

from cutbirth.core.algebra import (
    LaurentTail,
    Poly,
    check_endpoints,
    polynomial_part,
    resolvent_tail,
    sqrt_sigma_series,
)
from cutbirth.core.default.constants import (
    DENSITY_FLOOR,
    DENSITY_SAMPLES,
    FERMI_CONSISTENCY,
    GAP_FLOOR,
    JACOBIAN_STEP,
    MAX_NEWTON_ITERATIONS,
    MAX_STEP_HALVINGS,
    MIN_GAP_WIDTH,
    QUADRATURE_NODES,
    SOLVER_TOLERANCE,
    TAIL_REACH,
    TAIL_TERMS,
)
from cutbirth.core.default.presets import PRESETS
from cutbirth.core.errors import (
    InconsistentFermiLevels,
    InvalidPotential,
    NegativeDensity,
    NoConvergence,
    NonIncreasingEndpoints,
    OnSupport,
    OrderingViolated,
    ValidationError,
)
from cutbirth.core.quadrature import (
    DensityData,
    gap_quadrature,
    log_potential,
    panel_rule,
    sqrt_sigma_boundary,
)

logger = logging.getLogger(__name__)

# backtracking steps spent looking for a residual decrease once the step is ordered
_DECREASE_HALVINGS = 12


@dataclass(frozen=True)
class Potential:
    """
    Confining polynomial potential V(x) = sum_k coeffs[k] x^k.

    Raises
    ------
    InvalidPotential
        If the degree is odd or below 2, or the leading coefficient is not positive.
    """

    coeffs: Tuple[float, ...]

    def __post_init__(self):
        poly = Poly(tuple(self.coeffs))
        object.__setattr__(self, "coeffs", poly.coeffs)
        if poly.degree < 2 or poly.degree % 2:
            raise InvalidPotential(
                f"potential degree must be even and at least 2, got {poly.degree}"
            )
        if poly.coeffs[-1] <= 0:
            raise InvalidPotential(
                f"leading coefficient must be positive, got {poly.coeffs[-1]}"
            )

    @classmethod
    def from_preset(cls, name: str) -> "Potential":
        if name not in PRESETS:
            raise InvalidPotential(
                f"unknown preset '{name}', choose one of {sorted(PRESETS)}"
            )
        return cls(PRESETS[name])

    @property
    def poly(self) -> Poly:
        return Poly(self.coeffs)

    @property
    def vprime(self) -> Poly:
        return self.poly.deriv()

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return self.poly(x)

    def shifted(self, s: float) -> "Potential":
        """The potential x -> V(x - s)."""
        return Potential(self.poly.shifted(s).coeffs)

    def global_minimum(self) -> float:
        critical = self.vprime.real_roots()
        return min(critical, key=lambda x: (float(self(x)), x))


@dataclass(frozen=True)
class SupportGeometry:
    endpoints: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "endpoints", tuple(float(x) for x in check_endpoints(self.endpoints))
        )

    @property
    def s(self) -> int:
        return len(self.endpoints) // 2

    @property
    def cuts(self) -> Tuple[Tuple[float, float], ...]:
        e = self.endpoints
        return tuple((e[i], e[i + 1]) for i in range(0, len(e), 2))


@dataclass(frozen=True)
class ResolventData:
    """
    Converged saddle point at one temperature.

    Attributes
    ----------
    potential : Potential
    T : float
        Temperature, equal to the total spectral mass.
    geometry : SupportGeometry
    M : Poly
        Moment polynomial, deg(M) = deg(V) - 1 - s.
    residual_norm : float
        Max-norm of the endpoint conditions at the solution.
    iterations : int
        Newton iterations spent.
    """

    potential: Potential
    T: float
    geometry: SupportGeometry
    M: Poly
    residual_norm: float
    iterations: int = 0

    @property
    def endpoints(self) -> Tuple[float, ...]:
        return self.geometry.endpoints

    @property
    def s(self) -> int:
        return self.geometry.s

    @property
    def density_data(self) -> DensityData:
        return DensityData(self.M, self.endpoints)


@dataclass(frozen=True)
class Thermo:
    T: float
    ell: float
    F: float
    masses: Tuple[float, ...]
    fermi_spread: float = 0.0


@dataclass(frozen=True)
class PhaseVerdict:
    """`valid` is False when the density is negative or V_eff dips below the Fermi level at `location`."""

    valid: bool
    location: Optional[float] = None
    reason: str = ""


def asymptotic_residuals(
    potential: Potential,
    T: float,
    endpoints: Sequence[float],
    nodes: int = QUADRATURE_NODES,
) -> np.ndarray:
    """
    Endpoint conditions of the s-cut ansatz; all components vanish at a solution.

    Returns
    -------
    numpy.ndarray
        Length 2s: the coefficients of z^(s-1) .. z^0 of V' - M sqrt(sigma), its
        z^-1 coefficient minus 2T, and for two cuts the integral of
        M sqrt(sigma) across the gap (equal Fermi levels on both cuts).
    """
    e = check_endpoints(endpoints)
    s = e.size // 2
    M, tail = resolvent_tail(potential.vprime, e)
    decay = [tail.coefficient(k) for k in range(s - 1, -1, -1)]
    mass = tail.coefficient(-1) - 2.0 * T
    conditions = decay + [mass]
    if s == 2:
        conditions.append(gap_quadrature(M, e, e[1], e[2], nodes))
    return np.array(conditions)


def default_one_cut_guess(potential: Potential, T: float) -> Tuple[float, float]:
    """Global minimum of V plus or minus max(0.5, 2 sqrt(T))."""
    center = potential.global_minimum()
    half = max(0.5, 2.0 * np.sqrt(T))
    return center - half, center + half


def scaled_one_cut_guess(rd: ResolventData, T: float) -> Tuple[float, float]:
    """One-cut seed at T from a solution elsewhere: same centre, half-width times sqrt(T / rd.T)."""
    a, b = rd.endpoints[0], rd.endpoints[-1]
    center, half = 0.5 * (a + b), 0.5 * (b - a) * np.sqrt(T / rd.T)
    return float(center - half), float(center + half)


def _ordered(x: np.ndarray) -> bool:
    return bool(np.all(np.diff(x) > MIN_GAP_WIDTH))


def _jacobian(
    residual: Callable[[np.ndarray], np.ndarray], x: np.ndarray, r: np.ndarray
) -> np.ndarray:
    J = np.empty((r.size, x.size))
    for j in range(x.size):
        h = JACOBIAN_STEP * (1.0 + abs(x[j]))
        trial = x.copy()
        trial[j] += h
        if not _ordered(trial):
            h = -h
            trial[j] = x[j] + h
        J[:, j] = (residual(trial) - r) / h
    return J


def _newton_direction(J: np.ndarray, r: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.solve(J, -r)
    except np.linalg.LinAlgError:
        return np.linalg.lstsq(J, -r, rcond=None)[0]


def _damped_update(
    residual: Callable[[np.ndarray], np.ndarray],
    x: np.ndarray,
    step: np.ndarray,
    norm: float,
) -> Tuple[np.ndarray, np.ndarray, float]:
    scale = 1.0
    for _ in range(MAX_STEP_HALVINGS):
        if _ordered(x + scale * step):
            break
        scale *= 0.5
    else:
        raise OrderingViolated(
            f"every damped step from {tuple(x)} crosses or collides endpoints"
        )

    best = None
    for _ in range(_DECREASE_HALVINGS):
        trial = x + scale * step
        if _ordered(trial):
            r_trial = residual(trial)
            n_trial = float(np.max(np.abs(r_trial)))
            if np.isfinite(n_trial) and (best is None or n_trial < best[2]):
                best = (trial, r_trial, n_trial)
            if n_trial < norm:
                return trial, r_trial, n_trial
        scale *= 0.5
    if best is None:
        raise NoConvergence(f"residual is not finite along the step from {tuple(x)}")
    return best


def solve_endpoints(
    potential: Potential,
    T: float,
    s: int,
    init: Optional[Sequence[float]] = None,
    *,
    tol: float = SOLVER_TOLERANCE,
    max_iter: int = MAX_NEWTON_ITERATIONS,
    check_density: bool = True,
) -> ResolventData:
    """
    Solve the endpoint conditions by damped Newton with a forward-difference Jacobian.

    Parameters
    ----------
    potential : Potential
    T : float
        Temperature, must be positive.
    s : int
        Cut count, 1 or 2.
    init : sequence of float, optional
        Strictly increasing initial endpoints; required for two cuts.
    tol : float
        Residual max-norm to reach.
    max_iter : int
        Newton iteration cap.
    check_density : bool
        Raise NegativeDensity when the converged density is negative on a cut.

    Returns
    -------
    ResolventData

    Raises
    ------
    NoConvergence, OrderingViolated, NegativeDensity
    """
    if not T > 0:
        raise ValidationError(f"temperature must be positive, got {T}", key="T")
    if s not in (1, 2):
        raise ValueError(f"cut count must be 1 or 2, got {s}")
    if init is None:
        if s == 2:
            raise ValueError("a two-cut solve needs an initial endpoint guess")
        init = default_one_cut_guess(potential, T)
    x = check_endpoints(init).copy()
    if x.size != 2 * s:
        raise NonIncreasingEndpoints(f"{s} cut(s) need {2 * s} endpoints, got {x.size}")

    def residual(e: np.ndarray) -> np.ndarray:
        return asymptotic_residuals(potential, T, e)

    r = residual(x)
    norm = float(np.max(np.abs(r)))
    iteration = 0
    while norm >= tol:
        if iteration >= max_iter:
            raise NoConvergence(
                f"endpoint Newton stalled at |r| = {norm:.3e} after {max_iter} iterations (T = {T})"
            )
        step = _newton_direction(_jacobian(residual, x, r), r)
        x, r, norm = _damped_update(residual, x, step, norm)
        iteration += 1
        logger.debug(f"T={T:.10g} s={s} iter={iteration} |r|={norm:.3e} x={tuple(x)}")

    # one polishing step, kept only if it helps
    step = _newton_direction(_jacobian(residual, x, r), r)
    if _ordered(x + step):
        r_polish = residual(x + step)
        n_polish = float(np.max(np.abs(r_polish)))
        if n_polish < norm:
            x, r, norm = x + step, r_polish, n_polish

    M, _ = polynomial_part(potential.vprime, x)
    rd = ResolventData(
        potential=potential,
        T=float(T),
        geometry=SupportGeometry(tuple(x)),
        M=M,
        residual_norm=norm,
        iterations=iteration,
    )
    if check_density:
        location, value = density_minimum(rd)
        if value < DENSITY_FLOOR:
            raise NegativeDensity(location, value)
    return rd


def density(rd: ResolventData, x):
    """Equilibrium density at x; zero off the support."""
    return rd.density_data(x)


def density_minimum(rd: ResolventData) -> Tuple[float, float]:
    """Location and value of the smallest density sampled across all cuts."""
    j = np.arange(1, DENSITY_SAMPLES + 1)
    fractions = 0.5 * (1.0 - np.cos(np.pi * j / (DENSITY_SAMPLES + 1)))
    points = np.concatenate(
        [left + (right - left) * fractions for left, right in rd.geometry.cuts]
    )
    values = density(rd, points)
    k = int(np.argmin(values))
    return float(points[k]), float(values[k])


def _inside_cut(rd: ResolventData, x: float) -> bool:
    return any(left < x < right for left, right in rd.geometry.cuts)


def resolvent_value(rd: ResolventData, x: float) -> float:
    """
    W(x) = (V'(x) - M(x) sqrt(sigma(x))) / 2 off the support.

    Far from the support the two terms cancel to O(T/x), so there W is summed
    from its Laurent tail instead, whose nonnegative powers vanish at a solution.

    Raises
    ------
    OnSupport
        If x lies inside a cut, where W has a branch cut.
    """
    if _inside_cut(rd, x):
        raise OnSupport(f"x = {x} lies on the support {rd.endpoints}")
    if abs(x) >= TAIL_REACH * max(abs(v) for v in rd.endpoints):
        return 0.5 * _resolvent_tail(rd).evaluate(x, max_exp=-1)
    root = float(np.real(sqrt_sigma_boundary(x, rd.endpoints)))
    return 0.5 * (float(rd.potential.vprime(x)) - float(rd.M(x)) * root)


def _resolvent_tail(rd: ResolventData) -> LaurentTail:
    """Expansion of V' - M sqrt(sigma) at infinity down to z**-TAIL_TERMS."""
    vprime = rd.potential.vprime
    order = vprime.degree + 1 + TAIL_TERMS
    root = sqrt_sigma_series(rd.endpoints, order)
    return LaurentTail.from_poly(vprime, order) - LaurentTail.from_poly(rd.M, order) * root


def effective_potential_gap(rd: ResolventData, x: float) -> float:
    """
    Gamma(x) = V_eff(x) - ell, the integral of M sqrt(sigma) from the nearest endpoint.

    For x beyond the support the reference endpoint is the outermost one on that
    side; inside a gap it is the gap's left end (both ends agree at a solution).
    """
    e = rd.endpoints
    if x >= e[-1]:
        anchor = e[-1]
    elif x <= e[0]:
        anchor = e[0]
    else:
        anchor = max(v for v in e if v <= x)
    return gap_quadrature(rd.M, e, anchor, x)


def effective_minima(rd: ResolventData) -> Tuple[float, ...]:
    """Local minima of V_eff off the support: roots of M where M sqrt(sigma) turns from - to +."""
    slope = rd.M.deriv()
    minima = []
    for root in rd.M.real_roots():
        if _inside_cut(rd, root) or root in rd.endpoints:
            continue
        branch = float(np.real(sqrt_sigma_boundary(root, rd.endpoints)))
        if float(slope(root)) * branch > 0:
            minima.append(root)
    return tuple(minima)


def fermi_levels(rd: ResolventData) -> Tuple[float, ...]:
    """V - 2U averaged over the two endpoints of each cut."""
    dens = rd.density_data
    levels = []
    for left, right in rd.geometry.cuts:
        values = [float(rd.potential(x)) - 2.0 * log_potential(x, dens) for x in (left, right)]
        levels.append(0.5 * (values[0] + values[1]))
    return tuple(levels)


def chemical_potential(rd: ResolventData) -> float:
    """
    Chemical potential ell = dF/dT, the value of V - 2U on the support.

    Raises
    ------
    InconsistentFermiLevels
        If the cut-wise values differ by more than 1e-6.
    """
    levels = fermi_levels(rd)
    spread = max(levels) - min(levels)
    if spread > FERMI_CONSISTENCY:
        raise InconsistentFermiLevels(
            f"Fermi levels {levels} differ by {spread:.3e} at T = {rd.T}"
        )
    logger.debug(f"Fermi levels at T={rd.T:.10g}: {levels} (spread {spread:.3e})")
    return float(np.mean(levels))


def cut_masses(rd: ResolventData) -> Tuple[float, ...]:
    return rd.density_data.cut_masses()


def free_energy(rd: ResolventData) -> float:
    """
    Planar free energy F = int V dmu - int int log|x - y| dmu(x) dmu(y).

    The outer integral runs over graded nodes on each cut; the inner one is
    `log_potential`, which splits its cut at the outer node.
    """
    dens = rd.density_data
    parts = [panel_rule([left, right]) for left, right in rd.geometry.cuts]
    t = np.concatenate([p[0] for p in parts])
    w = np.concatenate([p[1] for p in parts])
    inner = np.array([log_potential(x, dens) for x in t])
    return float(np.dot(w, (rd.potential(t) - inner) * dens(t)))


def thermodynamics(rd: ResolventData) -> Thermo:
    levels = fermi_levels(rd)
    return Thermo(
        T=rd.T,
        ell=chemical_potential(rd),
        F=free_energy(rd),
        masses=cut_masses(rd),
        fermi_spread=max(levels) - min(levels),
    )


def free_energy_by_integration(
    temperatures: Sequence[float], ells: Sequence[float], F_start: float
) -> np.ndarray:
    """Cross-check of F along a sorted table: F(T_0) + int ell dT by the trapezoid rule."""
    return F_start + cumulative_trapezoid(ells, temperatures, initial=0.0)


def cumulative_mass(rd: ResolventData, x: float) -> float:
    """Mass of the equilibrium measure on (-inf, x]."""
    dens = rd.density_data
    total = 0.0
    for left, right in rd.geometry.cuts:
        if x >= right:
            total += dens.integrate(np.ones_like, left, right)
        elif x > left:
            total += dens.integrate(np.ones_like, left, x)
    return total


def cut_quantiles(rd: ResolventData, cut: int, levels: Sequence[float]) -> np.ndarray:
    """
    Points of cut number `cut` below which the given fractions of that cut's mass lie.

    Parameters
    ----------
    rd : ResolventData
    cut : int
        Cut index, 0 for the leftmost.
    levels : sequence of float
        Fractions strictly between 0 and 1.
    """
    dens = rd.density_data
    left, right = rd.geometry.cuts[cut]
    mass = dens.integrate(np.ones_like, left, right)
    positions = []
    for level in levels:
        target = level * mass
        positions.append(
            brentq(
                lambda t: dens.integrate(np.ones_like, left, t) - target,
                left,
                right,
                xtol=1e-14,
            )
        )
    return np.array(positions)


def validate_phase(rd: ResolventData) -> PhaseVerdict:
    """
    Check that `rd` is the physical phase: nonnegative density and no off-support
    minimum of the effective potential below the Fermi level.
    """
    location, value = density_minimum(rd)
    if value < DENSITY_FLOOR:
        return PhaseVerdict(False, location, f"negative density {value:.3e}")
    for x in effective_minima(rd):
        gap = effective_potential_gap(rd, x)
        if gap < GAP_FLOOR:
            return PhaseVerdict(
                False, x, f"effective potential {gap:.3e} below the Fermi level"
            )
    return PhaseVerdict(True)
