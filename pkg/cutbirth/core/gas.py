"""
Finite-N log-gas: equilibrium eigenvalue positions at zero fluctuation.

N charges of mass T/N sit in the potential V with pairwise logarithmic
repulsion. Their equilibrium solves the force balance

    V'(l_i) = (2T/N) sum_{j != i} 1 / (l_i - l_j)

and minimises E = sum V(l_i) - (2T/N) sum_{i<j} log|l_i - l_j|. The relaxation
is a Newton iteration on E with a shifted Cholesky factorisation, a
per-particle displacement cap and an energy line search, so it is fully
deterministic.

Classes
-------
GasConfig
    Particle count, temperature and relaxation controls.
GasResult
    Relaxed positions with their force residual, energy and occupancy.
MetastabilityReport
    Seeded and unseeded relaxations side by side.
"""
import logging
import math

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from dataclasses_json import dataclass_json

from cutbirth.core.criticality import second_well_point
from cutbirth.core.default.constants import (
    GAS_COLLISION_DISTANCE,
    GAS_ENERGY_SLACK,
    GAS_MAX_ITERATIONS,
    GAS_TOLERANCE,
)
from cutbirth.core.equilibrium import (
    Potential,
    ResolventData,
    cumulative_mass,
    cut_masses,
    cut_quantiles,
    default_one_cut_guess,
    effective_potential_gap,
)
from cutbirth.core.errors import (
    Collision,
    MismatchedModel,
    NoConvergence,
    NoSecondWell,
    ValidationError,
)

logger = logging.getLogger(__name__)

QUANTILE = "quantile"
UNIFORM = "uniform"

_LINE_SEARCH_HALVINGS = 60


@dataclass_json
@dataclass(frozen=True)
class GasConfig:
    """
    Attributes
    ----------
    N : int
        Number of eigenvalues.
    T : float
        Temperature; every eigenvalue carries mass T / N.
    max_iter : int
        Newton iteration cap.
    tol : float
        Force residual at which the relaxation stops.
    init : str
        "quantile" to start at the continuum quantiles when a solution is
        supplied, "uniform" to spread the charges over an estimated support.
    """

    N: int
    T: float
    max_iter: int = GAS_MAX_ITERATIONS
    tol: float = GAS_TOLERANCE
    init: str = QUANTILE

    def __post_init__(self):
        if self.N < 1:
            raise ValidationError(f"N must be at least 1, got {self.N}", key="N")
        if not self.T > 0:
            raise ValidationError(f"T must be positive, got {self.T}", key="T")
        if not self.tol > 0:
            raise ValidationError(f"tol must be positive, got {self.tol}", key="tol")
        if self.init not in (QUANTILE, UNIFORM):
            raise ValidationError(
                f"init must be '{QUANTILE}' or '{UNIFORM}', got '{self.init}'", key="init"
            )


@dataclass(frozen=True)
class GasResult:
    positions: Tuple[float, ...]
    residual: float
    energy: float
    occupancy: int
    barrier: Optional[float]
    potential: Potential
    T: float
    iterations: int

    @property
    def N(self) -> int:
        return len(self.positions)


@dataclass(frozen=True)
class MetastabilityReport:
    """
    Relaxations with and without particles seeded in the new well.

    `trapped` is True when the unseeded run ends with fewer particles beyond
    the barrier than the seeded one, i.e. it is stuck in a metastable basin.
    """

    seeded: GasResult
    unseeded: GasResult
    predicted: int
    trapped: bool


def _pair_terms(positions: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    diff = positions[:, None] - positions[None, :]
    np.fill_diagonal(diff, np.inf)
    return diff, 1.0 / diff


def force_residual(potential: Potential, T: float, positions: Sequence[float]) -> float:
    """Max over i of |V'(l_i) - (2T/N) sum_{j != i} 1 / (l_i - l_j)|."""
    return float(np.max(np.abs(_gradient(potential, T, np.asarray(positions, dtype=float)))))


def _gradient(potential: Potential, T: float, x: np.ndarray) -> np.ndarray:
    _, inverse = _pair_terms(x)
    return potential.vprime(x) - (2.0 * T / x.size) * inverse.sum(axis=1)


def gas_energy(potential: Potential, T: float, positions: Sequence[float]) -> float:
    x = np.asarray(positions, dtype=float)
    upper = np.triu_indices(x.size, k=1)
    gaps = np.abs(x[:, None] - x[None, :])[upper]
    return float(np.sum(potential(x)) - (2.0 * T / x.size) * np.sum(np.log(gaps)))


def _hessian(potential: Potential, T: float, x: np.ndarray) -> np.ndarray:
    _, inverse = _pair_terms(x)
    coupling = (2.0 * T / x.size) * inverse**2
    H = -coupling
    np.fill_diagonal(H, potential.vprime.deriv()(x) + coupling.sum(axis=1))
    return H


def _newton_step(H: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Solve (H + mu I) p = -g with the smallest shift mu that makes the matrix positive definite."""
    if not np.all(np.isfinite(H)):
        raise NoConvergence("log-gas Hessian is not finite")
    scale = max(1.0, float(np.max(np.abs(np.diag(H)))))
    shift = 0.0
    identity = np.eye(H.shape[0])
    while True:
        try:
            L = np.linalg.cholesky(H + shift * identity)
            break
        except np.linalg.LinAlgError:
            shift = 1e-8 * scale if shift == 0.0 else 10.0 * shift
    y = np.linalg.solve(L, -g)
    return np.linalg.solve(L.T, y)


def _capped(step: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Scale the step so no particle moves more than half its nearest-neighbour distance."""
    if x.size == 1:
        return step
    gaps = np.diff(x)
    nearest = np.minimum(np.append(gaps, np.inf), np.insert(gaps, 0, np.inf))
    moving = np.abs(step) > 0
    if not np.any(moving):
        return step
    factor = min(1.0, float(np.min(0.5 * nearest[moving] / np.abs(step[moving]))))
    return factor * step


def _check_collisions(x: np.ndarray) -> None:
    if x.size > 1:
        smallest = float(np.min(np.diff(x)))
        if smallest < GAS_COLLISION_DISTANCE:
            k = int(np.argmin(np.diff(x)))
            raise Collision(
                f"particles {k} and {k + 1} came within {smallest:.3e} at x = {x[k]:.10g}"
            )


def quantile_positions(
    rd: ResolventData, N: int, counts: Optional[Sequence[int]] = None
) -> np.ndarray:
    """
    Place N charges at continuum quantiles, cut by cut.

    Parameters
    ----------
    rd : ResolventData
    N : int
    counts : sequence of int, optional
        Particles per cut; by default round(N m_i / T), with the rounding
        surplus or deficit absorbed by the heaviest cut.

    Returns
    -------
    numpy.ndarray
        Sorted positions; cut i holds counts[i] charges at its (j - 1/2) / counts[i] quantiles.
    """
    masses = cut_masses(rd)
    if counts is None:
        counts = [int(round(N * m / rd.T)) for m in masses]
        counts[int(np.argmax(masses))] += N - sum(counts)
    counts = list(counts)
    if len(counts) != rd.s or sum(counts) != N or min(counts) < 0:
        raise ValueError(f"counts {counts} do not split {N} particles over {rd.s} cut(s)")
    parts = []
    for cut, n in enumerate(counts):
        if n:
            levels = (np.arange(1, n + 1) - 0.5) / n
            parts.append(cut_quantiles(rd, cut, levels))
    return np.sort(np.concatenate(parts))


def _uniform_positions(potential: Potential, cfg: GasConfig, rd: Optional[ResolventData]) -> np.ndarray:
    if rd is not None:
        a, b = rd.endpoints[0], rd.endpoints[-1]
    else:
        a, b = default_one_cut_guess(potential, cfg.T)
    if cfg.N == 1:
        return np.array([potential.global_minimum()])
    return a + (b - a) * (np.arange(1, cfg.N + 1) - 0.5) / cfg.N


def initial_positions(
    potential: Potential,
    cfg: GasConfig,
    rd: Optional[ResolventData] = None,
    counts: Optional[Sequence[int]] = None,
) -> np.ndarray:
    if cfg.init == QUANTILE and rd is not None:
        return quantile_positions(rd, cfg.N, counts)
    if cfg.init == QUANTILE:
        logger.debug("no continuum solution supplied, starting the gas uniformly")
    return _uniform_positions(potential, cfg, rd)


def occupancy(gr: GasResult, barrier: float) -> int:
    """Number of eigenvalues beyond `barrier`."""
    return int(np.count_nonzero(np.asarray(gr.positions) > barrier))


def equilibrium_positions(
    potential: Potential,
    cfg: GasConfig,
    rd: Optional[ResolventData] = None,
    barrier: Optional[float] = None,
    initial: Optional[Sequence[float]] = None,
) -> GasResult:
    """
    Relax N charges to the minimum of the log-gas energy.

    Parameters
    ----------
    potential : Potential
    cfg : GasConfig
    rd : ResolventData, optional
        Continuum solution used for quantile initialisation.
    barrier : float, optional
        Occupancy threshold recorded in the result.
    initial : sequence of float, optional
        Explicit starting positions, overriding `cfg.init`.

    Returns
    -------
    GasResult

    Raises
    ------
    NoConvergence
        If the force residual stays above `cfg.tol` after `cfg.max_iter`
        iterations or the line search finds no descent.
    Collision
        If two charges meet.
    """
    if rd is not None and (rd.potential != potential or not math.isclose(rd.T, cfg.T)):
        raise MismatchedModel("continuum solution belongs to a different potential or T")
    if initial is not None:
        x = np.sort(np.asarray(initial, dtype=float))
        if x.size != cfg.N:
            raise ValueError(f"expected {cfg.N} initial positions, got {x.size}")
    else:
        x = initial_positions(potential, cfg, rd)
    _check_collisions(x)

    energy = gas_energy(potential, cfg.T, x)
    g = _gradient(potential, cfg.T, x)
    residual = float(np.max(np.abs(g)))
    iteration = 0
    while residual >= cfg.tol:
        if iteration >= cfg.max_iter:
            raise NoConvergence(
                f"log-gas relaxation stalled at residual {residual:.3e} after {cfg.max_iter} iterations"
            )
        step = _capped(_newton_step(_hessian(potential, cfg.T, x), g), x)
        for _ in range(_LINE_SEARCH_HALVINGS):
            trial = x + step
            trial_energy = gas_energy(potential, cfg.T, trial)
            if trial_energy <= energy + GAS_ENERGY_SLACK:
                break
            step *= 0.5
        else:
            raise NoConvergence(
                f"no energy decrease along the Newton direction at residual {residual:.3e}"
            )
        x, energy = trial, trial_energy
        _check_collisions(x)
        g = _gradient(potential, cfg.T, x)
        residual = float(np.max(np.abs(g)))
        iteration += 1
        logger.debug(f"gas N={cfg.N} iter={iteration} E={energy:.15g} residual={residual:.3e}")

    positions = tuple(float(v) for v in x)
    return GasResult(
        positions=positions,
        residual=residual,
        energy=energy,
        occupancy=0 if barrier is None else int(np.count_nonzero(x > barrier)),
        barrier=barrier,
        potential=potential,
        T=cfg.T,
        iterations=iteration,
    )


def compare_density(gr: GasResult, rd: ResolventData) -> float:
    """
    Kolmogorov distance between the gas and the continuum measure.

    Each charge carries mass T / N; the distance is measured in mass units,
    so it is at most T.

    Raises
    ------
    MismatchedModel
        If the gas and the continuum solution have different potentials or T.
    """
    if gr.potential != rd.potential or not math.isclose(gr.T, rd.T, rel_tol=1e-12):
        raise MismatchedModel(
            f"gas (T = {gr.T}) and continuum (T = {rd.T}) describe different models"
        )
    unit = gr.T / gr.N
    distance = 0.0
    for i, x in enumerate(gr.positions):
        F = cumulative_mass(rd, x)
        distance = max(distance, abs(F - i * unit), abs(F - (i + 1) * unit))
    return distance


def predicted_occupancy(rd: ResolventData, N: int) -> int:
    """round(N m / T) for the newest cut; zero in the one-cut phase."""
    if rd.s == 1:
        return 0
    return int(round(N * cut_masses(rd)[-1] / rd.T))


def metastability_check(
    potential: Potential, cfg: GasConfig, rd: ResolventData, barrier: float
) -> MetastabilityReport:
    """
    Relax once with the new well seeded and once with every charge in the old cut.
    """
    seeded = equilibrium_positions(potential, cfg, rd, barrier)
    old_cut_only = [cfg.N] + [0] * (rd.s - 1)
    unseeded = equilibrium_positions(
        potential, cfg, rd, barrier, initial=quantile_positions(rd, cfg.N, old_cut_only)
    )
    trapped = unseeded.occupancy < seeded.occupancy
    logger.info(
        f"metastability at T={cfg.T:.6g}: seeded {seeded.occupancy} (E={seeded.energy:.10g}), "
        f"unseeded {unseeded.occupancy} (E={unseeded.energy:.10g}), trapped={trapped}"
    )
    return MetastabilityReport(
        seeded=seeded,
        unseeded=unseeded,
        predicted=predicted_occupancy(rd, cfg.N),
        trapped=trapped,
    )


def occupancy_barrier(rd: ResolventData) -> Optional[float]:
    """
    Threshold separating the old cut from the new well.

    One-cut: the barrier in front of the second well, None without one.
    Two-cut: the root of M in the gap with the highest effective potential,
    the middle of the gap if M has none there.
    """
    if rd.s == 1:
        try:
            return second_well_point(rd)[1]
        except NoSecondWell:
            return None
    _, b, c, _ = rd.endpoints
    inside = [r for r in rd.M.real_roots() if b < r < c]
    if not inside:
        return 0.5 * (b + c)
    return max(inside, key=lambda r: effective_potential_gap(rd, r))
