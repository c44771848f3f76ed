"""
Birth of a new cut: the second well, the critical temperature and the two-cut branch.

Below T_c the one-cut effective potential has a local minimum e beyond the
support whose height Gamma(e) above the Fermi level is positive. T_c is the
temperature at which Gamma(e) reaches zero; there the moment polynomial
factors as (x - e)^(2 nu - 1) Q(x). Above T_c a second cut grows around e.

Classes
-------
CriticalData
    Critical temperature, birth point, nu, Q and the one-cut solution at T_c.

Functions
---------
second_well_point(rd) -> (e, barrier)
fermi_gap(potential, T) -> float
find_critical_temperature(potential, bracket) -> CriticalData
classify_nu(M, e) -> (nu, Q)
continuation_schedule(T_c, T_to, T_from) -> list of float
continue_two_cut(potential, crit, T, start) -> ResolventData
"""
import logging
import math

from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from scipy.optimize import brentq

from cutbirth.core.algebra import Poly
from cutbirth.core.default.constants import (
    BIRTH_WIDTH_FRACTION,
    BISECTION_RATIO,
    CONTINUATION_RELATIVE_STEP,
    CRITICAL_TOLERANCE,
    DEFAULT_BRACKET,
    FIRST_CONTINUATION_STEP,
    MAX_BISECTIONS,
    NU_TOLERANCE,
    SEED_WIDTH_FACTORS,
)
from cutbirth.core.equilibrium import (
    Potential,
    ResolventData,
    effective_potential_gap,
    scaled_one_cut_guess,
    solve_endpoints,
)
from cutbirth.core.errors import (
    BelowCritical,
    EvenOrderZero,
    NegativeDensity,
    NoConvergence,
    NoSecondWell,
    NotBracketed,
    NotCritical,
    OrderingViolated,
    SolverError,
    ValidationError,
)
from cutbirth.core.quadrature import sqrt_sigma_boundary

logger = logging.getLogger(__name__)

# step-halving retries of one continuation step
_MAX_STEP_RETRIES = 4


@dataclass(frozen=True)
class CriticalData:
    """
    Result of `find_critical_temperature`.

    Attributes
    ----------
    T_c : float
        Temperature at which the second well touches the Fermi level.
    e : float
        Birth point, the root of M at T_c beyond the support.
    nu : int
        Criticality integer, M = (x - e)^(2 nu - 1) Q(x).
    Q : Poly
        Remainder polynomial, Q(e) != 0.
    barrier : float
        Local maximum of the effective potential between the support and e.
    distance : float
        e - b(T_c).
    resolvent : ResolventData
        One-cut solution at T_c.
    gap : float
        |Gamma(e)| at T_c.
    """

    T_c: float
    e: float
    nu: int
    Q: Poly
    barrier: float
    distance: float
    resolvent: ResolventData
    gap: float

    @property
    def b(self) -> float:
        return self.resolvent.endpoints[-1]


class _GapState(NamedTuple):
    rd: ResolventData
    e: float
    barrier: float
    gap: float


def _sign_changes(m: Poly, start: float) -> List[Tuple[float, int]]:
    """Roots of m beyond `start` where m changes sign, tagged +1 for - to + and -1 for + to -."""
    roots = sorted(set(r for r in m.real_roots() if r > start))
    if not roots:
        return []
    midpoints = [0.5 * (start + roots[0])]
    midpoints += [0.5 * (p + q) for p, q in zip(roots, roots[1:])]
    midpoints.append(roots[-1] + 1.0)
    signs = np.sign(m(np.array(midpoints)))
    changes = []
    for k, root in enumerate(roots):
        if signs[k] < 0 < signs[k + 1]:
            changes.append((root, 1))
        elif signs[k] > 0 > signs[k + 1]:
            changes.append((root, -1))
    return changes


def second_well_point(rd: ResolventData) -> Tuple[float, float]:
    """
    Locate the local minimum e of the effective potential beyond the support.

    Parameters
    ----------
    rd : ResolventData
        Valid one-cut solution.

    Returns
    -------
    tuple of float
        (e, barrier): a root of M where it turns from negative to positive and
        the nearest root below it where M turns from positive to negative. With
        several wells the one with the smallest Gamma(e) is returned.

    Raises
    ------
    NoSecondWell
        If M has no such sign change beyond the support.
    """
    b = rd.endpoints[-1]
    changes = _sign_changes(rd.M, b)
    candidates = []
    for k, (root, direction) in enumerate(changes):
        if direction < 0:
            continue
        below = [r for r, d in changes[:k] if d < 0]
        if not below:
            continue
        candidates.append((effective_potential_gap(rd, root), root, below[-1]))
    if not candidates:
        raise NoSecondWell(
            f"no local minimum of the effective potential beyond b = {b:.6g} at T = {rd.T}"
        )
    _, e, barrier = min(candidates)
    return e, barrier


def _gap_state(
    potential: Potential, T: float, init: Optional[Sequence[float]] = None
) -> _GapState:
    rd = solve_endpoints(potential, T, 1, init)
    e, barrier = second_well_point(rd)
    return _GapState(rd, e, barrier, effective_potential_gap(rd, e))


def fermi_gap(
    potential: Potential, T: float, init: Optional[Sequence[float]] = None
) -> float:
    """
    Gamma(T), the height of the second well above the Fermi level in the one-cut phase.

    Raises
    ------
    NoSecondWell
        If the one-cut solution has no second well.
    """
    return _gap_state(potential, T, init).gap


def _try_state(
    potential: Potential, T: float, seed_from: _GapState
) -> Optional[_GapState]:
    """One-cut state at T, or None when the one-cut phase is unusable there."""
    try:
        return _gap_state(potential, T, scaled_one_cut_guess(seed_from.rd, T))
    except (NegativeDensity, NoSecondWell) as error:
        logger.debug(f"one-cut phase unusable at T={T:.12g}: {error}")
        return None
    except (NoConvergence, OrderingViolated):
        pass
    try:
        return _gap_state(potential, T)
    except (SolverError, NoSecondWell) as error:
        logger.debug(f"one-cut solve failed at T={T:.12g}: {error}")
        return None


def classify_nu(M: Poly, e: float, reach: float = 1.0) -> Tuple[int, Poly]:
    """
    Count the vanishing derivatives of M at e and split off (x - e)^k.

    Parameters
    ----------
    M : Poly
        Moment polynomial at T_c.
    e : float
        Birth point.
    reach : float
        Length scale |e - b| entering the zero tolerance.

    Returns
    -------
    tuple of (int, Poly)
        nu with k = 2 nu - 1 vanishing derivatives, and Q = M / (x - e)^k.

    Raises
    ------
    NotCritical
        If M(e) is not zero.
    EvenOrderZero
        If an even number of derivatives vanish.
    """
    if M.is_zero:
        raise ValueError("cannot classify the zero polynomial")
    tol = NU_TOLERANCE * max(1.0, M.norm * reach**M.degree)
    k = 0
    while k < M.degree and abs(float(M.deriv(k)(e))) < tol:
        k += 1
    if k == 0:
        raise NotCritical(f"M({e:.12g}) = {float(M(e)):.3e} does not vanish")
    if k % 2 == 0:
        raise EvenOrderZero(f"M has a zero of even order {k} at {e:.12g}")
    Q, _ = M.deflate(e, k)
    return (k + 1) // 2, Q


def find_critical_temperature(
    potential: Potential, bracket: Tuple[float, float] = DEFAULT_BRACKET
) -> CriticalData:
    """
    Find T_c where Gamma(T) crosses zero.

    Log-scale bisection narrows the bracket until its relative width is below
    1e-3 with a valid one-cut state at the upper end; temperatures where the
    one-cut phase is unusable count as above T_c. Brent's method finishes.

    Parameters
    ----------
    potential : Potential
    bracket : tuple of float
        (T_lo, T_hi) with Gamma(T_lo) > 0 > Gamma(T_hi).

    Returns
    -------
    CriticalData

    Raises
    ------
    NotBracketed
        If Gamma does not change sign on the bracket, or the one-cut phase
        breaks down before Gamma reaches zero.
    NoSecondWell
        If the lower end has no second well.
    NoConvergence
        If |Gamma| at the root still exceeds CRITICAL_TOLERANCE.
    """
    lo, hi = (float(t) for t in bracket)
    if not 0.0 < lo < hi:
        raise ValidationError(f"bracket must satisfy 0 < lo < hi, got {bracket}", key="bracket")

    state_lo = _gap_state(potential, lo)
    if state_lo.gap <= 0.0:
        raise NotBracketed(
            f"Gamma({lo:.6g}) = {state_lo.gap:.3e} is not positive; lower end is above T_c",
            gap_lo=state_lo.gap,
        )
    state_hi = _try_state(potential, hi, state_lo)
    if state_hi is not None and state_hi.gap > 0.0:
        raise NotBracketed(
            f"Gamma({hi:.6g}) = {state_hi.gap:.3e} is positive; upper end is below T_c",
            gap_lo=state_lo.gap,
            gap_hi=state_hi.gap,
        )

    for _ in range(MAX_BISECTIONS):
        if hi / lo - 1.0 < BISECTION_RATIO and state_hi is not None:
            break
        mid = math.sqrt(lo * hi)
        state_mid = _try_state(potential, mid, state_lo)
        if state_mid is None or state_mid.gap <= 0.0:
            hi, state_hi = mid, state_mid
        else:
            lo, state_lo = mid, state_mid
        logger.debug(
            f"bisection [{lo:.12g}, {hi:.12g}] Gamma_lo={state_lo.gap:.3e} "
            f"Gamma_hi={'invalid' if state_hi is None else f'{state_hi.gap:.3e}'}"
        )
    else:
        raise NotBracketed(
            f"one-cut phase breaks down near T = {lo:.12g} before the second well "
            "reaches the Fermi level",
            gap_lo=state_lo.gap,
        )

    anchor = state_lo

    def gap_at(T: float) -> float:
        return _gap_state(potential, T, scaled_one_cut_guess(anchor.rd, T)).gap

    if state_hi.gap == 0.0:
        T_c = hi
    else:
        T_c = brentq(gap_at, lo, hi, xtol=1e-14)
    final = _gap_state(potential, T_c, scaled_one_cut_guess(anchor.rd, T_c))
    if abs(final.gap) > CRITICAL_TOLERANCE:
        raise NoConvergence(
            f"|Gamma(T_c)| = {abs(final.gap):.3e} at T_c = {T_c:.12g} exceeds {CRITICAL_TOLERANCE:.0e}"
        )
    b = final.rd.endpoints[-1]
    nu, Q = classify_nu(final.rd.M, final.e, reach=abs(final.e - b))
    logger.info(
        f"T_c = {T_c:.12g}: e = {final.e:.10g}, barrier = {final.barrier:.10g}, "
        f"nu = {nu}, |Gamma| = {abs(final.gap):.2e}"
    )
    return CriticalData(
        T_c=T_c,
        e=final.e,
        nu=nu,
        Q=Q,
        barrier=final.barrier,
        distance=final.e - b,
        resolvent=final.rd,
        gap=abs(final.gap),
    )


def continuation_schedule(
    T_c: float, T_to: float, T_from: Optional[float] = None
) -> List[float]:
    """
    Temperatures visited when continuing the two-cut branch up to `T_to`.

    Starting from T_c (1 + 1e-4), or after `T_from` when resuming, each step is
    min(T - T_c, 0.01 T): geometric close to T_c, relative further out. The last
    entry is exactly `T_to`.
    """
    if T_to <= T_c:
        raise BelowCritical(f"T = {T_to:.17g} is not above T_c = {T_c:.17g}")
    if T_from is None or not T_c < T_from < T_to:
        current = T_c + min(T_to - T_c, FIRST_CONTINUATION_STEP * T_c)
        schedule = [current]
    else:
        current = T_from
        schedule = []
    while current < T_to:
        current = min(T_to, current + min(current - T_c, CONTINUATION_RELATIVE_STEP * current))
        schedule.append(current)
    return schedule


def effective_curvature(rd: ResolventData, x: float) -> float:
    """V_eff''(x) off the support, by central differences of Gamma' = M sqrt(sigma)."""
    h = 1e-5 * (1.0 + abs(x))

    def slope(t: float) -> float:
        return float(rd.M(t)) * float(np.real(sqrt_sigma_boundary(t, rd.endpoints)))

    return (slope(x + h) - slope(x - h)) / (2.0 * h)


def _birth_seeds(crit: CriticalData, T: float) -> List[Tuple[float, ...]]:
    a, b = crit.resolvent.endpoints
    curvature = effective_curvature(crit.resolvent, crit.e)
    kappa = 2.0 / math.sqrt(curvature) if curvature > 0 else 1.0
    h = min(BIRTH_WIDTH_FRACTION * (crit.e - b), kappa * math.sqrt(T - crit.T_c))
    return [
        (a, b, crit.e - factor * h, crit.e + factor * h) for factor in SEED_WIDTH_FACTORS
    ]


def _rescaled_seeds(
    previous: ResolventData, T_c: float, T: float
) -> List[Tuple[float, ...]]:
    a, b, c, d = previous.endpoints
    center, half = 0.5 * (c + d), 0.5 * (d - c)
    half *= math.sqrt((T - T_c) / (previous.T - T_c))
    return [(a, b, center - half, center + half), (a, b, c, d)]


def _solve_from_seeds(
    potential: Potential, T: float, seeds: Sequence[Tuple[float, ...]]
) -> ResolventData:
    errors = []
    for seed in seeds:
        try:
            return solve_endpoints(potential, T, 2, seed)
        except SolverError as error:
            logger.warning(f"two-cut seed {seed} failed at T={T:.12g}: {error}")
            errors.append(error)
    raise NoConvergence(
        f"two-cut solve failed at T = {T:.17g} from {len(seeds)} seeds: {errors[-1]}"
    )


def continue_two_cut(
    potential: Potential,
    crit: CriticalData,
    T: float,
    start: Optional[ResolventData] = None,
) -> ResolventData:
    """
    Follow the two-cut branch from T_c up to T.

    Parameters
    ----------
    potential : Potential
    crit : CriticalData
        Critical point of the same potential.
    T : float
        Target temperature, strictly above T_c.
    start : ResolventData, optional
        Two-cut solution at a temperature between T_c and T to resume from.

    Returns
    -------
    ResolventData
        Converged two-cut solution at T.

    Raises
    ------
    BelowCritical
        If T <= T_c.
    NoConvergence
        If a continuation step fails from every seed and every step halving.
    """
    T_c = crit.T_c
    if T <= T_c:
        raise BelowCritical(f"T = {T:.17g} is not above T_c = {T_c:.17g}")
    if start is not None and not (start.s == 2 and T_c < start.T <= T):
        start = None
    if start is not None and start.T == T:
        return start

    previous = start
    for target in continuation_schedule(T_c, T, None if start is None else start.T):
        previous = _continuation_step(potential, crit, previous, target)
        logger.debug(
            f"two-cut T={target:.12g} endpoints={previous.endpoints} iter={previous.iterations}"
        )
    return previous


def _continuation_step(
    potential: Potential,
    crit: CriticalData,
    previous: Optional[ResolventData],
    target: float,
) -> ResolventData:
    if previous is None:
        return _solve_from_seeds(potential, target, _birth_seeds(crit, target))

    # on failure, retry from the last converged point with half the distance to go
    current, goal = previous, target
    halvings = 0
    while True:
        try:
            rd = _solve_from_seeds(
                potential, goal, _rescaled_seeds(current, crit.T_c, goal)
            )
        except NoConvergence:
            if halvings == _MAX_STEP_RETRIES:
                raise
            halvings += 1
            goal = 0.5 * (current.T + goal)
            logger.warning(f"halving continuation step, next try at T={goal:.12g}")
            continue
        if goal == target:
            return rd
        current, goal = rd, target
