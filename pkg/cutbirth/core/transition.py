"""
Temperature sweeps across T_c and the order of the transition.

`run_sweep` tabulates ell = F' and F on both sides of the critical point,
`derivative_jump` fits each side separately and measures how far F, F', F''
and F''' disagree at T_c, and `newcut_width_scaling` measures the growth
exponent of the newborn cut.
"""
import logging
import math

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from dataclasses_json import dataclass_json

from cutbirth.core.criticality import (
    CriticalData,
    continue_two_cut,
    find_critical_temperature,
)
from cutbirth.core.default.constants import (
    NEAREST_GRID_FRACTION,
    POINTS_PER_SIDE,
    WIDTH_SCALING_RANGE,
    WINDOW_FRACTION,
)
from cutbirth.core.equilibrium import (
    Potential,
    ResolventData,
    scaled_one_cut_guess,
    solve_endpoints,
    thermodynamics,
    validate_phase,
)
from cutbirth.core.errors import (
    CutBirthError,
    InsufficientData,
    NegativeDensity,
    SolverError,
    SweepError,
    WrongPhase,
)

logger = logging.getLogger(__name__)

ONE_CUT = "one-cut"
TWO_CUT = "two-cut"

# rows needed on each side of T_c for the side-wise fits
MIN_ROWS_PER_SIDE = 5
MIN_WIDTH_ROWS = 4


@dataclass(frozen=True)
class SweepRow:
    T: float
    phase: str
    endpoints: Tuple[float, ...]
    ell: float
    F: float
    new_cut_mass: float = 0.0


@dataclass_json
@dataclass
class TransitionReport:
    """
    Continuity residuals of F, F', F'' at T_c and the jump of F'''.

    Every residual comes with a noise estimate propagated from the side-wise
    fit residuals; a residual is compatible with zero when it stays within a
    small multiple of its estimate.
    """

    T_c: float
    cont_F: float
    cont_F1: float
    cont_F2: float
    jump_F3: float
    cont_F_err: float
    cont_F1_err: float
    cont_F2_err: float
    jump_F3_err: float
    alpha: Optional[float] = None
    alpha_err: Optional[float] = None
    nu: Optional[int] = None
    n_below: int = 0
    n_above: int = 0
    window: float = field(default=0.0)
    log_amplitude: Optional[float] = None
    log_amplitude_err: Optional[float] = None


def transition_grid(
    T_c: float,
    window_fraction: float = WINDOW_FRACTION,
    points_per_side: int = POINTS_PER_SIDE,
) -> List[float]:
    """
    Sweep grid around T_c, geometric towards T_c and excluding it.

    Offsets run from window_fraction * T_c down to 1/32 of that on each side.
    """
    if points_per_side < 2:
        raise ValueError(f"need at least two points per side, got {points_per_side}")
    window = window_fraction * T_c
    ratio = NEAREST_GRID_FRACTION ** (1.0 / (points_per_side - 1))
    offsets = window * ratio ** np.arange(points_per_side)
    return [float(T_c - o) for o in offsets] + [float(T_c + o) for o in offsets[::-1]]


def equilibrium_at(
    potential: Potential,
    T: float,
    crit: Optional[CriticalData] = None,
    start: Optional[ResolventData] = None,
) -> ResolventData:
    """
    Solve at T in the phase selected by `crit`.

    One-cut (checked with `validate_phase`) below T_c or without a critical
    point, two-cut continuation above. `start` seeds the solve with a
    neighbouring solution of the same phase.

    Raises
    ------
    WrongPhase
        If the one-cut solution fails validation.
    """
    if crit is not None and T == crit.T_c:
        return crit.resolvent
    if crit is not None and T > crit.T_c:
        two_cut = start if start is not None and start.s == 2 else None
        return continue_two_cut(potential, crit, T, start=two_cut)

    init = None
    if start is not None and start.s == 1:
        init = scaled_one_cut_guess(start, T)
    rd = solve_endpoints(potential, T, 1, init)
    verdict = validate_phase(rd)
    if not verdict.valid:
        raise WrongPhase(
            f"one-cut solution at T = {T:.17g} is not the equilibrium: {verdict.reason}",
            location=verdict.location,
        )
    return rd


def auto_equilibrium(
    potential: Potential,
    T: float,
    bracket: Optional[Tuple[float, float]] = None,
) -> Tuple[ResolventData, Optional[CriticalData]]:
    """
    Equilibrium at T with the phase chosen automatically.

    Returns the valid one-cut solution when there is one. Otherwise locates
    T_c in `bracket` (default (min(0.05, T/2), T)) and continues the two-cut
    branch up to T.

    Returns
    -------
    tuple of (ResolventData, CriticalData or None)
        The solution and, when it is two-cut, the critical point it came from.
    """
    try:
        return equilibrium_at(potential, T), None
    except (WrongPhase, NegativeDensity) as error:
        logger.info(f"one-cut phase rejected at T={T:.12g}: {error}")
    except SolverError as error:
        logger.warning(f"one-cut solve failed at T={T:.12g}: {error}")
    bracket = bracket or (min(0.05, 0.5 * T), T)
    crit = find_critical_temperature(potential, bracket)
    return continue_two_cut(potential, crit, T), crit


def _row(rd: ResolventData) -> SweepRow:
    thermo = thermodynamics(rd)
    return SweepRow(
        T=rd.T,
        phase=ONE_CUT if rd.s == 1 else TWO_CUT,
        endpoints=rd.endpoints,
        ell=thermo.ell,
        F=thermo.F,
        new_cut_mass=thermo.masses[1] if rd.s == 2 else 0.0,
    )


def run_sweep(
    potential: Potential,
    T_grid: Sequence[float],
    crit: Optional[CriticalData] = None,
) -> List[SweepRow]:
    """
    Tabulate the equilibrium over a sorted temperature grid.

    Parameters
    ----------
    potential : Potential
    T_grid : sequence of float
        Strictly increasing positive temperatures, T_c excluded.
    crit : CriticalData, optional
        Critical point; without it every row is one-cut.

    Returns
    -------
    list of SweepRow

    Raises
    ------
    SweepError
        Wrapping the first failing solve, with its temperature.
    """
    grid = [float(T) for T in T_grid]
    if any(T <= 0.0 for T in grid):
        raise ValueError("sweep temperatures must be positive")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("sweep temperatures must be strictly increasing")
    if crit is not None and crit.T_c in grid:
        raise ValueError(f"the sweep grid must exclude T_c = {crit.T_c:.17g}")

    rows = []
    previous = None
    for T in grid:
        try:
            rd = equilibrium_at(potential, T, crit, start=previous)
            rows.append(_row(rd))
        except CutBirthError as error:
            raise SweepError(T, error) from error
        previous = rd
        logger.debug(f"sweep row T={T:.12g} {rows[-1].phase} ell={rows[-1].ell:.12g}")
    logger.info(f"sweep finished: {len(rows)} rows")
    return rows


def _least_squares(X: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Least-squares coefficients of the columns of X and their variances."""
    coeffs, _, _, _ = np.linalg.lstsq(X, y, rcond=None)
    dof = X.shape[0] - X.shape[1]
    residual = y - X @ coeffs
    sigma2 = float(residual @ residual) / dof if dof > 0 else 0.0
    covariance = sigma2 * np.linalg.pinv(X.T @ X)
    return coeffs, np.diag(covariance)


def _side_fit(x: np.ndarray, y: np.ndarray, degree: int) -> Tuple[np.ndarray, np.ndarray]:
    """Polynomial coefficients (lowest first) and their variances."""
    return _least_squares(np.vander(x, degree + 1, increasing=True), y)


def _birth_fit(
    x: np.ndarray, y: np.ndarray, degree: int, T_c: float
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Polynomial of `degree` plus x**(degree - 1) / ln(x / T_c), the last coefficient last.

    A newborn cut of mass ~ x / |ln x| adds x**2 / ln x to F above T_c, so
    the correction vanishes at T_c together with its first derivative.
    """
    X = np.vander(x, degree + 1, increasing=True)
    log_column = x ** (degree - 1) / np.log(x / T_c)
    return _least_squares(np.column_stack([X, log_column]), y)


def _uncertainty(variance: float, value: float) -> float:
    floor = np.finfo(float).eps * (1.0 + abs(value))
    return max(2.0 * math.sqrt(max(variance, 0.0)), floor)


def _window_rows(
    rows: Sequence[SweepRow], T_c: float, window: float
) -> Tuple[List[SweepRow], List[SweepRow]]:
    reach = window * (1.0 + 1e-9)
    below = [r for r in rows if T_c - reach <= r.T < T_c]
    above = [r for r in rows if T_c < r.T <= T_c + reach]
    return below, above


def derivative_jump(
    rows: Sequence[SweepRow],
    T_c: float,
    window: Optional[float] = None,
    nu: Optional[int] = None,
    log_corrected: bool = True,
) -> TransitionReport:
    """
    Measure continuity of F, F', F'' and the jump of F''' at T_c.

    Quadratics in x = T - T_c are fitted to ell separately below and above
    T_c; their constant, linear and doubled quadratic coefficients give F',
    F'' and F''' at T_c from each side. F itself is fitted with cubics.

    When the rows above T_c are two-cut and `log_corrected` is set, both fits
    above T_c gain the newborn-cut term x**k / ln(x / T_c) (k = 1 for ell,
    k = 2 for F). Its ell coefficient is reported as `log_amplitude`; the
    polynomial part then carries the one-sided limits.

    Parameters
    ----------
    rows : sequence of SweepRow
    T_c : float
    window : float, optional
        Half-width of the fit window, default 0.08 T_c.
    nu : int, optional
        Criticality integer copied into the report.
    log_corrected : bool, default=True
        Add the logarithmic newborn-cut term to the fits above T_c.

    Raises
    ------
    InsufficientData
        If either side has fewer than five rows in the window.
    """
    window = WINDOW_FRACTION * T_c if window is None else window
    below, above = _window_rows(rows, T_c, window)
    if len(below) < MIN_ROWS_PER_SIDE or len(above) < MIN_ROWS_PER_SIDE:
        raise InsufficientData(
            f"need {MIN_ROWS_PER_SIDE} rows on each side of T_c within {window:.3g}, "
            f"got {len(below)} below and {len(above)} above"
        )

    fits = {}
    for side, chosen in (("below", below), ("above", above)):
        x = np.array([r.T for r in chosen]) - T_c
        ell = np.array([r.ell for r in chosen])
        F = np.array([r.F for r in chosen])
        if side == "above" and log_corrected and any(r.phase == TWO_CUT for r in chosen):
            fits[side, "ell"] = _birth_fit(x, ell, 2, T_c)
            fits[side, "F"] = _birth_fit(x, F, 3, T_c)
        else:
            fits[side, "ell"] = _side_fit(x, ell, 2)
            fits[side, "F"] = _side_fit(x, F, 3)

    (l_lo, lv_lo), (l_hi, lv_hi) = fits["below", "ell"], fits["above", "ell"]
    (f_lo, fv_lo), (f_hi, fv_hi) = fits["below", "F"], fits["above", "F"]

    cont_F = abs(f_hi[0] - f_lo[0])
    cont_F1 = abs(l_hi[0] - l_lo[0])
    cont_F2 = abs(l_hi[1] - l_lo[1])
    jump_F3 = 2.0 * (l_hi[2] - l_lo[2])

    log_amplitude = log_amplitude_err = None
    if l_hi.size > 3:
        log_amplitude = float(l_hi[3])
        log_amplitude_err = _uncertainty(lv_hi[3], log_amplitude)

    alpha = alpha_err = None
    try:
        alpha, alpha_err = newcut_width_scaling(rows, T_c)
    except InsufficientData as error:
        logger.warning(f"width exponent skipped: {error}")

    report = TransitionReport(
        T_c=T_c,
        cont_F=float(cont_F),
        cont_F1=float(cont_F1),
        cont_F2=float(cont_F2),
        jump_F3=float(jump_F3),
        cont_F_err=_uncertainty(fv_lo[0] + fv_hi[0], cont_F),
        cont_F1_err=_uncertainty(lv_lo[0] + lv_hi[0], cont_F1),
        cont_F2_err=_uncertainty(lv_lo[1] + lv_hi[1], cont_F2),
        jump_F3_err=2.0 * _uncertainty(lv_lo[2] + lv_hi[2], 0.5 * jump_F3),
        alpha=alpha,
        alpha_err=alpha_err,
        log_amplitude=log_amplitude,
        log_amplitude_err=log_amplitude_err,
        nu=nu,
        n_below=len(below),
        n_above=len(above),
        window=window,
    )
    logger.info(
        f"transition at T_c={T_c:.12g}: jump F'''={report.jump_F3:.6g} "
        f"+/- {report.jump_F3_err:.2g}"
    )
    return report


def newcut_width_scaling(rows: Sequence[SweepRow], T_c: float) -> Tuple[float, float]:
    """
    Exponent alpha in d - c ~ (T - T_c)^alpha.

    Uses the two-cut rows with 1 < T / T_c <= 1.1.

    Returns
    -------
    tuple of float
        The least-squares slope of ln(d - c) against ln(T - T_c) and its standard error.
    """
    chosen = [
        r
        for r in rows
        if r.phase == TWO_CUT and len(r.endpoints) == 4 and 1.0 < r.T / T_c <= WIDTH_SCALING_RANGE
    ]
    if len(chosen) < MIN_WIDTH_ROWS:
        raise InsufficientData(
            f"need {MIN_WIDTH_ROWS} two-cut rows with T/T_c in (1, {WIDTH_SCALING_RANGE}], "
            f"got {len(chosen)}"
        )
    x = np.log([r.T - T_c for r in chosen])
    y = np.log([r.endpoints[3] - r.endpoints[2] for r in chosen])
    coeffs, variances = _side_fit(x, y, 1)
    stderr = max(math.sqrt(max(variances[1], 0.0)), np.finfo(float).eps * abs(coeffs[1]))
    return float(coeffs[1]), float(stderr)


def transition_report(
    potential: Potential,
    crit: Optional[CriticalData] = None,
    window_fraction: float = WINDOW_FRACTION,
    points_per_side: int = POINTS_PER_SIDE,
    bracket: Optional[Tuple[float, float]] = None,
) -> Tuple[TransitionReport, List[SweepRow]]:
    """Locate T_c if needed, sweep the default grid around it and measure the transition."""
    if crit is None:
        crit = (
            find_critical_temperature(potential)
            if bracket is None
            else find_critical_temperature(potential, bracket)
        )
    rows = run_sweep(potential, transition_grid(crit.T_c, window_fraction, points_per_side), crit)
    report = derivative_jump(rows, crit.T_c, window_fraction * crit.T_c, nu=crit.nu)
    return report, rows
