"""
Entrypoint for the cutbirth command-line tool.

Commands
--------
solve
    Equilibrium at one temperature: endpoints, ell, F and cut masses.
critical
    Critical temperature, birth point, nu and Q.
sweep
    Thermodynamic table over a temperature range plus the transition summary.
gas
    Finite-N log-gas positions.

A stored configuration (JSON or TOML, see `run_config`) runs with
`cutbirth --config FILE`. Tables go to standard output as CSV, or to the file
given with `--out`, in which case a readable table is printed instead. Logs
and errors go to standard error; the exit code is 1 on any error.
"""
import logging
import sys

from typing import Any, Dict, List, Optional

import numpy as np
import typer

from termcolor import colored

from cutbirth.applications.cli.output import (
    critical_table,
    emit_csv,
    gas_table,
    render_table,
    solve_table,
    summary_lines,
    summary_path,
    sweep_table,
    write_summary,
)
from cutbirth.applications.cli.run_config import RunConfig, from_mapping, load_config
from cutbirth.core.criticality import (
    CriticalData,
    continue_two_cut,
    find_critical_temperature,
)
from cutbirth.core.default.constants import POINTS_PER_SIDE
from cutbirth.core.equilibrium import (
    ResolventData,
    solve_endpoints,
    thermodynamics,
)
from cutbirth.core.errors import CutBirthError, InsufficientData, NoSecondWell, NotBracketed
from cutbirth.core.gas import (
    GasConfig,
    compare_density,
    equilibrium_positions,
    occupancy_barrier,
    predicted_occupancy,
    quantile_positions,
)
from cutbirth.core.transition import (
    auto_equilibrium,
    derivative_jump,
    run_sweep,
    transition_grid,
)

logger = logging.getLogger(__name__)

app = typer.Typer(
    context_settings={"help_option_names": ["-h", "--help"]}
)  # creates a CLI app


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO, force=True)


def _lower_bracket(T: float) -> float:
    return min(0.05, 0.5 * T)


def _solve(config: RunConfig) -> ResolventData:
    potential = config.model
    if config.cuts is None:
        rd, _ = auto_equilibrium(
            potential, config.T, None if config.bracket is None else tuple(config.bracket)
        )
        return rd
    if config.cuts == 1:
        kwargs = {} if config.tol is None else {"tol": config.tol}
        return solve_endpoints(potential, config.T, 1, **kwargs)
    bracket = tuple(config.bracket) if config.bracket else (_lower_bracket(config.T), config.T)
    crit = find_critical_temperature(potential, bracket)
    return continue_two_cut(potential, crit, config.T)


def _sweep_critical(config: RunConfig) -> Optional[CriticalData]:
    lo, hi, _ = config.trange
    bracket = tuple(config.bracket) if config.bracket else (_lower_bracket(lo), hi)
    try:
        return find_critical_temperature(config.model, bracket)
    except NoSecondWell:
        logger.info("potential has no second well, sweeping the one-cut phase")
    except NotBracketed as error:
        if error.gap_hi is None or error.gap_hi <= 0:
            raise
        logger.info(f"no critical point below T = {hi:.6g}, sweeping the one-cut phase")
    return None


def _sweep_grid(config: RunConfig, crit: Optional[CriticalData]) -> List[float]:
    lo, hi, points = config.trange
    grid = set(float(T) for T in np.linspace(lo, hi, int(points)))
    if crit is not None:
        grid.update(
            T for T in transition_grid(crit.T_c, config.window, POINTS_PER_SIDE) if lo <= T <= hi
        )
        grid.discard(crit.T_c)
    return sorted(grid)


def _emit(config: RunConfig, header, rows) -> None:
    if config.out is None:
        emit_csv(header, rows, stream=sys.stdout)
        return
    emit_csv(header, rows, path=config.out)
    typer.echo(render_table(header, rows))
    logger.info(f"wrote {config.out}")


def _run_solve(config: RunConfig) -> None:
    rd = _solve(config)
    _emit(config, *solve_table(rd, thermodynamics(rd)))


def _run_critical(config: RunConfig) -> None:
    crit = find_critical_temperature(config.model, tuple(config.bracket))
    _emit(config, *critical_table(crit))


def _run_sweep(config: RunConfig) -> None:
    crit = _sweep_critical(config)
    rows = run_sweep(config.model, _sweep_grid(config, crit), crit)
    _emit(config, *sweep_table(rows))
    if crit is None:
        return
    try:
        report = derivative_jump(rows, crit.T_c, config.window * crit.T_c, nu=crit.nu)
    except InsufficientData as error:
        logger.warning(f"transition summary skipped: {error}")
        return
    if config.out is None:
        for line in summary_lines(report):
            typer.echo(line, err=True)
    else:
        write_summary(report, summary_path(config.out))


def _run_gas(config: RunConfig) -> None:
    potential = config.model
    rd, _ = auto_equilibrium(
        potential, config.T, None if config.bracket is None else tuple(config.bracket)
    )
    barrier = occupancy_barrier(rd)
    kwargs: Dict[str, Any] = {} if config.tol is None else {"tol": config.tol}
    cfg = GasConfig(N=config.N, T=config.T, **kwargs)
    counts = None if config.seed_occupancy else [config.N] + [0] * (rd.s - 1)
    gr = equilibrium_positions(
        potential, cfg, rd, barrier, initial=quantile_positions(rd, config.N, counts)
    )
    logger.info(
        f"gas: occupancy {gr.occupancy} (continuum predicts {predicted_occupancy(rd, config.N)}), "
        f"Kolmogorov distance {compare_density(gr, rd):.3e}"
    )
    _emit(config, *gas_table(gr))


RUNNERS = {
    "solve": _run_solve,
    "critical": _run_critical,
    "sweep": _run_sweep,
    "gas": _run_gas,
}


def execute(config: RunConfig) -> None:
    RUNNERS[config.mode](config)


def _guarded(run) -> None:
    try:
        run()
    except CutBirthError as error:
        typer.echo(colored(f"error: {error}", "red"), err=True)
        raise typer.Exit(code=1)


def _dispatch(data: Dict[str, Any], verbose: bool) -> None:
    if verbose:
        configure_logging(verbose)
    _guarded(lambda: execute(from_mapping({k: v for k, v in data.items() if v is not None})))


@app.callback(invoke_without_command=True)
def main(
    ctx: typer.Context,
    config: Optional[str] = typer.Option(
        None, "--config", help="JSON or TOML file with a stored run configuration."
    ),
    verbose: bool = typer.Option(
        False, "--verbose", "-v", help="Enable verbose logging for debugging."
    ),
):
    """
    Numerical lab for the birth of a cut in one-matrix models.
    """
    configure_logging(verbose)
    if config is not None:
        if ctx.invoked_subcommand is not None:
            typer.echo(colored("error: --config cannot be combined with a command", "red"), err=True)
            raise typer.Exit(code=1)
        _guarded(lambda: execute(load_config(config)))
        raise typer.Exit()
    if ctx.invoked_subcommand is None:
        typer.echo(ctx.get_help())
        raise typer.Exit()


POTENTIAL = typer.Option(
    ..., "--potential", help="Coefficients lowest degree first (e.g. 0,0,0.5) or a preset name."
)
OUT = typer.Option(None, "--out", help="Write the CSV table to this file.")
VERBOSE = typer.Option(False, "--verbose", "-v", help="Enable verbose logging for debugging.")


@app.command()
def solve(
    potential: str = POTENTIAL,
    temp: float = typer.Option(..., "--temp", help="Temperature T (total spectral mass)."),
    cuts: Optional[int] = typer.Option(None, "--cuts", help="Force 1 or 2 cuts."),
    bracket: Optional[str] = typer.Option(
        None, "--bracket", help="lo,hi searched for T_c when two cuts are needed."
    ),
    tol: Optional[float] = typer.Option(None, "--tol", help="Residual tolerance of a one-cut solve."),
    out: Optional[str] = OUT,
    verbose: bool = VERBOSE,
):
    """Solve the equilibrium at one temperature."""
    _dispatch(
        dict(potential=potential, mode="solve", T=temp, cuts=cuts, bracket=bracket, tol=tol, out=out),
        verbose,
    )


@app.command()
def critical(
    potential: str = POTENTIAL,
    bracket: Optional[str] = typer.Option(None, "--bracket", help="lo,hi temperature bracket."),
    out: Optional[str] = OUT,
    verbose: bool = VERBOSE,
):
    """Locate the critical temperature where a new cut is born."""
    _dispatch(dict(potential=potential, mode="critical", bracket=bracket, out=out), verbose)


@app.command()
def sweep(
    potential: str = POTENTIAL,
    trange: str = typer.Option(..., "--trange", help="lo,hi,n uniform temperature grid."),
    window: Optional[float] = typer.Option(
        None, "--window", help="Fit window around T_c as a fraction of T_c (default 0.08)."
    ),
    bracket: Optional[str] = typer.Option(None, "--bracket", help="lo,hi searched for T_c."),
    out: Optional[str] = OUT,
    verbose: bool = VERBOSE,
):
    """Sweep temperature across T_c and summarise the transition."""
    _dispatch(
        dict(potential=potential, mode="sweep", trange=trange, window=window, bracket=bracket, out=out),
        verbose,
    )


@app.command()
def gas(
    potential: str = POTENTIAL,
    temp: float = typer.Option(..., "--temp", help="Temperature T."),
    n: int = typer.Option(..., "--n", help="Number of eigenvalues N."),
    seed_occupancy: bool = typer.Option(
        False, "--seed-occupancy", help="Seed the new well with its predicted occupancy."
    ),
    tol: Optional[float] = typer.Option(None, "--tol", help="Force residual tolerance."),
    bracket: Optional[str] = typer.Option(None, "--bracket", help="lo,hi searched for T_c."),
    out: Optional[str] = OUT,
    verbose: bool = VERBOSE,
):
    """Relax the finite-N log-gas."""
    _dispatch(
        dict(
            potential=potential,
            mode="gas",
            T=temp,
            N=n,
            seed_occupancy=seed_occupancy,
            tol=tol,
            bracket=bracket,
            out=out,
        ),
        verbose,
    )


if __name__ == "__main__":
    app()
