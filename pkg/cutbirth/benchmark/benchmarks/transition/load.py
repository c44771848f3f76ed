"""
Order of the transition: continuity of F, F', F'' and the jump of F'''.

Functions
---------
load_transition : function
    Sweeps the default window around T_c, repeats on a halved grid, checks the
    Maxwell identity on uniform grids and the byte-identity of reruns.
"""
import numpy as np

from cutbirth.applications.cli.output import render_csv, sweep_table
from cutbirth.benchmark.bench_config import TransitionConfig
from cutbirth.benchmark.benchmarks.common import critical_point, preset_potential
from cutbirth.benchmark.types import Benchmark, Task
from cutbirth.core.transition import (
    derivative_jump,
    run_sweep,
    transition_grid,
    transition_report,
)

MAXWELL_STEP = 1e-3


def _third_order(config: TransitionConfig):
    def run():
        potential = preset_potential(config.preset)
        crit = critical_point(config.preset)
        report, _ = transition_report(
            potential, crit, config.window, config.points_per_side
        )
        fine_grid = transition_grid(crit.T_c, config.window, 2 * config.points_per_side - 1)
        fine = derivative_jump(
            run_sweep(potential, fine_grid, crit), crit.T_c, config.window * crit.T_c, crit.nu
        )
        return {**report.to_dict(), "jump_F3_fine": fine.jump_F3}

    return run


def _maxwell(config: TransitionConfig):
    # Richardson pair of centred differences with steps h and h / 2 on each side
    def run():
        potential = preset_potential(config.preset)
        crit = critical_point(config.preset)
        h = MAXWELL_STEP
        worst = 0.0
        for side in (-1.0, 1.0):
            offsets = 0.5 * h * np.arange(1, 2 * config.maxwell_points + 2)
            grid = sorted(crit.T_c + side * offsets)
            rows = run_sweep(potential, grid, crit)
            F = np.array([r.F for r in rows])
            ell = np.array([r.ell for r in rows])
            coarse = (F[4:] - F[:-4]) / (2.0 * h)
            fine = (F[3:-1] - F[1:-3]) / h
            extrapolated = (4.0 * fine - coarse) / 3.0
            worst = max(worst, float(np.max(np.abs(extrapolated - ell[2:-2]))))
        return {"max |dF/dT - ell|": worst, "h": h}

    return run


def _determinism(config: TransitionConfig):
    def run():
        potential = preset_potential(config.preset)
        crit = critical_point(config.preset)
        grid = transition_grid(crit.T_c, config.window, 5)
        first = render_csv(*sweep_table(run_sweep(potential, grid, crit)))
        second = render_csv(*sweep_table(run_sweep(potential, grid, crit)))
        return {"identical": first == second, "bytes": len(first.encode("utf-8"))}

    return run


def load_transition(config: TransitionConfig) -> Benchmark:
    return Benchmark(
        name="transition",
        tasks=[
            Task(
                name="third-order transition",
                run=_third_order(config),
                assertions={
                    "F continuous": lambda a: a.values["cont_F"]
                    < 10.0 * a.values["cont_F_err"],
                    "F' continuous": lambda a: a.values["cont_F1"]
                    < 10.0 * a.values["cont_F1_err"],
                    "F'' continuous": lambda a: a.values["cont_F2"]
                    < 10.0 * a.values["cont_F2_err"],
                    "newborn log term resolved": lambda a: a.values["log_amplitude"]
                    > 10.0 * a.values["log_amplitude_err"],
                    "F''' jumps": lambda a: abs(a.values["jump_F3"])
                    > 10.0 * a.values["jump_F3_err"],
                    "jump stable under grid halving": lambda a: abs(
                        a.values["jump_F3_fine"] - a.values["jump_F3"]
                    )
                    < 0.05 * abs(a.values["jump_F3"]),
                },
                time_limit=300.0,
            ),
            Task(
                name="Maxwell identity",
                run=_maxwell(config),
                assertions={
                    "dF/dT = ell within 2e-5": lambda a: a.values["max |dF/dT - ell|"] < 2e-5,
                },
            ),
            Task(
                name="deterministic sweep output",
                run=_determinism(config),
                assertions={"byte-identical reruns": lambda a: a.values["identical"]},
            ),
        ],
    )
