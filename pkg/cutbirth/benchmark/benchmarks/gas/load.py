"""
Finite-N log-gas against the continuum solution on both sides of T_c.

Functions
---------
load_gas : function
    One task per ratio T / T_c checking occupancy of the new well and the
    Kolmogorov distance to the continuum density.
"""
from cutbirth.benchmark.bench_config import GasBenchConfig
from cutbirth.benchmark.benchmarks.common import critical_point, preset_potential
from cutbirth.benchmark.types import Benchmark, Task
from cutbirth.core.gas import (
    GasConfig,
    compare_density,
    metastability_check,
    occupancy_barrier,
    predicted_occupancy,
)
from cutbirth.core.transition import equilibrium_at


def _relax(config: GasBenchConfig, ratio: float):
    def run():
        potential = preset_potential(config.preset)
        crit = critical_point(config.preset)
        T = ratio * crit.T_c
        rd = equilibrium_at(potential, T, crit)
        barrier = occupancy_barrier(rd)
        cfg = GasConfig(N=config.N, T=T)
        check = metastability_check(potential, cfg, rd, barrier)
        return {
            "T": T,
            "occupancy": check.seeded.occupancy,
            "predicted": predicted_occupancy(rd, config.N),
            "distance": compare_density(check.seeded, rd),
            "residual": check.seeded.residual,
            "tol": cfg.tol,
            "unseeded occupancy": check.unseeded.occupancy,
            "trapped": check.trapped,
        }

    return run


def _task(config: GasBenchConfig, ratio: float) -> Task:
    assertions = {
        "Kolmogorov distance < 0.05 T": lambda a: a.values["distance"] < 0.05 * a.values["T"],
        "force residual below tol": lambda a: a.values["residual"] < a.values["tol"],
    }
    if ratio < 1.0:
        assertions["new well empty"] = lambda a: a.values["occupancy"] == 0
    else:
        assertions["new well occupied"] = lambda a: a.values["occupancy"] >= 1
        assertions["occupancy within 3 of N m / T"] = (
            lambda a: abs(a.values["occupancy"] - a.values["predicted"]) <= 3
        )
    return Task(
        name=f"gas N={config.N} at T = {ratio:g} T_c",
        run=_relax(config, ratio),
        assertions=assertions,
        time_limit=120.0,
    )


def load_gas(config: GasBenchConfig) -> Benchmark:
    return Benchmark(
        name="gas",
        tasks=[_task(config, float(ratio)) for ratio in config.ratios],
    )
