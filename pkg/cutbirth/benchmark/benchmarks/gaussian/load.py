"""
Gaussian oracle: the semicircle closed forms at several temperatures.

Functions
---------
load_gaussian : function
    One task per temperature checking endpoints, M, ell and F.
"""
import math

from cutbirth.benchmark.bench_config import GaussianConfig
from cutbirth.benchmark.benchmarks.common import preset_potential, within
from cutbirth.benchmark.types import Benchmark, Task
from cutbirth.core.equilibrium import solve_endpoints, thermodynamics


def _solve(T: float):
    def run():
        rd = solve_endpoints(preset_potential("gaussian"), T, 1)
        thermo = thermodynamics(rd)
        return {
            "T": T,
            "endpoints": rd.endpoints,
            "M": rd.M.coeffs,
            "ell": thermo.ell,
            "F": thermo.F,
        }

    return run


def _task(T: float) -> Task:
    edge = 2.0 * math.sqrt(T)
    ell = T - T * math.log(T)
    F = 0.75 * T * T - 0.5 * T * T * math.log(T)
    return Task(
        name=f"gaussian T={T:g}",
        run=_solve(T),
        assertions={
            "endpoints +/- 2 sqrt(T)": lambda a: within(a.values["endpoints"][0], -edge, 1e-9)
            and within(a.values["endpoints"][1], edge, 1e-9),
            "M is 1": lambda a: len(a.values["M"]) == 1 and within(a.values["M"][0], 1.0, 1e-9),
            "ell = T - T ln T": lambda a: within(a.values["ell"], ell, 1e-7),
            "F = 3T^2/4 - T^2 ln T / 2": lambda a: within(a.values["F"], F, 1e-7),
        },
        time_limit=1.0,
    )


def load_gaussian(config: GaussianConfig) -> Benchmark:
    return Benchmark(
        name="gaussian",
        tasks=[_task(float(T)) for T in config.temperatures],
    )
