"""
Criticality detection on a potential with a second well.

Functions
---------
load_criticality : function
    Locates T_c and checks the gap, the geometry of the well and nu.
"""
import numpy as np

from cutbirth.benchmark.bench_config import CriticalityConfig
from cutbirth.benchmark.benchmarks.common import critical_point
from cutbirth.benchmark.types import Benchmark, Task


def load_criticality(config: CriticalityConfig) -> Benchmark:
    bracket = tuple(float(t) for t in config.bracket)

    def run():
        crit = critical_point(config.preset, bracket)
        M = crit.resolvent.M
        grid = np.linspace(crit.b, crit.e + 1.0, 201)
        return {
            "T_c": crit.T_c,
            "gap": crit.gap,
            "b": crit.b,
            "barrier": crit.barrier,
            "e": crit.e,
            "nu": crit.nu,
            "Q(e)": float(crit.Q(crit.e)),
            "M(e)": float(M(crit.e)),
            "max |M|": float(np.max(np.abs(M(grid)))),
        }

    return Benchmark(
        name="criticality",
        tasks=[
            Task(
                name=f"critical point of {config.preset}",
                run=run,
                assertions={
                    "|Gamma(T_c)| < 1e-10": lambda a: a.values["gap"] < 1e-10,
                    "b < barrier < e": lambda a: a.values["b"]
                    < a.values["barrier"]
                    < a.values["e"],
                    "nu = 1": lambda a: a.values["nu"] == 1,
                    "Q(e) != 0": lambda a: abs(a.values["Q(e)"]) > 1e-6,
                    "|M(e)| < 1e-8 max |M|": lambda a: abs(a.values["M(e)"])
                    < 1e-8 * a.values["max |M|"],
                },
                time_limit=30.0,
            )
        ],
    )
