"""
Geometry of the newborn cut just above T_c.

Functions
---------
load_geometry : function
    Checks that the new cut shrinks onto e as T decreases to T_c, measures its
    width exponent and compares ell across the transition.
"""
import numpy as np

from cutbirth.benchmark.bench_config import GeometryConfig
from cutbirth.benchmark.benchmarks.common import critical_point, preset_potential
from cutbirth.benchmark.types import Benchmark, Task
from cutbirth.core.criticality import continue_two_cut
from cutbirth.core.equilibrium import chemical_potential
from cutbirth.core.transition import equilibrium_at, newcut_width_scaling, run_sweep

FERMI_OFFSET = 1e-4


def _shrinking(config: GeometryConfig):
    def run():
        potential = preset_potential(config.preset)
        crit = critical_point(config.preset)
        ratios = sorted(config.ratios, reverse=True)
        distances = []
        for ratio in ratios:
            _, _, c, d = continue_two_cut(potential, crit, ratio * crit.T_c).endpoints
            distances.append(max(abs(c - crit.e), abs(d - crit.e)))
        return {"ratios": ratios, "distances": distances}

    return run


def _exponent(config: GeometryConfig):
    def run():
        potential = preset_potential(config.preset)
        crit = critical_point(config.preset)
        grid = crit.T_c * (1.0 + np.geomspace(1e-4, 0.1, config.width_points))
        alpha, stderr = newcut_width_scaling(run_sweep(potential, grid, crit), crit.T_c)
        return {"alpha": alpha, "stderr": stderr, "nu": crit.nu}

    return run


def _fermi_across(config: GeometryConfig):
    # two-point linear extrapolation of ell to T_c from each side
    def run():
        potential = preset_potential(config.preset)
        crit = critical_point(config.preset)

        def ell(offset):
            return chemical_potential(equilibrium_at(potential, crit.T_c * (1.0 + offset), crit))

        below = 2.0 * ell(-FERMI_OFFSET) - ell(-2.0 * FERMI_OFFSET)
        above = 2.0 * ell(FERMI_OFFSET) - ell(2.0 * FERMI_OFFSET)
        return {"ell_below": below, "ell_above": above}

    return run


def load_geometry(config: GeometryConfig) -> Benchmark:
    return Benchmark(
        name="geometry",
        tasks=[
            Task(
                name="new cut shrinks onto e",
                run=_shrinking(config),
                assertions={
                    "distance decreases as T -> T_c": lambda a: all(
                        q < p for p, q in zip(a.values["distances"], a.values["distances"][1:])
                    ),
                },
            ),
            Task(
                name="width exponent",
                run=_exponent(config),
                assertions={
                    "alpha = 0.5 +/- 0.05": lambda a: abs(a.values["alpha"] - 0.5) <= 0.05,
                },
            ),
            Task(
                name="ell continuous across T_c",
                run=_fermi_across(config),
                assertions={
                    "|ell+ - ell-| < 1e-4": lambda a: abs(
                        a.values["ell_above"] - a.values["ell_below"]
                    )
                    < 1e-4,
                },
            ),
        ],
    )
