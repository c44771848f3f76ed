"""
Invariants over a random family of confining quartic and sextic potentials.

Every member is convex, so the one-cut phase is the equilibrium at every T.
Odd-indexed members are even functions and also feed the parity check.

Functions
---------
random_family : function
    Deterministic family of (Potential, T) pairs.
load_invariants : function
    Mass, decay, shift, parity and Maxwell checks over the family.
"""
import math

from functools import lru_cache
from typing import List, Tuple

import numpy as np

from cutbirth.benchmark.bench_config import InvariantsConfig
from cutbirth.benchmark.types import Benchmark, Task
from cutbirth.core.equilibrium import (
    Potential,
    ResolventData,
    cut_masses,
    resolvent_value,
    solve_endpoints,
    thermodynamics,
)

SHIFT = 0.7
MAXWELL_STEP = 1e-3
DECAY_REACH = 100.0


def random_family(count: int, seed: int) -> List[Tuple[Potential, float]]:
    """
    Convex potentials c1 x + c2 x^2 + c3 x^3 + c4 x^4 (+ c6 x^6) with
    |c3| <= sqrt(c2 c4) / 2, and temperatures in [0.5, 2].
    """
    rng = np.random.default_rng(seed)
    family = []
    for k in range(count):
        c2 = rng.uniform(0.5, 2.0)
        c4 = rng.uniform(0.1, 1.0)
        c1 = rng.uniform(-0.2, 0.2)
        c3 = rng.uniform(-0.5, 0.5) * math.sqrt(c2 * c4)
        even = k % 2 == 1
        coeffs = [0.0, 0.0 if even else c1, c2, 0.0 if even else c3, c4]
        if k % 4 >= 2:
            coeffs += [0.0, rng.uniform(0.05, 0.3)]
        family.append((Potential(tuple(coeffs)), float(rng.uniform(0.5, 2.0))))
    return family


@lru_cache(maxsize=None)
def _solved(count: int, seed: int) -> Tuple[Tuple[Potential, float, ResolventData], ...]:
    return tuple(
        (potential, T, solve_endpoints(potential, T, 1))
        for potential, T in random_family(count, seed)
    )


def _mass(config: InvariantsConfig):
    def run():
        errors = [abs(sum(cut_masses(rd)) - T) for _, T, rd in _solved(config.count, config.seed)]
        return {"max |sum m - T|": max(errors)}

    return run


def _moment(rd: ResolventData, k: int) -> float:
    dens = rd.density_data
    return sum(dens.integrate(lambda t: t**k, left, right) for left, right in rd.geometry.cuts)


def _decay(config: InvariantsConfig):
    # x W(x) = T + m1/x + m2/x^2 + O(x^-3)
    def run():
        errors = []
        for _, T, rd in _solved(config.count, config.seed):
            x = DECAY_REACH * (max(abs(v) for v in rd.endpoints) + 1.0)
            expected = T + _moment(rd, 1) / x + _moment(rd, 2) / x**2
            errors.append(abs(x * resolvent_value(rd, x) - expected))
        return {"max |x W(x) - T - m1/x - m2/x^2|": max(errors)}

    return run


def _shift(config: InvariantsConfig):
    def run():
        endpoint_errors, thermo_errors = [], []
        for potential, T, rd in _solved(config.count, config.seed):
            moved = solve_endpoints(potential.shifted(SHIFT), T, 1)
            endpoint_errors.append(
                max(abs(p + SHIFT - q) for p, q in zip(rd.endpoints, moved.endpoints))
            )
            original, shifted = thermodynamics(rd), thermodynamics(moved)
            thermo_errors.append(
                max(abs(original.ell - shifted.ell), abs(original.F - shifted.F))
            )
        return {"endpoints": max(endpoint_errors), "ell and F": max(thermo_errors)}

    return run


def _parity(config: InvariantsConfig):
    def run():
        errors = [
            abs(rd.endpoints[0] + rd.endpoints[1])
            for potential, _, rd in _solved(config.count, config.seed)
            if all(c == 0.0 for c in potential.coeffs[1::2])
        ]
        return {"max |a + b|": max(errors), "even members": len(errors)}

    return run


def _maxwell(config: InvariantsConfig):
    def run():
        errors = []
        for potential, T, rd in _solved(config.count, config.seed):
            up = solve_endpoints(potential, T + MAXWELL_STEP, 1, rd.endpoints)
            down = solve_endpoints(potential, T - MAXWELL_STEP, 1, rd.endpoints)
            slope = (thermodynamics(up).F - thermodynamics(down).F) / (2.0 * MAXWELL_STEP)
            errors.append(abs(slope - thermodynamics(rd).ell))
        return {"max |dF/dT - ell|": max(errors)}

    return run


def load_invariants(config: InvariantsConfig) -> Benchmark:
    return Benchmark(
        name="invariants",
        tasks=[
            Task(
                name="mass",
                run=_mass(config),
                assertions={"sum of masses = T within 1e-8": lambda a: a.values["max |sum m - T|"] < 1e-8},
            ),
            Task(
                name="decay",
                run=_decay(config),
                assertions={"x W(x) -> T within 1e-3": lambda a: a.values["max |x W(x) - T - m1/x - m2/x^2|"] < 1e-3},
            ),
            Task(
                name="shift equivariance",
                run=_shift(config),
                assertions={
                    "endpoints shift within 1e-9": lambda a: a.values["endpoints"] < 1e-9,
                    "ell and F unchanged within 1e-8": lambda a: a.values["ell and F"] < 1e-8,
                },
            ),
            Task(
                name="parity",
                run=_parity(config),
                assertions={"even V gives a = -b within 1e-9": lambda a: a.values["max |a + b|"] < 1e-9},
            ),
            Task(
                name="Maxwell identity",
                run=_maxwell(config),
                assertions={"dF/dT = ell within 2e-5": lambda a: a.values["max |dF/dT - ell|"] < 2e-5},
            ),
        ],
    )
