"""
Shared, cached computations of the benchmark suites.

Several suites need the critical point of the same preset; it is located once
per process.
"""
from functools import lru_cache
from typing import Tuple

from cutbirth.core.criticality import CriticalData, find_critical_temperature
from cutbirth.core.equilibrium import Potential


def preset_potential(name: str) -> Potential:
    return Potential.from_preset(name)


@lru_cache(maxsize=None)
def critical_point(preset: str, bracket: Tuple[float, float] = (0.05, 5.0)) -> CriticalData:
    return find_critical_temperature(preset_potential(preset), bracket)


def within(value: float, target: float, tol: float) -> bool:
    return abs(value - target) <= tol
