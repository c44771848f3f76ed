"""Registry mapping benchmark section names to their loaders."""
from cutbirth.benchmark.bench_config import BenchConfig
from cutbirth.benchmark.benchmarks.criticality.load import load_criticality
from cutbirth.benchmark.benchmarks.gas.load import load_gas
from cutbirth.benchmark.benchmarks.gaussian.load import load_gaussian
from cutbirth.benchmark.benchmarks.geometry.load import load_geometry
from cutbirth.benchmark.benchmarks.invariants.load import load_invariants
from cutbirth.benchmark.benchmarks.transition.load import load_transition
from cutbirth.benchmark.types import Benchmark

BENCHMARKS = {
    "gaussian": load_gaussian,
    "criticality": load_criticality,
    "transition": load_transition,
    "geometry": load_geometry,
    "gas": load_gas,
    "invariants": load_invariants,
}


def get_benchmark(name: str, config: BenchConfig) -> Benchmark:
    """Build the benchmark for one config section; ValueError for unknown names."""
    if name not in BENCHMARKS:
        raise ValueError(f"no benchmark named {name!r}; choose from {sorted(BENCHMARKS)}")
    return BENCHMARKS[name](getattr(config, name))
