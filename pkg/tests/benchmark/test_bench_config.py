import os

import numpy as np
import pytest

import cutbirth.benchmark as benchmark_package

from cutbirth.benchmark.bench_config import BenchConfig
from cutbirth.benchmark.benchmarks.invariants.load import random_family
from cutbirth.benchmark.benchmarks.load import BENCHMARKS, get_benchmark
from cutbirth.benchmark.run import run
from cutbirth.benchmark.types import Benchmark
from cutbirth.core.errors import IoError

DEFAULT_CONFIG = os.path.join(os.path.dirname(benchmark_package.__file__), "default_bench_config.toml")


def test_default_config_activates_every_suite():
    config = BenchConfig.from_toml(DEFAULT_CONFIG)
    assert sorted(config.to_dict()) == sorted(BENCHMARKS)
    assert all(section["active"] for section in config.to_dict().values())
    assert config.gas.N == 200
    assert config.transition.points_per_side == 12


def test_partial_config_keeps_defaults():
    config = BenchConfig.from_dict({"gas": {"active": False, "N": 50}})
    assert config.gas.active is False
    assert config.gas.N == 50
    assert config.gaussian.temperatures == [0.25, 1.0, 4.0]


def test_missing_config_file(tmp_path):
    with pytest.raises(IoError):
        BenchConfig.from_toml(tmp_path / "missing.toml")


def test_unknown_benchmark():
    with pytest.raises(ValueError):
        get_benchmark("apps", BenchConfig())


def test_gaussian_suite_passes():
    results = run(get_benchmark("gaussian", BenchConfig()))
    assert len(results) == 3
    for result in results:
        failed = [k for k, v in result.assertion_results.items() if not v and not k.startswith("runtime")]
        assert failed == []


def test_random_family_is_reproducible_and_convex():
    first = random_family(8, 0)
    assert first == random_family(8, 0)
    x = np.linspace(-5.0, 5.0, 201)
    for k, (potential, T) in enumerate(first):
        assert 0.5 <= T <= 2.0
        assert np.all(potential.vprime.deriv()(x) > 0.0)
        if k % 2 == 1:
            assert all(c == 0.0 for c in potential.coeffs[1::2])
        if k % 4 >= 2:
            assert potential.degree == 6


@pytest.mark.slow
def test_invariants_suite_passes():
    results = run(get_benchmark("invariants", BenchConfig.from_dict({"invariants": {"count": 8}})))
    for result in results:
        assert result.success_rate == 1.0, result.assertion_results


def _run_single_task(suite: str, task_name: str):
    benchmark = get_benchmark(suite, BenchConfig())
    [task] = [t for t in benchmark.tasks if t.name == task_name]
    [result] = run(Benchmark(name=suite, tasks=[task]))
    return result


@pytest.mark.slow
def test_ell_one_sided_limits_agree():
    result = _run_single_task("geometry", "ell continuous across T_c")
    assert result.error is None
    assert abs(result.values["ell_above"] - result.values["ell_below"]) < 1e-4


@pytest.mark.slow
def test_maxwell_identity_across_critical_point():
    result = _run_single_task("transition", "Maxwell identity")
    assert result.error is None
    assert result.values["h"] <= 1e-3
    assert result.values["max |dF/dT - ell|"] < 2e-5
