import numpy as np
import yaml

from cutbirth.benchmark.run import export_yaml_results, print_results, run
from cutbirth.benchmark.types import Benchmark, Task
from cutbirth.core.errors import NoConvergence


def _failing():
    raise NoConvergence("stalled")


def _benchmark():
    return Benchmark(
        name="demo",
        tasks=[
            Task(
                name="ok",
                run=lambda: {"x": np.float64(1.5), "v": (1.0, 2.0)},
                assertions={"x > 1": lambda a: a.values["x"] > 1, "missing": lambda a: a.values["y"]},
                time_limit=60.0,
            ),
            Task(name="fails", run=_failing, assertions={"x > 1": lambda a: a.values["x"] > 1}),
        ],
    )


def test_run_collects_results(capsys):
    results = run(_benchmark())
    ok, fails = results
    assert ok.assertion_results == {"x > 1": True, "missing": False, "runtime < 60s": True}
    assert ok.values == {"x": 1.5, "v": [1.0, 2.0]}
    assert type(ok.values["x"]) is float
    assert fails.error == "NoConvergence: stalled"
    assert fails.assertion_results == {"x > 1": False}
    print_results(results)
    assert "❌ missing" in capsys.readouterr().out


def test_yaml_export(tmp_path):
    results = run(_benchmark())
    path = tmp_path / "results.yaml"
    export_yaml_results(
        path, {"demo": {"detailed": [r.to_dict() for r in results]}}, {"demo": {"active": True}}
    )
    loaded = yaml.safe_load(path.read_text(encoding="utf-8"))
    assert loaded["demo"]["fully_solved"] == 0.0
    assert loaded["config"] == {"demo": {"active": True}}
