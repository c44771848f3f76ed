"""
Running benchmark tasks and reporting their outcome.

Tasks raising a CutBirthError are recorded as failed rather than aborting the
run. Reports go to the console, and optionally to YAML together with the
config that produced them.
"""
import logging
import time

from typing import Any, Dict, List

import numpy as np
import yaml

from tabulate import tabulate

from cutbirth.benchmark.types import Assertable, Benchmark, TaskResult
from cutbirth.core.errors import CutBirthError

logger = logging.getLogger(__name__)


def _evaluate(assertion, assertable: Assertable) -> bool:
    if assertable.error is not None:
        return False
    try:
        return bool(assertion(assertable))
    except (KeyError, TypeError, ValueError) as error:
        logger.debug(f"assertion raised {error!r}")
        return False


def _plain(value: Any) -> Any:
    """Convert numpy scalars and tuples so results serialise cleanly."""
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    return value


def run(benchmark: Benchmark, verbose=False) -> List[TaskResult]:
    """
    Runs the benchmark tasks and returns a list of TaskResult objects.

    A task that raises a library error fails every assertion; its message is
    kept in the result.

    Parameters
    ----------
    benchmark : Benchmark
        The benchmark containing the tasks to run.
    verbose : bool, default=False
        A flag to indicate whether to print results after each task.

    Returns
    -------
    List[TaskResult]
    """
    task_results = []
    for task in benchmark.tasks:
        logger.info(f"{benchmark.name}: running {task.name}")
        t0 = time.perf_counter()
        error = None
        try:
            values = task.run()
        except CutBirthError as exc:
            values, error = {}, f"{type(exc).__name__}: {exc}"
            logger.warning(f"task {task.name} failed: {error}")
        t1 = time.perf_counter()

        assertable = Assertable(values=values, duration=t1 - t0, error=error)
        assertion_results = {
            name: _evaluate(assertion, assertable)
            for name, assertion in task.assertions.items()
        }
        if task.time_limit is not None:
            assertion_results[f"runtime < {task.time_limit:g}s"] = (
                error is None and assertable.duration < task.time_limit
            )

        task_results.append(
            TaskResult(
                task_name=task.name,
                assertion_results=assertion_results,
                duration=t1 - t0,
                values=_plain(values),
                error=error,
            )
        )

        if verbose:
            print_results(task_results)
    return task_results


def print_results(results: List[TaskResult]):
    """
    Print each task's assertions, then one summary table over all tasks.

    Parameters
    ----------
    results : list[TaskResult]
    """
    for task_result in results:
        print(f"\n{task_result.task_name} ({task_result.duration:.2f}s)")
        if task_result.error:
            print(f"  error: {task_result.error}")
        for name, passed in task_result.assertion_results.items():
            print(f"  {'✅' if passed else '❌'} {name}")

    if not results:
        return

    table = [
        [
            r.task_name,
            f"{r.duration:.2f}",
            f"{sum(r.assertion_results.values())}/{len(r.assertion_results)}",
        ]
        for r in results
    ]
    passed_tasks = sum(1 for r in results if r.success_rate == 1)
    mean_rate = sum(r.success_rate for r in results) / len(results)
    print()
    print(tabulate(table, headers=["task", "seconds", "assertions"]))
    print(
        f"\n{passed_tasks}/{len(results)} tasks fully passed, "
        f"mean success rate {mean_rate:.0%}, total {sum(r.duration for r in results):.2f}s\n"
    )


def export_yaml_results(yaml_path, complete_results: Dict[str, dict], config: dict):
    """Add the fully-passed fraction to every benchmark and dump everything with the config."""
    for results in complete_results.values():
        detailed = results["detailed"]
        passed = [task for task in detailed if task["solved"] == 1.0]
        results["fully_solved"] = len(passed) / len(detailed) if detailed else 0.0
    complete_results["config"] = config
    with open(yaml_path, "w", encoding="utf-8") as f:
        yaml.safe_dump(complete_results, f, indent=4, allow_unicode=True)
