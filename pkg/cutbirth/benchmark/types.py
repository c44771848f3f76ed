"""
Building blocks of the acceptance benchmarks.

A Benchmark groups Tasks; running a Task yields named values that its
assertions check, and the outcome is kept as a TaskResult.
"""
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Optional


@dataclass
class Assertable:
    """
    What an assertion sees after a task ran.

    Attributes:
        values (dict): Named quantities produced by the task.
        duration (float): Wall time of the task in seconds.
        error (str, optional): Library error raised by the task, formatted as "Type: message".
    """

    values: Dict[str, Any]
    duration: float
    error: Optional[str] = None


Assertion = Callable[[Assertable], bool]


@dataclass
class Task:
    name: str
    run: Callable[[], Dict[str, Any]]
    assertions: Dict[str, Assertion]
    time_limit: Optional[float] = None


@dataclass
class Benchmark:
    name: str
    tasks: List[Task]


@dataclass
class TaskResult:
    task_name: str
    assertion_results: Dict[str, bool]
    duration: float
    values: Dict[str, Any] = field(default_factory=dict)
    error: Optional[str] = None

    @property
    def success_rate(self) -> float:
        """Fraction of passed assertions; a task without assertions counts as failed."""
        total = len(self.assertion_results)
        return sum(map(bool, self.assertion_results.values())) / total if total else 0.0

    def to_dict(self) -> dict:
        return {**asdict(self), "solved": self.success_rate}
