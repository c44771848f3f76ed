from cutbirth.benchmark.types import TaskResult


def test_success_rate():
    result = TaskResult(
        task_name="t", assertion_results={"a": True, "b": False}, duration=0.1
    )
    assert result.success_rate == 0.5
    assert result.to_dict()["solved"] == 0.5


def test_no_assertions_is_not_success():
    assert TaskResult(task_name="t", assertion_results={}, duration=0.0).success_rate == 0.0
