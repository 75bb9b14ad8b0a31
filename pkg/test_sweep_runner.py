"""
Tests: SweepRunner และ SweepResult
"""
import math

import numpy as np
import pytest

from core.sweep_runner import SweepResult, SweepRunner


def square(x):
    if x < 0:
        raise ValueError(f"negative input {x}")
    return {"y": x * x, "root": math.sqrt(x)}


@pytest.mark.parametrize("workers", [1, 2])
def test_results_keep_input_order(workers):
    values = [3.0, 1.0, 4.0, 1.5, 9.0]
    result = SweepRunner(max_workers=workers).run(square, "x", values, columns=("y", "root"))
    assert result.values == values
    assert np.allclose(result.column("y"), [v * v for v in values])
    assert not result.failures


@pytest.mark.parametrize("workers", [1, 2])
def test_failed_points_are_recorded_and_sweep_continues(workers):
    runner = SweepRunner(max_workers=workers)
    result = runner.run(square, "x", [1.0, -2.0, 4.0], columns=("y",))
    assert list(result.failures) == [1]
    assert "negative input" in result.failures[1]
    y = result.column("y")
    assert y[0] == 1.0 and y[2] == 16.0
    assert math.isnan(y[1])
    assert result.diagnostics() == [f"x=-2.0: {result.failures[1]}"]
    stats = runner.get_stats()
    assert stats["total_points"] == 3
    assert stats["total_processed"] == 2
    assert stats["total_errors"] == 1


def test_frame_layout_with_leading_columns():
    result = SweepRunner(max_workers=1).run(square, "x", [1.0, 4.0], columns=("root",),
                                            leading=[{"w": 0.2}, {"w": 0.2}])
    frame = result.to_frame()
    assert list(frame.columns) == ["w", "x", "root"]
    assert list(frame["root"]) == [1.0, 2.0]


def test_concat_offsets_failures():
    runner = SweepRunner(max_workers=1)
    first = runner.run(square, "x", [-1.0, 1.0], columns=("y",))
    second = runner.run(square, "x", [2.0, -3.0], columns=("y",))
    first.leading = [{"w": 0.2}] * 2
    second.leading = [{"w": 0.4}] * 2
    merged = SweepResult.concat([first, second])
    assert len(merged) == 4
    assert sorted(merged.failures) == [0, 3]
    frame = merged.to_frame()
    assert list(frame["w"]) == [0.2, 0.2, 0.4, 0.4]
    assert np.isnan(frame["y"].iloc[3])
