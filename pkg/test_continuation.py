"""
Tests: pseudo-arclength continuation and fold detection
"""
import numpy as np
import pytest

from core.config import ContinuationConfig
from core.continuation import SweepSpec, continue_branch, continue_level, measure_fold_onset
from core.errors import DomainError
from core.model import ModelParams
from core.stationary import linear_crossing_data, linear_eigensystem

FIG2 = dict(delta=-0.4, v=0.1, w=0.2)
EPSILON_RANGE = SweepSpec("epsilon", -0.8, 0.8)


def neighbour_overlaps(branch):
    return [a.state.overlap(b.state) for a, b in zip(branch.states, branch.states[1:])]


def test_sweep_spec_validation():
    with pytest.raises(DomainError):
        SweepSpec("alpha", 0.0, 1.0)
    with pytest.raises(DomainError):
        SweepSpec("epsilon", 0.5, 0.5)
    assert SweepSpec("g", 0.0, -1.0).direction == -1.0


def test_linear_branch_has_no_folds_and_matches_diagonalization():
    params = ModelParams(**FIG2)
    for level in range(3):
        branch = continue_level(params, EPSILON_RANGE, level)
        assert branch.complete
        assert branch.fold_count == 0
        assert branch.values[0] == -0.8
        assert branch.values[-1] == 0.8
        for value, state in branch:
            exact = np.linalg.eigvalsh(params.with_value("epsilon", value).linear_matrix())[level]
            assert state.mu == pytest.approx(exact, abs=1e-9)


def test_looped_lowest_branch_folds_inside_window():
    branch = continue_level(ModelParams(g=-0.4, **FIG2), EPSILON_RANGE, 0)
    assert branch.complete
    assert branch.fold_count >= 2
    assert any(abs(fold + 0.25) <= 0.05 for fold in branch.folds)
    assert min(neighbour_overlaps(branch)) > 0.99


def test_weak_nonlinearity_has_no_folds():
    params = ModelParams(g=-0.03, **FIG2)
    assert abs(params.g) < linear_crossing_data(params).gc1
    branch = continue_level(params, EPSILON_RANGE, 0)
    assert branch.complete
    assert branch.fold_count == 0


def test_continuation_in_other_parameters():
    params = ModelParams(epsilon=0.2, **FIG2)
    for name, stop in (("g", -0.15), ("v", 0.3), ("w", 0.05), ("delta", 0.1)):
        sweep = SweepSpec(name, getattr(params, name), stop)
        seed = linear_eigensystem(params)[0]
        branch = continue_branch(seed, params, sweep)
        assert branch.complete, (name, branch.failure)
        assert branch.values[-1] == stop


def test_step_underflow_returns_truncated_branch():
    options = ContinuationConfig(ds_initial=1e-3, ds_min=1e-3, ds_max=1e-3, corrector_max_iter=1,
                                 corrector_tol=1e-30)
    branch = continue_level(ModelParams(g=-0.4, **FIG2), EPSILON_RANGE, 0, options)
    assert not branch.complete
    assert branch.failure is not None
    assert branch.failure_at == pytest.approx(-0.8)
    assert len(branch) == 1


def test_measured_fold_onset_is_not_below_estimate():
    params = ModelParams(**FIG2)
    onset = measure_fold_onset(params, EPSILON_RANGE, [-0.03, -0.4])
    assert onset == -0.4
