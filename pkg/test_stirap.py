"""
Tests: nonlinear STIRAP
"""
import math

import numpy as np
import pytest

from core.errors import DomainError
from core.model import ModelParams, StateVector
from core.stationary import StationarySearchResult, make_stationary_state
from core.sweep_runner import SweepRunner
from experiments.stirap import (HornScenario, PulseConfig, StirapConfig, find_horn_crossing, horn_scenario,
                                pulse_pair, run_stirap, stirap_feasible, stirap_levels, sweep_g,
                                track_dark_state)


def test_pulse_pair_is_counterintuitive():
    pulses = PulseConfig()
    v, w = pulse_pair(-pulses.separation, pulses)
    assert w == pytest.approx(pulses.peak)
    assert v < w
    v, w = pulse_pair(pulses.separation, pulses)
    assert v == pytest.approx(pulses.peak)
    assert pulse_pair(0.0, pulses)[0] == pytest.approx(pulse_pair(0.0, pulses)[1])
    assert pulses.v_pulse()(37.0) == pytest.approx(pulse_pair(37.0, pulses)[0])
    assert pulses.w_pulse()(37.0) == pytest.approx(pulse_pair(37.0, pulses)[1])


def test_window_too_narrow_for_pulses():
    with pytest.raises(DomainError):
        PulseConfig(t_start=-1000.0, t_end=1000.0)
    with pytest.raises(DomainError):
        PulseConfig(t_start=1200.0, t_end=-1200.0)
    with pytest.raises(DomainError):
        PulseConfig(width=0.0)


def test_schedule_uses_equal_detunings():
    params = StirapConfig(detuning=0.1, g=0.05).params_at(0.0)
    assert params.epsilon == params.delta == -0.1
    assert params.g == 0.05
    assert params.v == pytest.approx(params.w)


@pytest.mark.parametrize("g, detuning, expected", [
    (0.0, 0.1, HornScenario.NO_HORN),
    (0.05, 0.1, HornScenario.NO_HORN),
    (0.1, 0.1, HornScenario.SAME_SIGN),
    (0.2, 0.1, HornScenario.SAME_SIGN),
    (0.3, 0.0, HornScenario.SAME_SIGN),
    (-0.05, 0.1, HornScenario.OPPOSITE_SIGN),
    (-0.2, -0.1, HornScenario.SAME_SIGN),
    (0.2, -0.1, HornScenario.OPPOSITE_SIGN),
])
def test_horn_scenario_table(g, detuning, expected):
    assert horn_scenario(g, detuning) is expected


def test_horn_scenario_is_sign_symmetric():
    for g in np.linspace(-0.3, 0.3, 13):
        for detuning in (-0.2, -0.1, 0.0, 0.1, 0.2):
            assert horn_scenario(g, detuning) is horn_scenario(-g, -detuning)


def test_feasibility():
    assert stirap_feasible(0.05, 0.1)
    assert stirap_feasible(0.0, 0.1)
    assert not stirap_feasible(0.1, 0.1)
    assert not stirap_feasible(-0.05, 0.1)
    assert stirap_feasible(-0.05, -0.1)
    for g in np.linspace(-0.3, 0.3, 25):
        if stirap_feasible(g, 0.1):
            assert horn_scenario(g, 0.1) is HornScenario.NO_HORN


def test_linear_transfer_is_complete():
    result = run_stirap(StirapConfig(detuning=0.1, g=0.0))
    assert result.efficiency > 0.999
    assert result.diagnostics["horn_scenario"] == "NoHorn"
    assert result.diagnostics["max_norm_deviation"] <= 1e-9


def test_sweep_g_columns():
    result = sweep_g(StirapConfig(detuning=0.1, g=0.0), [0.0, 0.2], runner=SweepRunner(max_workers=1))
    frame = result.to_frame()
    assert list(frame.columns) == ["g", "efficiency", "feasible", "horn_scenario"]
    assert list(frame["horn_scenario"]) == ["NoHorn", "SameSignHorn"]
    assert list(frame["feasible"]) == [True, False]
    with pytest.raises(DomainError):
        sweep_g(StirapConfig(detuning=0.1, g=0.0), [])


def test_levels_outside_window_rejected():
    with pytest.raises(DomainError):
        stirap_levels(StirapConfig(detuning=0.1, g=0.0), [0.0, 5000.0])


def test_levels_at_pulse_overlap():
    snapshot, = stirap_levels(StirapConfig(detuning=0.1, g=0.0), [0.0], runner=SweepRunner(max_workers=1))
    assert len(snapshot) == 3
    dark = [s for s in snapshot if s.populations[1] < 1e-12]
    assert len(dark) == 1
    a2, _, c2 = dark[0].populations
    assert a2 == pytest.approx(0.5, abs=1e-9)
    assert c2 == pytest.approx(0.5, abs=1e-9)


def test_linear_levels_stay_three_with_dark_state():
    cfg = StirapConfig(detuning=0.1, g=0.0)
    times = np.linspace(-600.0, 600.0, 13)
    snapshots = stirap_levels(cfg, times, runner=SweepRunner(max_workers=1))
    for t, snapshot in zip(times, snapshots):
        assert len(snapshot) == 3
        params = cfg.params_at(t)
        dark = [s for s in snapshot if s.populations[1] < 1e-12]
        assert len(dark) == 1
        a2, _, c2 = dark[0].populations
        assert c2 / a2 == pytest.approx((params.v / params.w) ** 2, rel=1e-6)
        assert dark[0].mu == pytest.approx(-cfg.detuning, abs=1e-9)


def test_nonlinear_levels_multiply_at_large_times():
    cfg = StirapConfig(detuning=0.1, g=0.2)
    edges = stirap_levels(cfg, [-600.0, 600.0], runner=SweepRunner(max_workers=1))
    for snapshot in edges:
        assert len(snapshot) > 3
        elliptic, hyperbolic = snapshot.counts()
        assert elliptic - hyperbolic == 3


def _snapshot(params, vectors):
    states = [make_stationary_state(StateVector.from_array(v, normalize=True).as_array(), params)
              for v in vectors]
    return StationarySearchResult(states=states)


def test_track_dark_state_reports_disappearance():
    params = ModelParams(epsilon=0.0, delta=0.0, v=0.0, w=0.0, g=0.0)
    snapshots = [
        _snapshot(params, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
        _snapshot(params, [[0.95, 0, 0.31], [0, 1, 0]]),
        _snapshot(params, [[0, 1, 0], [0.2, 0, 0.98]]),
    ]
    track = track_dark_state(snapshots, [0.0, 1.0, 2.0])
    assert track.indices[:2] == [0, 0]
    assert track.indices[2] is None
    assert track.disappeared_at == 2.0
    assert math.isnan(track.mu[2])
    with pytest.raises(DomainError):
        track_dark_state(snapshots, [0.0, 1.0])


def test_track_dark_state_follows_smooth_rotation():
    params = ModelParams(epsilon=0.0, delta=0.0, v=0.0, w=0.0, g=0.0)
    angles = np.linspace(0.0, math.pi / 2, 30)
    snapshots = [_snapshot(params, [[0, 1, 0], [math.cos(a), 0, -math.sin(a)]]) for a in angles]
    track = track_dark_state(snapshots, list(angles))
    assert track.disappeared_at is None
    assert track.indices == [1] * 30


@pytest.mark.slow
def test_transfer_breaks_down_above_detuning():
    base = StirapConfig(detuning=0.1, g=0.0)
    assert run_stirap(StirapConfig(detuning=0.1, g=0.05)).efficiency > 0.95
    assert run_stirap(StirapConfig(detuning=0.1, g=0.2)).efficiency < 0.9
    gs = np.linspace(-0.3, 0.3, 61)
    frame = sweep_g(base, gs).to_frame()
    efficiency = frame["efficiency"].to_numpy()
    window = (gs >= 0.08 - 1e-12) & (gs <= 0.14 + 1e-12)
    assert efficiency[window].max() - efficiency[window].min() > 0.3

    mirror = sweep_g(base.mirrored(), -gs).to_frame()["efficiency"].to_numpy()
    assert np.max(np.abs(mirror - efficiency)) < 0.01

    positive = gs >= 0.0
    no_horn = frame["horn_scenario"].to_numpy() == HornScenario.NO_HORN.value
    assert np.array_equal(no_horn[positive], efficiency[positive] > 0.95)


@pytest.mark.slow
def test_dark_state_merges_with_horn_state():
    cfg = StirapConfig(detuning=0.1, g=0.2)
    times = np.linspace(-600.0, 600.0, 121)
    crossing = find_horn_crossing(cfg, times)
    assert crossing is not None
    assert crossing < cfg.pulses.separation
