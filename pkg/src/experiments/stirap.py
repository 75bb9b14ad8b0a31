"""
Nonlinear STIRAP
พัลส์แบบ counterintuitive: w(t) เปิดก่อน v(t); epsilon = delta = -Delta
ประสิทธิภาพการถ่ายโอน = |c(t_end)|^2 เริ่มจาก (1, 0, 0)
"""
import functools
import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.config import SearchConfig, config
from core.dynamics import Constant, GaussianPulse, ParameterSchedule, Trajectory, propagate
from core.errors import DomainError
from core.model import ModelParams, StateVector
from core.stationary import StationarySearchResult, find_stationary_states
from core.sweep_runner import SweepResult, SweepRunner

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PulseConfig:
    """
    พัลส์เกาส์สองลูก: w มียอดที่ -separation, v มียอดที่ +separation

    ขอบหน้าต่าง [t_start, t_end] ต้องมีแอมพลิจูดต่ำกว่า edge_fraction * peak
    """
    peak: float = field(default_factory=lambda: config.stirap.peak)
    width: float = field(default_factory=lambda: config.stirap.width)
    separation: float = field(default_factory=lambda: config.stirap.separation)
    t_start: float = field(default_factory=lambda: config.stirap.t_start)
    t_end: float = field(default_factory=lambda: config.stirap.t_end)

    def __post_init__(self):
        if not (self.peak > 0.0 and self.width > 0.0 and self.separation > 0.0):
            raise DomainError(f"peak, width and separation must be positive: {self}")
        if not self.t_end > self.t_start:
            raise DomainError(f"window must satisfy t_start < t_end, got [{self.t_start}, {self.t_end}]")
        bound = config.stirap.edge_fraction * self.peak
        for t in (self.t_start, self.t_end):
            if max(pulse_pair(t, self)) >= bound:
                raise DomainError(f"pulses at window edge t={t:g} exceed {config.stirap.edge_fraction:g} * peak; "
                                  f"widen the window")

    def v_pulse(self) -> GaussianPulse:
        return GaussianPulse(self.peak, self.separation, self.width)

    def w_pulse(self) -> GaussianPulse:
        return GaussianPulse(self.peak, -self.separation, self.width)

    def as_dict(self) -> Dict[str, float]:
        return {"peak": self.peak, "width": self.width, "separation": self.separation,
                "t_start": self.t_start, "t_end": self.t_end}


@dataclass(frozen=True)
class StirapConfig:
    """detuning = Delta; ภายในใช้ epsilon = delta = -Delta"""
    detuning: float
    g: float
    pulses: PulseConfig = field(default_factory=PulseConfig)

    def __post_init__(self):
        if not (math.isfinite(self.detuning) and math.isfinite(self.g)):
            raise DomainError("detuning and g must be finite")

    def schedule(self) -> ParameterSchedule:
        return ParameterSchedule(
            epsilon=Constant(-self.detuning),
            delta=Constant(-self.detuning),
            v=self.pulses.v_pulse(),
            w=self.pulses.w_pulse(),
            g=self.g,
        )

    def params_at(self, t: float) -> ModelParams:
        return self.schedule().params_at(t)

    def mirrored(self) -> "StirapConfig":
        return replace(self, detuning=-self.detuning, g=-self.g)

    def as_dict(self) -> Dict[str, Any]:
        return {"detuning": self.detuning, "g": self.g, **self.pulses.as_dict()}


class HornScenario(Enum):
    NO_HORN = "NoHorn"
    SAME_SIGN = "SameSignHorn"
    OPPOSITE_SIGN = "OppositeSignHorn"


def pulse_pair(t: float, pulses: PulseConfig) -> Tuple[float, float]:
    """(v(t), w(t))"""
    two_sigma2 = 2.0 * pulses.width ** 2
    w = pulses.peak * math.exp(-((t + pulses.separation) ** 2) / two_sigma2)
    v = pulses.peak * math.exp(-((t - pulses.separation) ** 2) / two_sigma2)
    return v, w


def horn_scenario(g: float, detuning: float) -> HornScenario:
    """
    ชนิดของ horn state จากเงื่อนไขปิดรูป

    g Delta >= 0 และ |Delta| <= |g| -> SameSignHorn (รวม Delta = 0)
    g Delta > 0 และ |Delta| > |g|   -> NoHorn
    g Delta < 0                      -> OppositeSignHorn
    g = 0                            -> NoHorn
    """
    if g == 0.0:
        return HornScenario.NO_HORN
    if g * detuning < 0.0:
        return HornScenario.OPPOSITE_SIGN
    if abs(detuning) <= abs(g):
        return HornScenario.SAME_SIGN
    return HornScenario.NO_HORN


def stirap_feasible(g: float, detuning: float) -> bool:
    """การถ่ายโอนแบบ adiabatic สมบูรณ์เป็นไปได้เมื่อ g Delta >= 0 และ |g| < |Delta|"""
    return g * detuning >= 0.0 and abs(g) < abs(detuning)


@dataclass
class StirapResult:
    efficiency: float
    trajectory: Trajectory
    config: StirapConfig
    diagnostics: Dict[str, Any] = field(default_factory=dict)


def run_stirap(cfg: StirapConfig, tol: Optional[float] = None, samples: Optional[int] = None) -> StirapResult:
    """
    เริ่มจาก (1, 0, 0) ที่ t_start แล้ว propagate ถึง t_end

    Raises:
        IntegrationAccuracyError / BlowUpError: จาก propagate
    """
    trajectory = propagate(StateVector.basis(0), cfg.schedule(), cfg.pulses.t_start, cfg.pulses.t_end,
                           tol=tol, samples=samples)
    final = trajectory.populations[-1]
    efficiency = float(np.clip(final[2], 0.0, 1.0))
    diagnostics = {
        "final_populations": [float(p) for p in final],
        "max_norm_deviation": trajectory.max_norm_deviation,
        "nfev": trajectory.stats.get("nfev"),
        "horn_scenario": horn_scenario(cfg.g, cfg.detuning).value,
    }
    logger.debug(f"✅ STIRAP Delta={cfg.detuning:g} g={cfg.g:g}: efficiency={efficiency:.6f}")
    return StirapResult(efficiency=efficiency, trajectory=trajectory, config=cfg, diagnostics=diagnostics)


def _stirap_point(g: float, base: StirapConfig, tol: Optional[float]) -> Dict[str, Any]:
    result = run_stirap(replace(base, g=g), tol=tol, samples=2)
    return {
        "efficiency": result.efficiency,
        "feasible": stirap_feasible(g, base.detuning),
        "horn_scenario": horn_scenario(g, base.detuning).value,
    }


def sweep_g(base: StirapConfig, gs: Sequence[float], tol: Optional[float] = None,
            runner: Optional[SweepRunner] = None) -> SweepResult:
    """ประสิทธิภาพการถ่ายโอนตาม g ที่ Delta และพัลส์คงที่"""
    if len(gs) == 0:
        raise DomainError("g list is empty")
    runner = runner or SweepRunner()
    point = functools.partial(_stirap_point, base=base, tol=tol)
    return runner.run(point, "g", [float(g) for g in gs], columns=("efficiency", "feasible", "horn_scenario"))


def stirap_levels(cfg: StirapConfig, times: Sequence[float],
                  search: Optional[SearchConfig] = None,
                  runner: Optional[SweepRunner] = None) -> List[StationarySearchResult]:
    """
    สถานะนิ่งทั้งหมดที่พารามิเตอร์ขณะเวลา t สำหรับทุก t ใน times

    Returns:
        รายการผลการค้นหา (หนึ่งชุดต่อเวลา) เรียงตาม times
    """
    times = [float(t) for t in times]
    outside = [t for t in times if not cfg.pulses.t_start <= t <= cfg.pulses.t_end]
    if outside:
        raise DomainError(f"times outside the pulse window: {outside[:5]}")
    runner = runner or SweepRunner()
    point = functools.partial(_levels_row, cfg=cfg, search=search)
    table = runner.run(point, "t", times, columns=("levels",))
    snapshots = []
    for i, row in enumerate(table.rows):
        if row is None:
            failed = StationarySearchResult()
            failed.diagnostics.append(table.failures.get(i, "failed"))
            snapshots.append(failed)
        else:
            snapshots.append(row["levels"])
    return snapshots


def _levels_row(t: float, cfg: StirapConfig, search: Optional[SearchConfig]) -> Dict[str, Any]:
    return {"levels": find_stationary_states(cfg.params_at(t), search)}


@dataclass
class DarkStateTrack:
    """ระดับ dark state ที่ตามด้วย overlap สูงสุด; disappeared_at = เวลาแรกที่หาไม่พบ"""
    times: List[float]
    indices: List[Optional[int]]
    overlaps: List[float]
    mu: List[float]
    disappeared_at: Optional[float] = None


def track_dark_state(snapshots: Sequence[StationarySearchResult], times: Sequence[float],
                     threshold: float = 0.9) -> DarkStateTrack:
    """
    ตาม dark state (เริ่มจาก psi_1) ผ่าน snapshots ของ stirap_levels

    ที่แต่ละเวลาเลือกสถานะที่ overlap กับสถานะก่อนหน้ามากที่สุด
    ถ้า overlap สูงสุดต่ำกว่า threshold ถือว่า branch หายไป
    """
    if len(snapshots) != len(times):
        raise DomainError("snapshots and times must have the same length")
    track = DarkStateTrack(times=[float(t) for t in times], indices=[], overlaps=[], mu=[])
    reference = StateVector.basis(0)
    for t, snapshot in zip(times, snapshots):
        if track.disappeared_at is not None or len(snapshot) == 0:
            track.indices.append(None)
            track.overlaps.append(float("nan"))
            track.mu.append(float("nan"))
            if track.disappeared_at is None:
                track.disappeared_at = float(t)
            continue
        overlaps = [reference.overlap(s.state) for s in snapshot]
        best = int(np.argmax(overlaps))
        if overlaps[best] < threshold:
            track.disappeared_at = float(t)
            track.indices.append(None)
            track.overlaps.append(float(overlaps[best]))
            track.mu.append(float("nan"))
            continue
        track.indices.append(best)
        track.overlaps.append(float(overlaps[best]))
        track.mu.append(snapshot[best].mu)
        reference = snapshot[best].state
    return track


def find_horn_crossing(cfg: StirapConfig, times: Sequence[float],
                       search: Optional[SearchConfig] = None,
                       runner: Optional[SweepRunner] = None) -> Optional[float]:
    """เวลาที่ dark state หายไป (None ถ้าตามได้ตลอดช่วง)"""
    track = track_dark_state(stirap_levels(cfg, times, search, runner), times)
    if track.disappeared_at is None:
        logger.info(f"✅ dark state followed over the whole grid (Delta={cfg.detuning:g}, g={cfg.g:g})")
    else:
        logger.info(f"⚠️ dark state disappears near t={track.disappeared_at:g} (Delta={cfg.detuning:g}, g={cfg.g:g})")
    return track.disappeared_at
