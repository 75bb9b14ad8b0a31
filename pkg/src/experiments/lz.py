"""
Landau-Zener (equal-slope)
epsilon = alpha t, delta, v, w และ g คงที่; P คือ |a|^2 ที่ปลายการกวาด
"""
import functools
import itertools
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Sequence

import numpy as np

from core.config import config
from core.continuation import EigenBranch, SweepSpec, continue_level
from core.dynamics import Constant, LinearRamp, ParameterSchedule, Trajectory, propagate
from core.errors import DomainError
from core.model import ModelParams
from core.stationary import StationaryState, level_from_linear
from core.sweep_runner import SweepResult, SweepRunner

logger = logging.getLogger(__name__)

LEVEL_NAMES = {"lowest": 0, "middle": 1, "highest": 2}


def lz_formula(v: float, alpha: float) -> float:
    """P_LZ = exp(-2 pi v^2 / alpha)"""
    if not alpha > 0.0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    return math.exp(-2.0 * math.pi * v * v / alpha)


def required_span(delta: float, v: float, w: float, g: float) -> float:
    """ครึ่งความกว้างขั้นต่ำของช่วง epsilon ที่ใช้แทน t -> +-infinity"""
    return config.lz.span_factor * max(abs(v), abs(w), abs(g), abs(delta))


@dataclass(frozen=True)
class LZConfig:
    """
    การตั้งค่าการทดลอง equal-slope

    level: branch เริ่มต้น (0 = ต่ำสุด, 2 = สูงสุด)
    sweep_sign: +1 กวาด epsilon จากลบไปบวก, -1 กวาดกลับทิศ
    """
    delta: float
    v: float
    w: float
    g: float
    alpha: float
    epsilon_span: Optional[float] = None
    level: int = 0
    sweep_sign: float = 1.0

    def __post_init__(self):
        for name in ("delta", "v", "w", "g", "alpha"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if not self.alpha > 0.0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if self.level not in (0, 1, 2):
            raise DomainError(f"level must be 0, 1 or 2, got {self.level}")
        if self.sweep_sign not in (1.0, -1.0):
            raise DomainError(f"sweep_sign must be +1 or -1, got {self.sweep_sign}")
        minimum = required_span(self.delta, self.v, self.w, self.g)
        if minimum == 0.0 and self.epsilon_span is None:
            raise DomainError("cannot derive epsilon_span: delta, v, w and g are all zero")
        if self.epsilon_span is None:
            object.__setattr__(self, "epsilon_span", minimum)
        elif self.epsilon_span < minimum:
            raise DomainError(f"epsilon_span={self.epsilon_span} is below the truncation bound {minimum}")

    @property
    def t_final(self) -> float:
        return self.epsilon_span / self.alpha

    @property
    def t_initial(self) -> float:
        return -self.t_final

    def schedule(self) -> ParameterSchedule:
        return ParameterSchedule(
            epsilon=LinearRamp(self.sweep_sign * self.alpha),
            delta=Constant(self.delta),
            v=Constant(self.v),
            w=Constant(self.w),
            g=self.g,
        )

    def params_at_epsilon(self, epsilon: float) -> ModelParams:
        return ModelParams(epsilon=epsilon, delta=self.delta, v=self.v, w=self.w, g=self.g)

    def mirrored(self) -> "LZConfig":
        """g -> -g, delta -> -delta, ทิศการกวาดกลับ และ branch ต่ำสุด <-> สูงสุด"""
        return replace(self, g=-self.g, delta=-self.delta, sweep_sign=-self.sweep_sign, level=2 - self.level)

    def as_dict(self) -> Dict[str, Any]:
        return {"delta": self.delta, "v": self.v, "w": self.w, "g": self.g, "alpha": self.alpha,
                "epsilon_span": self.epsilon_span, "level": self.level, "sweep_sign": self.sweep_sign}


@dataclass
class LZResult:
    """P = |a(t_final)|^2 (ตัดให้อยู่ใน [0, 1]) พร้อม trajectory"""
    P: float
    trajectory: Trajectory
    config: LZConfig
    initial: StationaryState
    diagnostics: Dict[str, Any] = field(default_factory=dict)


def prepare_initial_state(cfg: LZConfig) -> StationaryState:
    """สถานะนิ่งบน branch ที่เลือกที่ epsilon = -sweep_sign * span (ต่อจากสถานะเชิงเส้นด้วย homotopy ใน g)"""
    start = cfg.params_at_epsilon(cfg.sweep_sign * cfg.alpha * cfg.t_initial)
    return level_from_linear(start, cfg.level, step=config.lz.homotopy_step)


def run_equal_slope(cfg: LZConfig, tol: Optional[float] = None, samples: Optional[int] = None) -> LZResult:
    """
    รันการกวาด epsilon = sweep_sign * alpha * t จาก -span ถึง +span

    Raises:
        ConvergenceError: เตรียมสถานะเริ่มต้นไม่สำเร็จ
        IntegrationAccuracyError / BlowUpError: จาก propagate
    """
    initial = prepare_initial_state(cfg)
    logger.debug(f"🔄 LZ run alpha={cfg.alpha:g} g={cfg.g:g}: initial mu={initial.mu:.6g}")
    trajectory = propagate(initial.state, cfg.schedule(), cfg.t_initial, cfg.t_final, tol=tol, samples=samples)
    final = trajectory.populations[-1]
    P = float(np.clip(final[0], 0.0, 1.0))
    diagnostics = {
        "final_populations": [float(p) for p in final],
        "max_norm_deviation": trajectory.max_norm_deviation,
        "nfev": trajectory.stats.get("nfev"),
        "initial_mu": initial.mu,
    }
    return LZResult(P=P, trajectory=trajectory, config=cfg, initial=initial, diagnostics=diagnostics)


def adiabatic_branch(cfg: LZConfig) -> EigenBranch:
    """branch ของสถานะนิ่งที่สถานะเริ่มต้นอยู่ ตามทิศการกวาดของ epsilon"""
    start = -cfg.sweep_sign * cfg.epsilon_span
    sweep = SweepSpec("epsilon", start, -start)
    return continue_level(cfg.params_at_epsilon(start), sweep, cfg.level)


def _lz_point(alpha: float, base: LZConfig, tol: Optional[float]) -> Dict[str, Any]:
    result = run_equal_slope(replace(base, alpha=alpha), tol=tol, samples=2)
    return {
        "P": result.P,
        "P_lz_formula": lz_formula(base.v, alpha),
        "max_norm_deviation": result.diagnostics["max_norm_deviation"],
    }


def _check_alphas(alphas: Sequence[float]) -> None:
    if len(alphas) == 0:
        raise DomainError("alpha list is empty")
    bad = [a for a in alphas if not (math.isfinite(a) and a > 0.0)]
    if bad:
        raise DomainError(f"alpha must be positive, got {bad}")


def sweep_alpha(cfg: LZConfig, alphas: Sequence[float], tol: Optional[float] = None,
                runner: Optional[SweepRunner] = None) -> SweepResult:
    """
    P(alpha) สำหรับทุกค่าใน alphas (รันอิสระ เรียงตามลำดับ input)

    จุดที่ล้มเหลวถูกบันทึกใน SweepResult.failures และได้ค่า NaN
    """
    _check_alphas(alphas)
    runner = runner or SweepRunner()
    point = functools.partial(_lz_point, base=cfg, tol=tol)
    return runner.run(point, "alpha", [float(a) for a in alphas], columns=("P", "P_lz_formula"))


def sweep_alpha_family(base: LZConfig, alphas: Sequence[float], families: Dict[str, Sequence[float]],
                       tol: Optional[float] = None, runner: Optional[SweepRunner] = None) -> SweepResult:
    """
    P(alpha) สำหรับทุกชุดค่าของพารามิเตอร์ใน families (เช่น {"w": [0.2, 0.4, 0.6]})

    ชื่อพารามิเตอร์ใน families กลายเป็นคอลัมน์นำหน้าตาราง
    """
    _check_alphas(alphas)
    runner = runner or SweepRunner()
    names = list(families)
    parts = []
    for combo in itertools.product(*(families[name] for name in names)):
        overrides = dict(zip(names, (float(x) for x in combo)))
        merged = {**base.as_dict(), **overrides}
        span = max(base.epsilon_span, required_span(merged["delta"], merged["v"], merged["w"], merged["g"]))
        cfg = replace(base, epsilon_span=span, **overrides)
        part = sweep_alpha(cfg, alphas, tol=tol, runner=runner)
        part.leading = [dict(overrides) for _ in part.values]
        parts.append(part)
    return SweepResult.concat(parts)
