"""
Dynamics
อินทิเกรตสมการ i d/dt psi = H(|a|^2,|b|^2,|c|^2; t) psi ด้วย Runge-Kutta แบบ adaptive

ไม่มีการ renormalize ระหว่างทาง: norm drift คือ diagnostic หลักของความแม่นยำ
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.typing import NDArray
from scipy.integrate import solve_ivp

from core.config import IntegratorConfig, config
from core.continuation import EigenBranch
from core.errors import BlowUpError, DomainError, IntegrationAccuracyError
from core.model import ModelParams, StateVector, mean_field_energy

logger = logging.getLogger(__name__)

MIN_RTOL = 100.0 * np.finfo(float).eps


# ===============================
# Schedules
# ===============================

@dataclass(frozen=True)
class Constant:
    value: float = 0.0

    def __call__(self, t: float) -> float:
        return self.value


@dataclass(frozen=True)
class LinearRamp:
    """slope * t + offset (เช่น epsilon = alpha t)"""
    slope: float
    offset: float = 0.0

    def __call__(self, t: float) -> float:
        return self.slope * t + self.offset


@dataclass(frozen=True)
class GaussianPulse:
    """peak * exp(-(t - center)^2 / (2 width^2))"""
    peak: float
    center: float
    width: float

    def __post_init__(self):
        if not self.width > 0.0:
            raise DomainError(f"pulse width must be positive, got {self.width}")

    def __call__(self, t: float) -> float:
        return self.peak * math.exp(-((t - self.center) ** 2) / (2.0 * self.width ** 2))


@dataclass(frozen=True)
class Tabulated:
    """ค่าตามตาราง ประมาณค่าเชิงเส้นระหว่างจุด (times ต้องเพิ่มขึ้นอย่างเคร่งครัด)"""
    times: Tuple[float, ...]
    values: Tuple[float, ...]

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        values = tuple(float(v) for v in self.values)
        if len(times) < 2 or len(times) != len(values):
            raise DomainError("tabulated schedule needs at least two (time, value) pairs of equal length")
        if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
            raise DomainError("tabulated schedule times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def __call__(self, t: float) -> float:
        return float(np.interp(t, self.times, self.values))

    def covers(self, t0: float, t1: float) -> bool:
        return self.times[0] <= t0 and t1 <= self.times[-1]


ScheduleTerm = Union[Constant, LinearRamp, GaussianPulse, Tabulated]


@dataclass(frozen=True)
class ParameterSchedule:
    """epsilon(t), delta(t), v(t), w(t) และ g คงที่"""
    epsilon: ScheduleTerm = Constant()
    delta: ScheduleTerm = Constant()
    v: ScheduleTerm = Constant()
    w: ScheduleTerm = Constant()
    g: float = 0.0

    @classmethod
    def constant(cls, params: ModelParams) -> "ParameterSchedule":
        return cls(Constant(params.epsilon), Constant(params.delta),
                   Constant(params.v), Constant(params.w), params.g)

    def coefficients_at(self, t: float) -> Tuple[float, float, float, float]:
        return self.epsilon(t), self.delta(t), self.v(t), self.w(t)

    def params_at(self, t: float) -> ModelParams:
        eps, delta, v, w = self.coefficients_at(t)
        return ModelParams(epsilon=eps, delta=delta, v=v, w=w, g=self.g)

    def value_of(self, name: str, t: float) -> float:
        if name == "g":
            return self.g
        return getattr(self, name)(t)

    def check_window(self, t0: float, t1: float) -> None:
        """Raises DomainError ถ้าตารางไม่ครอบคลุมช่วงเวลา [t0, t1]"""
        for name in ("epsilon", "delta", "v", "w"):
            term = getattr(self, name)
            if isinstance(term, Tabulated) and not term.covers(t0, t1):
                raise DomainError(f"tabulated {name}(t) does not cover [{t0}, {t1}]")


# ===============================
# Trajectory
# ===============================

@dataclass
class Trajectory:
    """ผลการอินทิเกรตที่เวลาตัวอย่าง"""
    times: NDArray[np.float64]
    amplitudes: NDArray[np.complex128]
    schedule: ParameterSchedule
    stats: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.times)

    @property
    def populations(self) -> NDArray[np.float64]:
        return np.abs(self.amplitudes) ** 2

    @property
    def norm_deviation(self) -> NDArray[np.float64]:
        return np.abs(np.sum(self.populations, axis=1) - 1.0)

    @property
    def max_norm_deviation(self) -> float:
        return float(np.max(self.norm_deviation))

    def state_at(self, index: int) -> StateVector:
        return StateVector.from_array(self.amplitudes[index], tol=max(self.max_norm_deviation, 1e-12) * 2.0)

    @property
    def states(self) -> List[StateVector]:
        return [self.state_at(i) for i in range(len(self))]

    @property
    def final_state(self) -> StateVector:
        return self.state_at(len(self) - 1)

    def parameter_series(self, name: str) -> NDArray[np.float64]:
        return np.array([self.schedule.value_of(name, t) for t in self.times])

    def energy_series(self) -> NDArray[np.float64]:
        """classical Hamiltonian ตามเวลา (คงที่เมื่อพารามิเตอร์ไม่ขึ้นกับเวลา)"""
        return np.array([mean_field_energy(s, self.schedule.params_at(t))
                         for t, s in zip(self.times, self.states)])


def _nlse_rhs(schedule: ParameterSchedule):
    g = schedule.g

    def rhs(t: float, psi: NDArray) -> NDArray:
        eps, delta, v, w = schedule.coefficients_at(t)
        a, b, c = psi
        return -1j * np.array([
            (eps + g * (a.real ** 2 + a.imag ** 2)) * a + v * b,
            v * a + g * (b.real ** 2 + b.imag ** 2) * b + w * c,
            w * b + (delta + g * (c.real ** 2 + c.imag ** 2)) * c,
        ])

    return rhs


def step_tolerances(tol: float, t0: float, t1: float) -> Tuple[float, float]:
    """
    (atol, rtol) ของ solve_ivp จากความคลาดเคลื่อนต่อหน่วยเวลา tol

    แบ่ง tol ด้วยความยาวหน้าต่าง (ไม่น้อยกว่า 1) ให้ drift สะสมทั้งช่วงอยู่ในระดับ tol;
    rtol ไม่ต่ำกว่า 100 eps ซึ่งเป็นขั้นต่ำที่ solve_ivp ยอมรับ
    """
    per_step = tol / max(t1 - t0, 1.0)
    return per_step, max(per_step, MIN_RTOL)


def propagate(initial: StateVector, schedule: ParameterSchedule, t0: float, t1: float,
              tol: Optional[float] = None,
              integrator: Optional[IntegratorConfig] = None,
              samples: Optional[int] = None) -> Trajectory:
    """
    อินทิเกรต NLSE แบบไม่ต่อเนื่องจาก t0 ถึง t1

    Args:
        initial: สถานะเริ่มต้น (normalize แล้ว)
        schedule: พารามิเตอร์ตามเวลา
        t0, t1: ช่วงเวลา (t1 > t0)
        tol: ความคลาดเคลื่อนต่อหน่วยเวลา (ค่าเริ่มต้น config.integrator.tol) ดู step_tolerances
        integrator: method / norm_bound / samples
        samples: จำนวนจุดตัวอย่าง (รวมปลายทั้งสอง)

    Raises:
        DomainError: t1 <= t0 หรือ schedule ไม่ครอบคลุมช่วงเวลา
        BlowUpError: สถานะกลายเป็น non-finite
        IntegrationAccuracyError: norm drift เกิน norm_bound
    """
    opts = integrator or config.integrator
    tol = tol if tol is not None else opts.tol
    samples = samples or opts.samples
    if not t1 > t0:
        raise DomainError(f"need t1 > t0, got [{t0}, {t1}]")
    if not tol > 0.0:
        raise DomainError(f"tol must be positive, got {tol}")
    schedule.check_window(t0, t1)

    atol, rtol = step_tolerances(tol, t0, t1)
    t_eval = np.linspace(t0, t1, max(samples, 2))
    with np.errstate(over="ignore", invalid="ignore"):
        solution = solve_ivp(_nlse_rhs(schedule), (t0, t1), initial.as_array(), method=opts.method,
                             t_eval=t_eval, rtol=rtol, atol=atol)

    amplitudes = solution.y.T if solution.y.size else np.empty((0, 3), dtype=complex)
    finite = np.all(np.isfinite(amplitudes), axis=1)
    if not solution.success or len(amplitudes) != len(t_eval) or not np.all(finite):
        good = np.flatnonzero(finite)
        last_good = float(solution.t[good[-1]]) if len(good) else t0
        raise BlowUpError(f"state became non-finite after t={last_good:.6g} ({solution.message})", last_good)

    trajectory = Trajectory(times=solution.t, amplitudes=amplitudes, schedule=schedule,
                            stats={"nfev": int(solution.nfev), "method": opts.method, "tol": tol,
                                   "rtol": rtol, "atol": atol})
    drift = trajectory.max_norm_deviation
    trajectory.stats["max_norm_deviation"] = drift
    if drift > opts.norm_bound:
        raise IntegrationAccuracyError(
            f"norm drift {drift:.3e} exceeds {opts.norm_bound:.1e}; rerun with a tighter --tol (now {tol:g})")
    logger.debug(f"✅ propagated [{t0:g}, {t1:g}] nfev={solution.nfev} drift={drift:.2e}")
    return trajectory


# ===============================
# Projection on an adiabatic branch
# ===============================

@dataclass
class BranchOverlap:
    """|<branch state|psi(t)>|^2 ต่อจุดตัวอย่าง; NaN เมื่อพารามิเตอร์อยู่นอกส่วนหลักของ branch"""
    times: NDArray[np.float64]
    parameter_values: NDArray[np.float64]
    overlap: NDArray[np.float64]
    valid: NDArray[np.bool_]
    first_component: NDArray[np.float64]


def _aligned_segment(branch: EigenBranch) -> Tuple[NDArray, NDArray]:
    values, states = branch.primary_segment()
    vectors = np.array([np.real(s.state.as_array()) for s in states])
    for k in range(1, len(vectors)):
        if vectors[k] @ vectors[k - 1] < 0.0:
            vectors[k] = -vectors[k]
    order = np.argsort(values, kind="stable")
    return values[order], vectors[order]


def project_on_branch(trajectory: Trajectory, branch: EigenBranch) -> BranchOverlap:
    """
    ทับซ้อนของสถานะตามเวลากับสถานะบน branch ที่ค่าพารามิเตอร์ขณะนั้น

    ใช้เฉพาะส่วนของ branch ก่อน fold แรก ค่านอกช่วงถูกทำเครื่องหมาย (valid = False)
    """
    parameter_values = trajectory.parameter_series(branch.parameter)
    count = len(trajectory)
    overlap = np.full(count, np.nan)
    first = np.full(count, np.nan)
    valid = np.zeros(count, dtype=bool)
    values, vectors = _aligned_segment(branch)
    if len(values) < 2:
        return BranchOverlap(trajectory.times, parameter_values, overlap, valid, first)

    for i, lam in enumerate(parameter_values):
        if not values[0] <= lam <= values[-1]:
            continue
        k = min(int(np.searchsorted(values, lam, side="right")) - 1, len(values) - 2)
        span = values[k + 1] - values[k]
        share = (lam - values[k]) / span if span > 0.0 else 0.0
        phi = (1.0 - share) * vectors[k] + share * vectors[k + 1]
        phi = phi / np.linalg.norm(phi)
        overlap[i] = abs(np.vdot(phi, trajectory.amplitudes[i])) ** 2
        first[i] = phi[0] ** 2
        valid[i] = True
    return BranchOverlap(trajectory.times, parameter_values, overlap, valid, first)
