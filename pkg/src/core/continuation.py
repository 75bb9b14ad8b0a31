"""
Branch Continuation
ต่อ branch ของสถานะนิ่งตามพารามิเตอร์หนึ่งตัวด้วย pseudo-arclength
ผ่านจุด fold ได้ (loop ของระดับพลังงานถูกตามเป็นเส้นต่อเนื่องเส้นเดียว)

ตัวแปร X = (a, b, c, mu, lambda) และสมการ
    L(lambda) psi + g psi^3 - mu psi = 0,  (psi.psi - 1)/2 = 0
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from core.config import ContinuationConfig, config
from core.errors import ConvergenceError, DomainError
from core.model import PARAMETER_NAMES, ModelParams
from core.stationary import StationaryState, level_from_linear, make_stationary_state, polish_state

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepSpec:
    """พารามิเตอร์ที่กวาด และช่วง [start, stop]"""
    parameter: str
    start: float
    stop: float

    def __post_init__(self):
        if self.parameter not in PARAMETER_NAMES:
            raise DomainError(f"unknown sweep parameter '{self.parameter}'")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)) or self.start == self.stop:
            raise DomainError(f"invalid sweep range [{self.start}, {self.stop}]")

    @property
    def direction(self) -> float:
        return 1.0 if self.stop > self.start else -1.0


@dataclass
class EigenBranch:
    """
    Branch ที่ได้จาก continuation

    values[k] คือค่าพารามิเตอร์ของ states[k]; fold_indices[k] คือ index ของจุดแรกหลัง fold ที่ k
    """
    parameter: str
    values: List[float] = field(default_factory=list)
    states: List[StationaryState] = field(default_factory=list)
    folds: List[float] = field(default_factory=list)
    fold_indices: List[int] = field(default_factory=list)
    complete: bool = False
    failure: Optional[str] = None
    failure_at: Optional[float] = None

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[Tuple[float, StationaryState]]:
        return iter(zip(self.values, self.states))

    @property
    def fold_count(self) -> int:
        return len(self.folds)

    def primary_segment(self) -> Tuple[NDArray[np.float64], List[StationaryState]]:
        """ส่วนของ branch ตั้งแต่จุดเริ่มจนถึง fold แรก (ค่าพารามิเตอร์เป็น monotone)"""
        end = self.fold_indices[0] if self.fold_indices else len(self.values)
        return np.asarray(self.values[:end], dtype=float), self.states[:end]

    def is_fold_point(self, index: int) -> bool:
        """True ถ้าจุด index อยู่ติด fold (จุดแรกหลังพารามิเตอร์กลับทิศ)"""
        return index in self.fold_indices


def _parameter_derivative(psi: NDArray, parameter: str) -> NDArray:
    a, b, c = psi
    if parameter == "epsilon":
        return np.array([a, 0.0, 0.0])
    if parameter == "delta":
        return np.array([0.0, 0.0, c])
    if parameter == "v":
        return np.array([b, a, 0.0])
    if parameter == "w":
        return np.array([0.0, c, b])
    return psi ** 3


class _BranchSystem:
    """สมการและ Jacobian 4x5 ของ branch ที่พารามิเตอร์หนึ่งตัวแปรผัน"""

    def __init__(self, params: ModelParams, parameter: str):
        self.params = params
        self.parameter = parameter

    def params_at(self, lam: float) -> ModelParams:
        return self.params.with_value(self.parameter, lam)

    def residual(self, X: NDArray) -> NDArray:
        psi, mu = X[:3], X[3]
        p = self.params_at(X[4])
        out = np.empty(4)
        out[:3] = p.linear_matrix() @ psi + p.g * psi ** 3 - mu * psi
        out[3] = 0.5 * (psi @ psi - 1.0)
        return out

    def jacobian(self, X: NDArray) -> NDArray:
        psi, mu = X[:3], X[3]
        p = self.params_at(X[4])
        J = np.zeros((4, 5))
        J[:3, :3] = p.linear_matrix() + np.diag(3.0 * p.g * psi ** 2 - mu)
        J[:3, 3] = -psi
        J[3, :3] = psi
        J[:3, 4] = _parameter_derivative(psi, self.parameter)
        return J

    def tangent(self, X: NDArray, previous: Optional[NDArray], direction: float) -> NDArray:
        """เวกเตอร์สัมผัสหนึ่งหน่วย (null space ของ J) วางทิศตาม tangent ก่อนหน้า"""
        _, _, vh = np.linalg.svd(self.jacobian(X))
        t = vh[-1]
        reference = (t @ previous) if previous is not None else t[4] * direction
        return -t if reference < 0.0 else t

    def correct(self, X: NDArray, tangent: NDArray,
                tol: float, max_iter: int) -> Tuple[Optional[NDArray], int]:
        """Newton corrector บนระนาบตั้งฉากกับ tangent ผ่านจุด predictor"""
        predictor = X.copy()
        A = np.zeros((5, 5))
        for iteration in range(max_iter + 1):
            F = self.residual(X)
            if np.max(np.abs(F)) < tol and abs(tangent @ (X - predictor)) < tol:
                return X, iteration
            if iteration == max_iter:
                break
            A[:4] = self.jacobian(X)
            A[4] = tangent
            rhs = -np.concatenate([F, [tangent @ (X - predictor)]])
            try:
                dx = np.linalg.solve(A, rhs)
            except np.linalg.LinAlgError:
                return None, iteration
            X = X + dx
            if not np.all(np.isfinite(X)):
                return None, iteration
        return None, max_iter


def _overlap(psi: NDArray, phi: NDArray) -> float:
    return float(abs(psi @ phi) / (np.linalg.norm(psi) * np.linalg.norm(phi)))


def continue_branch(seed: StationaryState, params: ModelParams, sweep: SweepSpec,
                    options: Optional[ContinuationConfig] = None) -> EigenBranch:
    """
    Pseudo-arclength continuation ของสถานะนิ่งจาก sweep.start ถึง sweep.stop

    Args:
        seed: สถานะนิ่งที่ sweep.start (จะถูก polish อีกครั้ง)
        params: พารามิเตอร์อื่นๆ (ค่าของ sweep.parameter ใน params ไม่ถูกใช้)
        sweep: พารามิเตอร์ที่กวาดและช่วง
        options: การตั้งค่า step size / corrector

    Returns:
        EigenBranch; ถ้า step size เล็กกว่า ds_min จะคืน branch ที่ถูกตัด
        พร้อม failure และ failure_at

    Raises:
        ConvergenceError: seed ไม่ใช่สถานะนิ่งที่ sweep.start
    """
    opts = options or config.continuation
    system = _BranchSystem(params, sweep.parameter)
    start_params = system.params_at(sweep.start)
    start = polish_state(seed.state, start_params, mu=seed.mu)
    if start is None:
        raise ConvergenceError(f"seed is not stationary at {sweep.parameter}={sweep.start}")

    branch = EigenBranch(parameter=sweep.parameter)
    branch.values.append(sweep.start)
    branch.states.append(start)

    X = np.concatenate([np.real(start.state.as_array()), [start.mu, sweep.start]])
    tangent = system.tangent(X, None, sweep.direction)
    ds = opts.ds_initial
    low, high = sorted((sweep.start, sweep.stop))

    for _ in range(opts.max_steps):
        candidate, iterations = system.correct(X + ds * tangent, tangent,
                                               opts.corrector_tol, opts.corrector_max_iter)
        if candidate is None or _overlap(candidate[:3], X[:3]) < opts.min_overlap:
            ds *= 0.5
            if ds < opts.ds_min:
                branch.failure = f"step size underflow near {sweep.parameter}={X[4]:.10g}"
                branch.failure_at = float(X[4])
                logger.warning(f"⚠️ continuation stopped: {branch.failure}")
                return branch
            continue

        new_tangent = system.tangent(candidate, tangent, sweep.direction)
        if new_tangent[4] * tangent[4] < 0.0:
            share = tangent[4] / (tangent[4] - new_tangent[4])
            fold_at = float(X[4] + share * (candidate[4] - X[4]))
            branch.folds.append(fold_at)
            branch.fold_indices.append(len(branch.values))
            logger.debug(f"🔄 fold at {sweep.parameter}={fold_at:.6g}")

        lam_old, lam_new = X[4], candidate[4]
        if (lam_new - sweep.stop) * (lam_old - sweep.stop) <= 0.0 and (lam_new - lam_old) * sweep.direction > 0.0:
            share = (sweep.stop - lam_old) / (lam_new - lam_old)
            guess = X + share * (candidate - X)
            final = polish_state(guess[:3], system.params_at(sweep.stop), mu=guess[3])
            if final is None or _overlap(np.real(final.state.as_array()), guess[:3]) < opts.min_overlap:
                branch.failure = f"could not land on {sweep.parameter}={sweep.stop}"
                branch.failure_at = float(lam_old)
                return branch
            branch.values.append(sweep.stop)
            branch.states.append(final)
            branch.complete = True
            logger.debug(f"✅ branch in {sweep.parameter}: {len(branch)} points, {branch.fold_count} folds")
            return branch

        if lam_new < low or lam_new > high:
            branch.failure = f"branch left the window [{low}, {high}] at {sweep.parameter}={lam_new:.10g}"
            branch.failure_at = float(lam_new)
            logger.warning(f"⚠️ {branch.failure}")
            return branch

        branch.values.append(float(lam_new))
        branch.states.append(make_stationary_state(candidate[:3].astype(complex), system.params_at(lam_new)))
        X, tangent = candidate, new_tangent
        if iterations <= opts.easy_iterations:
            ds = min(2.0 * ds, opts.ds_max)

    branch.failure = f"max_steps={opts.max_steps} reached"
    branch.failure_at = float(X[4])
    logger.warning(f"⚠️ continuation stopped: {branch.failure}")
    return branch


def continue_level(params: ModelParams, sweep: SweepSpec, level: int = 0,
                   options: Optional[ContinuationConfig] = None) -> EigenBranch:
    """ต่อ branch ของระดับ level (0 = ต่ำสุด) โดยเริ่มจากสถานะเชิงเส้นที่ sweep.start"""
    seed = level_from_linear(params.with_value(sweep.parameter, sweep.start), level)
    return continue_branch(seed, params, sweep, options)


def measure_fold_onset(params: ModelParams, sweep: SweepSpec, g_values: Sequence[float],
                       level: int = 0,
                       options: Optional[ContinuationConfig] = None) -> Optional[float]:
    """
    ค่า g แรก (เรียงตาม |g|) ที่ branch ของระดับ level มี fold

    ใช้เทียบกับค่าประมาณ g_c = 2|v_i| จาก linear_crossing_data

    Returns:
        ค่า g หรือ None ถ้าไม่มี fold ในทุกค่าที่ลอง
    """
    for g in sorted(g_values, key=abs):
        branch = continue_level(params.with_value("g", g), sweep, level, options)
        if branch.fold_count:
            logger.info(f"✅ folds appear at g={g:g} ({branch.fold_count} folds)")
            return float(g)
    return None
