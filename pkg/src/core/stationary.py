"""
Stationary States
หา nonlinear eigenstates ของ H(|a|^2,|b|^2,|c|^2) psi = mu psi ที่พารามิเตอร์คงที่

วิธีค้นหา (รวมผลแล้วตัดตัวซ้ำด้วย overlap):
1. x-scan: x = b/a, y = c/b จากสมการลดรูปสองสมการ
2. critical points ของ classical Hamiltonian (Newton บน gradient)
3. seeds บนทรงกลมหน่วย (จับสถานะที่มีแอมพลิจูดเป็นศูนย์ เช่น dark state)
ทุกผลลัพธ์ผ่าน Newton บนสมการสถานะนิ่งโดยตรงก่อนรับ
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.typing import NDArray
from scipy import linalg
from scipy.optimize import brentq

from core.config import SearchConfig, config
from core.errors import ConvergenceError, DegenerateEquationError, DomainError
from core.model import (
    CanonicalCoords,
    ModelParams,
    StateVector,
    chemical_potential,
    classical_hessian,
    from_canonical,
    gauge_fix,
    hamiltonian_action,
    hamiltonian_gradient,
    to_canonical,
)

logger = logging.getLogger(__name__)


class Classification(Enum):
    """ชนิดของ critical point ของ classical Hamiltonian"""
    ELLIPTIC = "elliptic"      # extremum-type, even Morse index
    HYPERBOLIC = "hyperbolic"  # saddle, odd Morse index


@dataclass(frozen=True)
class StationaryState:
    """สถานะนิ่ง พร้อม chemical potential และชนิดของ critical point"""
    state: StateVector
    mu: float
    classification: Classification
    residual: float
    morse_index: int = 0

    @property
    def populations(self) -> NDArray[np.float64]:
        return self.state.populations()

    def real_amplitudes(self) -> NDArray[np.float64]:
        return np.real(self.state.as_array())


@dataclass(frozen=True)
class ReducedCoords:
    """x = b/a, y = c/b (นิยามเมื่อแอมพลิจูดทั้งหมดไม่เป็นศูนย์)"""
    x: float
    y: float

    def __post_init__(self):
        for name in ("x", "y"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value == 0.0:
                raise DomainError(f"{name} must be finite and nonzero, got {value}")
            object.__setattr__(self, name, value)

    @classmethod
    def from_state(cls, state: StateVector) -> "ReducedCoords":
        psi = np.real(gauge_fix(state.as_array()))
        if psi[0] == 0.0 or psi[1] == 0.0:
            raise DomainError("x = b/a and y = c/b need a, b nonzero")
        return cls(psi[1] / psi[0], psi[2] / psi[1])

    def to_state(self) -> StateVector:
        a = 1.0 / math.sqrt(1.0 + self.x ** 2 + (self.x * self.y) ** 2)
        b = self.x * a
        return StateVector.from_array(gauge_fix(np.array([a, b, self.y * b])), normalize=True)


@dataclass(frozen=True)
class LinearCrossingData:
    """ตำแหน่งและขนาดของ avoided crossings ในกรณีเชิงเส้น (equal-slope)"""
    lambda1: float
    lambda2: float
    n1: float
    n2: float
    v1: float
    v2: float
    gc1: float
    gc2: float


@dataclass
class StationarySearchResult:
    """ผลการค้นหา: รายการสถานะ + diagnostics ของ seed ที่ไม่ converge"""
    states: List[StationaryState] = field(default_factory=list)
    diagnostics: List[str] = field(default_factory=list)

    def __iter__(self) -> Iterator[StationaryState]:
        return iter(self.states)

    def __len__(self) -> int:
        return len(self.states)

    def __getitem__(self, index: int) -> StationaryState:
        return self.states[index]

    def counts(self) -> Tuple[int, int]:
        """(จำนวน elliptic, จำนวน hyperbolic)"""
        elliptic = sum(1 for s in self.states if s.classification is Classification.ELLIPTIC)
        return elliptic, len(self.states) - elliptic


# ===============================
# Newton on the stationary equation
# ===============================

def _newton_eq4(psi: NDArray, mu: float, params: ModelParams,
                tol: float, max_iter: int) -> Tuple[NDArray, float, bool]:
    """Newton in (a, b, c, mu) for L psi + g psi^3 = mu psi with psi.psi = 1 (real sector)."""
    L = params.linear_matrix()
    g = params.g
    x = np.concatenate([np.asarray(psi, dtype=float), [mu]])
    J = np.zeros((4, 4))
    settled = 0
    for _ in range(max_iter):
        p, m = x[:3], x[3]
        F = np.empty(4)
        F[:3] = L @ p + g * p ** 3 - m * p
        F[3] = 0.5 * (p @ p - 1.0)
        small = np.max(np.abs(F)) < tol
        J[:3, :3] = L + np.diag(3.0 * g * p ** 2 - m)
        J[:3, 3] = -p
        J[3, :3] = p
        J[3, 3] = 0.0
        try:
            dx = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            dx = np.linalg.lstsq(J, -F, rcond=None)[0]
        # a small residual is not enough near degenerate levels: the step must vanish too
        if small and (np.linalg.norm(dx) <= 1e-10 or settled >= 3):
            return p, m, True
        settled = settled + 1 if small else 0
        x = x + dx
        if not np.all(np.isfinite(x)):
            return x[:3], x[3], False
    p, m = x[:3], x[3]
    F = np.concatenate([L @ p + g * p ** 3 - m * p, [0.5 * (p @ p - 1.0)]])
    return p, m, bool(np.max(np.abs(F)) < tol)


def residual_norm(state: StateVector, params: ModelParams) -> float:
    """max-norm ของ H(psi) psi - mu psi"""
    psi = state.as_array()
    mu = chemical_potential(state, params)
    return float(np.max(np.abs(hamiltonian_action(psi, params) - mu * psi)))


def _ambient_morse_index(psi: NDArray, mu: float, params: ModelParams) -> int:
    """
    Morse index จาก Hessian ของพลังงานบนทรงกลมหน่วยใน R^6

    ตัดทิศ normalization และทิศ gauge (i psi) ออก เหลือ 4 ทิศ
    ใช้ได้แม้แอมพลิจูดบางตัวเป็นศูนย์
    """
    x, y = np.real(psi), np.imag(psi)
    n = x ** 2 + y ** 2
    L = params.linear_matrix()
    g = params.g
    hess = np.zeros((6, 6))
    hess[:3, :3] = 2.0 * L
    hess[3:, 3:] = 2.0 * L
    for k in range(3):
        hess[k, k] += g * (2.0 * n[k] + 4.0 * x[k] ** 2)
        hess[k + 3, k + 3] += g * (2.0 * n[k] + 4.0 * y[k] ** 2)
        hess[k, k + 3] += 4.0 * g * x[k] * y[k]
        hess[k + 3, k] += 4.0 * g * x[k] * y[k]
    hess -= 2.0 * mu * np.eye(6)
    u = np.concatenate([x, y])
    iu = np.concatenate([-y, x])
    basis = linalg.null_space(np.vstack([u, iu]))
    reduced = basis.T @ hess @ basis
    return int(np.sum(np.linalg.eigvalsh(reduced) < 0.0))


def classify(state: StateVector, params: ModelParams,
             search: Optional[SearchConfig] = None) -> Tuple[Classification, int]:
    """
    จำแนก critical point จาก Morse index

    จุดภายใน simplex ใช้ Hessian 4x4 ของ classical Hamiltonian
    จุดบนขอบใช้ Hessian แบบไม่ขึ้นกับ chart (ลิมิตของกรณีภายใน)

    Returns:
        (classification, morse_index)
    """
    search = search or config.search
    if np.min(state.populations()) > search.boundary_eps:
        eigenvalues = np.linalg.eigvalsh(classical_hessian(to_canonical(state), params))
        index = int(np.sum(eigenvalues < 0.0))
    else:
        index = _ambient_morse_index(state.as_array(), chemical_potential(state, params), params)
    kind = Classification.ELLIPTIC if index % 2 == 0 else Classification.HYPERBOLIC
    return kind, index


def make_stationary_state(psi: NDArray, params: ModelParams,
                          search: Optional[SearchConfig] = None) -> StationaryState:
    """สร้าง StationaryState จากแอมพลิจูดที่ converge แล้ว (gauge arg b = 0)"""
    search = search or config.search
    state = StateVector.from_array(gauge_fix(psi), normalize=True)
    if state.is_real():
        state = StateVector.from_array(np.real(state.as_array()).astype(complex), normalize=True)
    kind, index = classify(state, params, search)
    return StationaryState(
        state=state,
        mu=chemical_potential(state, params),
        classification=kind,
        residual=residual_norm(state, params),
        morse_index=index,
    )


def polish_state(guess: Union[StateVector, NDArray], params: ModelParams,
                 mu: Optional[float] = None,
                 search: Optional[SearchConfig] = None) -> Optional[StationaryState]:
    """
    Newton บนสมการสถานะนิ่ง H psi = mu psi โดยตรงจาก guess (ส่วนจริงของแอมพลิจูด)

    Returns:
        StationaryState หรือ None ถ้าไม่ converge / residual เกิน solve_tol
    """
    search = search or config.search
    psi = guess.as_array() if isinstance(guess, StateVector) else np.asarray(guess, dtype=complex)
    psi = np.real(gauge_fix(psi))
    norm = np.linalg.norm(psi)
    if norm == 0.0 or not np.isfinite(norm):
        return None
    psi = psi / norm
    if mu is None:
        mu = float(psi @ np.real(hamiltonian_action(psi.astype(complex), params)))
    p, _, converged = _newton_eq4(psi, mu, params, search.newton_tol, search.newton_max_iter)
    if not converged or np.linalg.norm(p) == 0.0:
        return None
    result = make_stationary_state(p.astype(complex), params, search)
    if result.residual > search.solve_tol:
        return None
    return result


# ===============================
# Linear limit and crossing data
# ===============================

def linear_eigensystem(params: ModelParams) -> List[StationaryState]:
    """Eigenpairs of the g = 0 matrix, sorted by eigenvalue (params.g is ignored)."""
    linear = params.with_value("g", 0.0)
    _, vectors = np.linalg.eigh(linear.linear_matrix())
    states = [make_stationary_state(vectors[:, k].astype(complex), linear) for k in range(3)]
    return sorted(states, key=lambda s: s.mu)


def linear_crossing_data(params: ModelParams) -> LinearCrossingData:
    """ค่าปิดรูปของ avoided crossings เชิงเส้นสองจุดใน equal-slope model"""
    root = math.sqrt(params.delta ** 2 / 4.0 + params.w ** 2)
    lambda1 = params.delta / 2.0 + root
    lambda2 = params.delta / 2.0 - root
    n1 = math.sqrt(lambda2 ** 2 + params.w ** 2)
    n2 = math.sqrt(lambda1 ** 2 + params.w ** 2)
    v1 = -lambda1 * params.v / n2 if n2 > 0.0 else 0.0
    v2 = -lambda2 * params.v / n1 if n1 > 0.0 else 0.0
    return LinearCrossingData(lambda1, lambda2, n1, n2, v1, v2, 2.0 * abs(v1), 2.0 * abs(v2))


# ===============================
# Reduced equations in x = b/a, y = c/b
# ===============================

def reduced_residuals(coords: ReducedCoords, params: ModelParams) -> Tuple[float, float]:
    """
    Left-hand sides of the two reduced stationarity equations.

    With S = g + delta + eps + v(x + 1/x) + w(y + 1/y) (= 3 mu):
        (1 - x^2 y^2) S - 3w/y - 3 delta + 3 x^2 y^2 (eps + v x)
        (1 - x^2) S - 3v/x - 3 w y + 3 x^2 (eps + v x)
    """
    x, y = coords.x, coords.y
    eps, delta, v, w, g = params.epsilon, params.delta, params.v, params.w, params.g
    total = g + delta + eps + v * (x + 1.0 / x) + w * (y + 1.0 / y)
    first = (1.0 - x ** 2 * y ** 2) * total - 3.0 * w / y - 3.0 * delta + 3.0 * x ** 2 * y ** 2 * (eps + v * x)
    second = (1.0 - x ** 2) * total - 3.0 * v / x - 3.0 * w * y + 3.0 * x ** 2 * (eps + v * x)
    return first, second


def _y_coefficients(x, params: ModelParams):
    """สัมประสิทธิ์ (y^2, y^1, y^0) ของสมการที่สองคูณด้วย y"""
    eps, delta, v, w, g = params.epsilon, params.delta, params.v, params.w, params.g
    one_minus = 1.0 - x ** 2
    c2 = w * one_minus - 3.0 * w
    c1 = one_minus * (g + delta + eps + v * (x + 1.0 / x)) - 3.0 * v / x + 3.0 * x ** 2 * (eps + v * x)
    c0 = w * one_minus
    return c2, c1, c0


def solve_y_given_x(x: float, params: ModelParams) -> Tuple[float, ...]:
    """
    รากจริง y != 0 ของสมการที่สองที่ x คงที่

    Raises:
        DomainError: x = 0
        DegenerateEquationError: สัมประสิทธิ์ y^2 และ y^1 เป็นศูนย์ทั้งคู่
    """
    if x == 0.0 or not math.isfinite(x):
        raise DomainError(f"x must be finite and nonzero, got {x}")
    c2, c1, c0 = _y_coefficients(x, params)
    if c2 == 0.0:
        if c1 == 0.0:
            raise DegenerateEquationError(f"equation for y is degenerate at x={x}")
        roots = [-c0 / c1]
    else:
        disc = c1 * c1 - 4.0 * c2 * c0
        if disc < 0.0:
            return ()
        q = -0.5 * (c1 + math.copysign(math.sqrt(disc), c1))
        roots = [q / c2] + ([c0 / q] if q != 0.0 else [-c1 / (2.0 * c2)])
    return tuple(sorted(y for y in roots if y != 0.0 and math.isfinite(y)))


def _y_branches(xs: NDArray, params: ModelParams) -> Tuple[NDArray, NDArray]:
    """(y_lo, y_hi) แบบ vectorized; NaN เมื่อรากเป็นจำนวนเชิงซ้อน"""
    c2, c1, c0 = _y_coefficients(xs, params)
    if params.w == 0.0:
        with np.errstate(divide="ignore", invalid="ignore"):
            root = -c0 / c1
        return root, np.full_like(xs, np.nan)
    disc = c1 * c1 - 4.0 * c2 * c0
    sq = np.sqrt(np.where(disc >= 0.0, disc, np.nan))
    first = (-c1 - sq) / (2.0 * c2)
    second = (-c1 + sq) / (2.0 * c2)
    return np.minimum(first, second), np.maximum(first, second)


def _y_branch_scalar(x: float, params: ModelParams, upper: bool) -> float:
    c2, c1, c0 = _y_coefficients(x, params)
    if c2 == 0.0:
        return -c0 / c1
    sq = math.sqrt(max(c1 * c1 - 4.0 * c2 * c0, 0.0))
    first, second = (-c1 - sq) / (2.0 * c2), (-c1 + sq) / (2.0 * c2)
    return max(first, second) if upper else min(first, second)


def _scan_function(x, y, params: ModelParams):
    """สมการแรกคูณด้วย y (ไม่มี pole ที่ y = 0)"""
    eps, delta, v, w, g = params.epsilon, params.delta, params.v, params.w, params.g
    partial = g + delta + eps + v * (x + 1.0 / x)
    return ((1.0 - x ** 2 * y ** 2) * (partial * y + w * (y ** 2 + 1.0))
            - 3.0 * w - 3.0 * delta * y + 3.0 * x ** 2 * y ** 3 * (eps + v * x))


def _state_from_xy(x: float, y: float) -> NDArray:
    a = 1.0 / math.sqrt(1.0 + x ** 2 + (x * y) ** 2)
    return np.array([a, x * a, y * x * a])


# ===============================
# Search paths
# ===============================

def _collect(seeds: Sequence[Tuple[str, NDArray]], params: ModelParams,
             search: SearchConfig, result: StationarySearchResult) -> None:
    for label, psi in seeds:
        state = polish_state(psi, params, search=search)
        if state is None:
            result.diagnostics.append(f"seed {label} did not converge")
        else:
            result.states.append(state)


def scan_reduced(params: ModelParams, search: Optional[SearchConfig] = None) -> StationarySearchResult:
    """
    ค้นหาด้วย x-scan: หา sign change ของสมการแรกบนแต่ละ branch ของ y(x)
    แล้ว bisection (brentq) + Newton polish
    """
    search = search or config.search
    result = StationarySearchResult()
    magnitudes = np.logspace(math.log10(search.x_min), math.log10(search.x_max),
                             max(search.x_grid_points // 2, 2))
    seeds: List[Tuple[str, NDArray]] = []

    for sign in (-1.0, 1.0):
        xs = sign * magnitudes
        branches = _y_branches(xs, params)
        values = [_scan_function(xs, ys, params) for ys in branches]

        for upper, (ys, f) in enumerate(zip(branches, values)):
            valid = np.isfinite(f)
            crossing = valid[:-1] & valid[1:] & (np.sign(f[:-1]) != np.sign(f[1:]))
            for i in np.flatnonzero(crossing):
                lo, hi = xs[i], xs[i + 1]

                def along_branch(x, _upper=bool(upper)):
                    return _scan_function(x, _y_branch_scalar(x, params, _upper), params)

                try:
                    x_root = brentq(along_branch, min(lo, hi), max(lo, hi), xtol=1e-15, rtol=1e-14)
                except (ValueError, ZeroDivisionError):
                    x_root = 0.5 * (lo + hi)
                y_root = _y_branch_scalar(x_root, params, bool(upper))
                if y_root == 0.0 or not math.isfinite(y_root):
                    continue
                seeds.append((f"x={x_root:.6g}", _state_from_xy(x_root, y_root)))

        # root ที่จุดต่อของสอง branch (discriminant = 0)
        if params.w != 0.0:
            f_lo, f_hi = values
            both = np.isfinite(f_lo) & np.isfinite(f_hi)
            edge = both & ~np.concatenate([both[1:], [True]]) | both & ~np.concatenate([[True], both[:-1]])
            for i in np.flatnonzero(edge & (np.sign(f_lo) != np.sign(f_hi))):
                y_mid = 0.5 * (branches[0][i] + branches[1][i])
                if y_mid != 0.0:
                    seeds.append((f"junction x={xs[i]:.6g}", _state_from_xy(xs[i], y_mid)))

    _collect(seeds, params, search, result)
    result.states = merge_states(result.states, search)
    logger.debug(f"x-scan: {len(seeds)} seeds -> {len(result.states)} states")
    return result


def _newton_critical(z: NDArray, params: ModelParams, search: SearchConfig) -> Optional[CanonicalCoords]:
    """Newton บน gradient ของ classical Hamiltonian โดยไม่ให้ออกนอก simplex"""
    for _ in range(search.newton_max_iter):
        coords = CanonicalCoords(*z)
        grad = hamiltonian_gradient(coords, params)
        if np.max(np.abs(grad)) < search.gradient_tol:
            return coords
        hess = classical_hessian(coords, params)
        try:
            step = np.linalg.solve(hess, -grad)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(hess, -grad, rcond=None)[0]
        if not np.all(np.isfinite(step)):
            return None
        lam = 1.0
        for _ in range(50):
            trial = z + lam * step
            if trial[0] > 0.0 and trial[1] > 0.0 and trial[0] + trial[1] < 1.0:
                break
            lam *= 0.5
        else:
            return None
        z = np.array([trial[0], trial[1], coords.q1 + lam * step[2], coords.q3 + lam * step[3]])
    return None


def search_critical_points(params: ModelParams,
                           search: Optional[SearchConfig] = None) -> StationarySearchResult:
    """
    ค้นหา critical points ของ classical Hamiltonian จาก grid ใน simplex
    และเฟส q1, q3 ใน {0, pi}
    """
    search = search or config.search
    result = StationarySearchResult()
    n = search.simplex_grid
    seeds: List[Tuple[str, NDArray]] = []
    for i in range(1, n):
        for j in range(1, n - i):
            for q1 in (0.0, math.pi):
                for q3 in (0.0, math.pi):
                    start = np.array([i / n, j / n, q1, q3])
                    coords = _newton_critical(start, params, search)
                    label = f"(p1={i}/{n}, p3={j}/{n}, q1={q1:.2f}, q3={q3:.2f})"
                    if coords is None:
                        result.diagnostics.append(f"critical-point seed {label} did not converge")
                        continue
                    seeds.append((label, from_canonical(coords).as_array()))
    _collect(seeds, params, search, result)
    result.states = merge_states(result.states, search)
    logger.debug(f"critical points: {len(seeds)} converged seeds -> {len(result.states)} states")
    return result


def search_sphere_seeds(params: ModelParams,
                        search: Optional[SearchConfig] = None) -> StationarySearchResult:
    """Newton บนสมการสถานะนิ่งจาก grid บนครึ่งทรงกลมหน่วย + eigenvectors เชิงเส้น"""
    search = search or config.search
    result = StationarySearchResult()
    seeds: List[Tuple[str, NDArray]] = [
        (f"linear[{k}]", np.real(s.state.as_array())) for k, s in enumerate(linear_eigensystem(params))
    ]
    polar = np.linspace(0.0, 0.5 * math.pi, search.sphere_polar + 1)[1:]
    azimuth = np.linspace(0.0, 2.0 * math.pi, search.sphere_azimuth, endpoint=False)
    for theta in polar:
        for phi in azimuth:
            psi = np.array([math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)])
            seeds.append((f"sphere({theta:.3f},{phi:.3f})", psi))
    _collect(seeds, params, search, result)
    result.states = merge_states(result.states, search)
    return result


def merge_states(states: Sequence[StationaryState],
                 search: Optional[SearchConfig] = None) -> List[StationaryState]:
    """ตัดสถานะซ้ำ (overlap > dedup_threshold) แล้วเรียงตาม mu และ amplitude"""
    search = search or config.search
    unique: List[StationaryState] = []
    for candidate in sorted(states, key=lambda s: s.residual):
        if all(candidate.state.overlap(kept.state) <= search.dedup_threshold for kept in unique):
            unique.append(candidate)
    return sorted(unique, key=lambda s: (round(s.mu, 12), *np.round(s.real_amplitudes(), 12)))


def find_stationary_states(params: ModelParams,
                           search: Optional[SearchConfig] = None) -> StationarySearchResult:
    """
    หา stationary states ทั้งหมดใน real sector

    Args:
        params: พารามิเตอร์ของโมเดล
        search: การตั้งค่าการค้นหา (ค่าเริ่มต้นจาก config.search)

    Returns:
        StationarySearchResult (states เรียงตาม mu, diagnostics ของ seed ที่ล้มเหลว)
    """
    search = search or config.search
    merged = StationarySearchResult()
    for path in (scan_reduced, search_critical_points, search_sphere_seeds):
        partial = path(params, search)
        merged.states.extend(partial.states)
        merged.diagnostics.extend(partial.diagnostics)
    merged.states = merge_states(merged.states, search)
    elliptic, hyperbolic = merged.counts()
    logger.debug(f"✅ {len(merged)} stationary states ({elliptic} elliptic, {hyperbolic} hyperbolic) "
                 f"at {params}")
    return merged


def homotopy_in_g(seed: Union[StationaryState, StateVector], params: ModelParams, g_target: float,
                  step: Optional[float] = None,
                  search: Optional[SearchConfig] = None) -> StationaryState:
    """
    ต่อสถานะนิ่งจาก g = params.g ไปยัง g_target ทีละ step พร้อม Newton polish

    Raises:
        ConvergenceError: step เล็กกว่า 1e-6 แล้วยังไม่ converge
    """
    search = search or config.search
    step = step or config.lz.homotopy_step
    state = seed.state if isinstance(seed, StationaryState) else seed
    current = polish_state(state, params, search=search)
    if current is None:
        raise ConvergenceError(f"seed is not a stationary state at {params}")
    g_now = params.g
    h = step
    while g_now != g_target:
        g_next = g_target if abs(g_target - g_now) <= h else g_now + math.copysign(h, g_target - g_now)
        candidate = polish_state(current.state, params.with_value("g", g_next), mu=current.mu, search=search)
        if candidate is None or candidate.state.overlap(current.state) < 0.9:
            h *= 0.5
            if h < 1e-6:
                raise ConvergenceError(f"g-homotopy stalled at g={g_now:.6g} (target {g_target})")
            continue
        current, g_now = candidate, g_next
        h = min(2.0 * h, step)
    return current


def level_from_linear(params: ModelParams, level: int = 0,
                      step: Optional[float] = None,
                      search: Optional[SearchConfig] = None) -> StationaryState:
    """
    สถานะนิ่งบนระดับ level (0 = ต่ำสุด) โดยต่อจาก eigenstate เชิงเส้นด้วย homotopy ใน g
    """
    if level not in (0, 1, 2):
        raise DomainError(f"level must be 0, 1 or 2, got {level}")
    linear = params.with_value("g", 0.0)
    seed = linear_eigensystem(linear)[level]
    if params.g == 0.0:
        return seed
    return homotopy_in_g(seed, linear, params.g, step=step, search=search)
