"""
Core Model
ชนิดข้อมูลและ Hamiltonian ไม่เชิงเส้นของคอนเดนเสตในบ่อศักย์สามบ่อ

    H(|a|^2,|b|^2,|c|^2) = | eps + g|a|^2   v          0              |
                           | v              g|b|^2     w              |
                           | 0              w          delta + g|c|^2 |

hbar = 1 และทุกปริมาณไม่มีหน่วย
รูปแบบ canonical: p1 = |a|^2, p3 = |c|^2, q1 = arg b - arg a, q3 = arg b - arg c
"""
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from core.config import config
from core.errors import (
    DegeneratePhaseError,
    DomainError,
    NormalizationError,
    SingularDerivativeError,
)

PARAMETER_NAMES = ("epsilon", "delta", "v", "w", "g")

# amplitudes below this are treated as zero (phase reported as 0)
ZERO_AMPLITUDE = 1e-14


@dataclass(frozen=True)
class ModelParams:
    """พารามิเตอร์ทั้งห้าของ Hamiltonian"""
    epsilon: float = 0.0
    delta: float = 0.0
    v: float = 0.0
    w: float = 0.0
    g: float = 0.0

    def __post_init__(self):
        for name in PARAMETER_NAMES:
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)

    def with_value(self, name: str, value: float) -> "ModelParams":
        """คืนพารามิเตอร์ชุดใหม่ที่เปลี่ยนค่าเดียว"""
        if name not in PARAMETER_NAMES:
            raise DomainError(f"unknown parameter '{name}' (expected one of {PARAMETER_NAMES})")
        return replace(self, **{name: value})

    def linear_matrix(self) -> NDArray[np.float64]:
        """The g = 0 part of H as a constant 3x3 matrix."""
        return np.array([
            [self.epsilon, self.v, 0.0],
            [self.v, 0.0, self.w],
            [0.0, self.w, self.delta],
        ])

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in PARAMETER_NAMES}


@dataclass(frozen=True)
class StateVector:
    """
    แอมพลิจูดเชิงซ้อน (a, b, c) ที่ normalize แล้ว

    ตรวจสอบ normalization ตอนสร้างด้วย norm_tolerance
    (ค่าเริ่มต้นจาก config.model.norm_tolerance)
    """
    a: complex
    b: complex
    c: complex
    norm_tolerance: Optional[float] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        tol = self.norm_tolerance if self.norm_tolerance is not None else config.model.norm_tolerance
        for name in ("a", "b", "c"):
            value = complex(getattr(self, name))
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise NormalizationError(f"amplitude {name} is not finite: {value}")
            object.__setattr__(self, name, value)
        deviation = self.norm_deviation()
        if deviation > tol:
            raise NormalizationError(
                f"|a|^2+|b|^2+|c|^2 deviates from 1 by {deviation:.3e} (tolerance {tol:.1e})")

    @classmethod
    def from_array(cls, psi, *, normalize: bool = False, tol: Optional[float] = None) -> "StateVector":
        psi = np.asarray(psi, dtype=complex).reshape(3)
        if normalize:
            psi = normalized(psi)
        return cls(psi[0], psi[1], psi[2], norm_tolerance=tol)

    @classmethod
    def basis(cls, index: int) -> "StateVector":
        """สถานะฐาน psi_1, psi_2, psi_3 (index 0, 1, 2)"""
        psi = np.zeros(3, dtype=complex)
        psi[index] = 1.0
        return cls.from_array(psi)

    def as_array(self) -> NDArray[np.complex128]:
        return np.array([self.a, self.b, self.c], dtype=complex)

    def populations(self) -> NDArray[np.float64]:
        return np.abs(self.as_array()) ** 2

    def norm_deviation(self) -> float:
        return abs(abs(self.a) ** 2 + abs(self.b) ** 2 + abs(self.c) ** 2 - 1.0)

    def normalized(self) -> "StateVector":
        """Renormalize to machine precision (propagation accumulates rounding)."""
        return StateVector.from_array(normalized(self.as_array()))

    def gauge_fixed(self) -> "StateVector":
        """Global phase chosen so that arg b = 0 (first nonzero component if b = 0)."""
        return StateVector.from_array(gauge_fix(self.as_array()), tol=self.norm_tolerance)

    def overlap(self, other: "StateVector") -> float:
        """|<self|other>|"""
        return float(abs(np.vdot(self.as_array(), other.as_array())))

    def is_real(self, tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(gauge_fix(self.as_array()).imag) <= tol))


@dataclass(frozen=True)
class CanonicalCoords:
    """พิกัด canonical (p1, p3, q1, q3); |b|^2 = 1 - p1 - p3"""
    p1: float
    p3: float
    q1: float = 0.0
    q3: float = 0.0

    def __post_init__(self):
        p1, p3 = float(self.p1), float(self.p3)
        slack = 1e-12
        if p1 < -slack or p3 < -slack or p1 + p3 > 1.0 + slack:
            raise DomainError(f"invalid populations p1={p1}, p3={p3} (need p1, p3 >= 0, p1 + p3 <= 1)")
        p1 = min(max(p1, 0.0), 1.0)
        p3 = min(max(p3, 0.0), 1.0 - p1)
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "p3", p3)
        object.__setattr__(self, "q1", reduce_phase(self.q1))
        object.__setattr__(self, "q3", reduce_phase(self.q3))

    @property
    def p2(self) -> float:
        return max(1.0 - self.p1 - self.p3, 0.0)

    def is_interior(self, eps: float = 0.0) -> bool:
        return self.p1 > eps and self.p3 > eps and self.p2 > eps

    def as_array(self) -> NDArray[np.float64]:
        return np.array([self.p1, self.p3, self.q1, self.q3])


def normalized(psi: NDArray) -> NDArray[np.complex128]:
    psi = np.asarray(psi, dtype=complex)
    norm = np.linalg.norm(psi)
    if norm == 0.0:
        raise NormalizationError("cannot normalize the zero vector")
    return psi / norm


def gauge_fix(psi: NDArray) -> NDArray[np.complex128]:
    """หมุนเฟสรวมให้ arg b = 0 (ถ้า b = 0 ใช้ component แรกที่ไม่เป็นศูนย์)"""
    psi = np.asarray(psi, dtype=complex)
    for index in (1, 0, 2):
        if abs(psi[index]) > ZERO_AMPLITUDE:
            return psi * np.exp(-1j * np.angle(psi[index]))
    return psi


def reduce_phase(q: float) -> float:
    """Wrap a phase into (-pi, pi]."""
    q = math.remainder(float(q), 2.0 * math.pi)
    return math.pi if q == -math.pi else q


def hamiltonian_action(psi: NDArray, params: ModelParams) -> NDArray[np.complex128]:
    """H(|a|^2,|b|^2,|c|^2) psi สำหรับ array ดิบ (ไม่ตรวจ normalization)"""
    a, b, c = psi
    g = params.g
    return np.array([
        (params.epsilon + g * abs(a) ** 2) * a + params.v * b,
        params.v * a + g * abs(b) ** 2 * b + params.w * c,
        params.w * b + (params.delta + g * abs(c) ** 2) * c,
    ], dtype=complex)


def apply_hamiltonian(state: StateVector, params: ModelParams) -> NDArray[np.complex128]:
    """
    Nonlinear Hamiltonian applied to a normalized state.

    Args:
        state: สถานะ (a, b, c)
        params: พารามิเตอร์ของโมเดล

    Returns:
        complex 3-vector H(|a|^2,|b|^2,|c|^2)(a, b, c)^T
    """
    return hamiltonian_action(state.as_array(), params)


def chemical_potential(state: StateVector, params: ModelParams) -> float:
    """mu = Re <psi|H(|a|^2,|b|^2,|c|^2)|psi>"""
    psi = state.as_array()
    return float(np.real(np.vdot(psi, hamiltonian_action(psi, params))))


def mean_field_energy(state: StateVector, params: ModelParams) -> float:
    """
    ค่าของ classical Hamiltonian คำนวณจากแอมพลิจูดโดยตรง

    เท่ากับ classical_hamiltonian(to_canonical(state)) แต่ใช้ได้แม้ b = 0
    """
    psi = state.as_array()
    linear = float(np.real(np.vdot(psi, params.linear_matrix() @ psi)))
    return linear + 0.5 * params.g * float(np.sum(state.populations() ** 2))


def to_canonical(state: StateVector) -> CanonicalCoords:
    """
    แปลง (a, b, c) เป็น (p1, p3, q1, q3)

    Raises:
        DegeneratePhaseError: ถ้า b = 0 (เฟสอ้างอิงไม่มีนิยาม)
    """
    if abs(state.b) <= ZERO_AMPLITUDE:
        raise DegeneratePhaseError("b = 0: phases q1, q3 are undefined")
    arg_b = np.angle(state.b)
    q1 = arg_b - np.angle(state.a) if abs(state.a) > ZERO_AMPLITUDE else 0.0
    q3 = arg_b - np.angle(state.c) if abs(state.c) > ZERO_AMPLITUDE else 0.0
    return CanonicalCoords(abs(state.a) ** 2, abs(state.c) ** 2, q1, q3)


def from_canonical(coords: CanonicalCoords) -> StateVector:
    """แปลงกลับเป็น StateVector โดยให้ arg b = 0"""
    psi = np.array([
        math.sqrt(coords.p1) * np.exp(-1j * coords.q1),
        math.sqrt(coords.p2),
        math.sqrt(coords.p3) * np.exp(-1j * coords.q3),
    ])
    return StateVector.from_array(psi, normalize=True)


def classical_hamiltonian(coords: CanonicalCoords, params: ModelParams) -> float:
    p1, p3 = coords.p1, coords.p3
    p2 = coords.p2
    return (params.epsilon * p1 + params.delta * p3
            + 0.5 * params.g * (p1 ** 2 + p3 ** 2 + p2 ** 2)
            + 2.0 * math.sqrt(p2) * (params.v * math.sqrt(p1) * math.cos(coords.q1)
                                     + params.w * math.sqrt(p3) * math.cos(coords.q3)))


def _require_interior(coords: CanonicalCoords) -> None:
    if not coords.is_interior():
        raise SingularDerivativeError(
            f"derivatives are singular on the simplex boundary "
            f"(p1={coords.p1}, p3={coords.p3}, p2={coords.p2})")


def hamiltonian_gradient(coords: CanonicalCoords, params: ModelParams) -> NDArray[np.float64]:
    """(dH/dp1, dH/dp3, dH/dq1, dH/dq3) ที่จุดภายใน simplex"""
    _require_interior(coords)
    p1, p3, q1, q3 = coords.p1, coords.p3, coords.q1, coords.q3
    s = coords.p2
    r, sp1, sp3 = math.sqrt(s), math.sqrt(p1), math.sqrt(p3)
    v, w, g = params.v, params.w, params.g
    coupling = v * sp1 * math.cos(q1) + w * sp3 * math.cos(q3)
    return np.array([
        params.epsilon + g * (p1 - s) - coupling / r + r * v * math.cos(q1) / sp1,
        params.delta + g * (p3 - s) - coupling / r + r * w * math.cos(q3) / sp3,
        -2.0 * r * v * sp1 * math.sin(q1),
        -2.0 * r * w * sp3 * math.sin(q3),
    ])


def classical_gradient(coords: CanonicalCoords, params: ModelParams) -> NDArray[np.float64]:
    """
    Hamilton's equations for the reduced coordinates.

    Returns:
        (dp1/dt, dp3/dt, dq1/dt, dq3/dt) = (-dH/dq1, -dH/dq3, dH/dp1, dH/dp3)

    Raises:
        SingularDerivativeError: p1, p3 หรือ 1 - p1 - p3 เป็นศูนย์
    """
    dp1, dp3, dq1, dq3 = hamiltonian_gradient(coords, params)
    return np.array([-dq1, -dq3, dp1, dp3])


def classical_hessian(coords: CanonicalCoords, params: ModelParams) -> NDArray[np.float64]:
    """Analytic 4x4 second-derivative matrix of H in the order (p1, p3, q1, q3)."""
    _require_interior(coords)
    p1, p3, q1, q3 = coords.p1, coords.p3, coords.q1, coords.q3
    s = coords.p2
    r, sp1, sp3 = math.sqrt(s), math.sqrt(p1), math.sqrt(p3)
    v, w, g = params.v, params.w, params.g
    c1, c3, s1, s3 = math.cos(q1), math.cos(q3), math.sin(q1), math.sin(q3)

    A, B = v * sp1 * c1, w * sp3 * c3
    A_sin, B_sin = v * sp1 * s1, w * sp3 * s3
    A1, B3 = v * c1 / (2.0 * sp1), w * c3 / (2.0 * sp3)
    A11, B33 = -v * c1 / (4.0 * p1 * sp1), -w * c3 / (4.0 * p3 * sp3)
    curvature = -(A + B) / (4.0 * r ** 3)

    h = np.zeros((4, 4))
    h[0, 0] = 2.0 * g + 2.0 * (curvature - A1 / r + r * A11)
    h[1, 1] = 2.0 * g + 2.0 * (curvature - B3 / r + r * B33)
    h[0, 1] = h[1, 0] = g + 2.0 * (curvature - (A1 + B3) / (2.0 * r))
    h[2, 2] = -2.0 * r * A
    h[3, 3] = -2.0 * r * B
    h[0, 2] = h[2, 0] = A_sin / r - r * v * s1 / sp1
    h[1, 2] = h[2, 1] = A_sin / r
    h[0, 3] = h[3, 0] = B_sin / r
    h[1, 3] = h[3, 1] = B_sin / r - r * w * s3 / sp3
    return h
