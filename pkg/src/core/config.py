"""
ไฟล์คอนฟิกหลักสำหรับ tripwell
ตำแหน่ง: src/core/config.py

ทุกค่าอ่านจาก .env (TRIPWELL_*) ได้ ถ้าไม่ตั้งไว้จะใช้ค่าเริ่มต้นด้านล่าง
"""

import logging
import os
from dataclasses import dataclass, fields
from pathlib import Path

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

# Base directory
BASE_DIR = Path(__file__).parent.parent.parent
SRC_DIR = BASE_DIR / "src"

# Load .env explicitly from project root
ENV_PATH = BASE_DIR / ".env"
if ENV_PATH.exists():
    load_dotenv(dotenv_path=str(ENV_PATH), override=False)
else:
    # Try loading from current working directory as fallback
    load_dotenv()

VERSION = "0.3.0"


def _env_float(key: str, default: str) -> float:
    return float(os.getenv(key, default))


def _env_int(key: str, default: str) -> int:
    return int(os.getenv(key, default))


def _env_bool(key: str, default: str) -> bool:
    return os.getenv(key, default).lower() == "true"


@dataclass
class ModelConfig:
    """การตั้งค่าโมเดลสามระดับ"""
    # |a|^2+|b|^2+|c|^2 = 1 ตอนสร้าง StateVector
    norm_tolerance: float = _env_float("TRIPWELL_NORM_TOL", "1e-12")


@dataclass
class SearchConfig:
    """การตั้งค่าการค้นหา stationary states"""
    # x-scan (x = b/a)
    x_grid_points: int = _env_int("TRIPWELL_X_GRID_POINTS", "4000")
    x_min: float = _env_float("TRIPWELL_X_MIN", "1e-4")
    x_max: float = _env_float("TRIPWELL_X_MAX", "1e4")

    # Newton polish of H psi = mu psi
    solve_tol: float = _env_float("TRIPWELL_SOLVE_TOL", "1e-10")
    newton_tol: float = _env_float("TRIPWELL_NEWTON_TOL", "1e-12")
    newton_max_iter: int = _env_int("TRIPWELL_NEWTON_MAX_ITER", "60")
    dedup_threshold: float = 1.0 - 1e-8

    # critical points of the classical Hamiltonian
    simplex_grid: int = _env_int("TRIPWELL_SIMPLEX_GRID", "12")
    gradient_tol: float = 1e-10

    # completion search over real unit vectors
    sphere_polar: int = _env_int("TRIPWELL_SPHERE_POLAR", "8")
    sphere_azimuth: int = _env_int("TRIPWELL_SPHERE_AZIMUTH", "16")

    # populations below this use the chart-free Hessian
    boundary_eps: float = 1e-8


@dataclass
class ContinuationConfig:
    """การตั้งค่า pseudo-arclength continuation"""
    ds_initial: float = _env_float("TRIPWELL_DS_INITIAL", "1e-3")
    ds_min: float = _env_float("TRIPWELL_DS_MIN", "1e-6")
    ds_max: float = _env_float("TRIPWELL_DS_MAX", "1e-2")
    corrector_tol: float = _env_float("TRIPWELL_CORRECTOR_TOL", "1e-11")
    corrector_max_iter: int = 8
    # จำนวน iteration ที่ถือว่า "ง่าย" แล้วขยาย step
    easy_iterations: int = 3
    max_steps: int = _env_int("TRIPWELL_MAX_STEPS", "40000")
    min_overlap: float = 0.99


@dataclass
class IntegratorConfig:
    """การตั้งค่า integrator (embedded Runge-Kutta)"""
    method: str = os.getenv("TRIPWELL_INTEGRATOR", "DOP853")
    # ความคลาดเคลื่อนต่อหนึ่งหน่วยเวลา: solve_ivp ได้ rtol = atol = tol / (t1 - t0)
    tol: float = _env_float("TRIPWELL_TOL", "1e-10")
    norm_bound: float = _env_float("TRIPWELL_NORM_BOUND", "1e-9")
    samples: int = _env_int("TRIPWELL_SAMPLES", "2000")


@dataclass
class LZDefaults:
    """ค่าเริ่มต้นของการทดลอง Landau-Zener แบบ equal-slope"""
    # epsilon_span = span_factor * max(v, w, |g|, |delta|)
    span_factor: float = _env_float("TRIPWELL_LZ_SPAN_FACTOR", "40")
    homotopy_step: float = _env_float("TRIPWELL_LZ_HOMOTOPY_STEP", "0.05")


@dataclass
class StirapDefaults:
    """ค่าเริ่มต้นของพัลส์ STIRAP (ไม่ได้มาจากการทดลองจริง ปรับได้ผ่าน .env)"""
    peak: float = _env_float("TRIPWELL_PULSE_PEAK", "0.3")
    width: float = _env_float("TRIPWELL_PULSE_WIDTH", "200")
    separation: float = _env_float("TRIPWELL_PULSE_SEPARATION", "120")
    t_start: float = _env_float("TRIPWELL_WINDOW_START", "-1200")
    t_end: float = _env_float("TRIPWELL_WINDOW_END", "1200")
    # ขอบหน้าต่างต้องต่ำกว่า edge_fraction * peak
    edge_fraction: float = 1e-6


@dataclass
class SystemConfig:
    """การตั้งค่าระบบ"""
    log_level: str = os.getenv("TRIPWELL_LOG_LEVEL", "INFO")
    save_logs: bool = _env_bool("TRIPWELL_SAVE_LOGS", "false")
    log_dir: str = os.getenv("TRIPWELL_LOG_DIR", str(BASE_DIR / "logs"))
    max_workers: int = _env_int("TRIPWELL_WORKERS", "1")


class Config:
    """คลาสหลักที่รวมการตั้งค่าทั้งหมด"""

    def __init__(self):
        self.model = ModelConfig()
        self.search = SearchConfig()
        self.continuation = ContinuationConfig()
        self.integrator = IntegratorConfig()
        self.lz = LZDefaults()
        self.stirap = StirapDefaults()
        self.system = SystemConfig()

        if self.system.save_logs:
            self._create_directories()

    def _create_directories(self):
        """สร้างโฟลเดอร์ log"""
        Path(self.system.log_dir).mkdir(parents=True, exist_ok=True)

    def validate(self) -> bool:
        """ตรวจสอบการตั้งค่า"""
        errors = []
        warnings = []

        if self.integrator.method not in ("RK45", "DOP853"):
            errors.append(f"❌ TRIPWELL_INTEGRATOR={self.integrator.method} (must be RK45/DOP853)")
        if self.integrator.tol <= 0 or self.integrator.norm_bound <= 0:
            errors.append("❌ integrator tolerances must be positive")
        if self.integrator.samples < 2:
            errors.append(f"❌ TRIPWELL_SAMPLES={self.integrator.samples} (need at least 2)")

        c = self.continuation
        if not 0 < c.ds_min <= c.ds_initial <= c.ds_max:
            errors.append(f"❌ continuation steps must satisfy 0 < ds_min <= ds_initial <= ds_max "
                          f"(got {c.ds_min}, {c.ds_initial}, {c.ds_max})")

        s = self.search
        if not 0 < s.x_min < s.x_max:
            errors.append(f"❌ x-range invalid: [{s.x_min}, {s.x_max}]")
        if s.x_grid_points < 10:
            errors.append(f"❌ TRIPWELL_X_GRID_POINTS={s.x_grid_points} (too few)")
        if s.solve_tol < s.newton_tol:
            warnings.append("⚠️ solve_tol is tighter than newton_tol; states may be rejected")

        p = self.stirap
        if p.peak <= 0 or p.width <= 0 or p.separation <= 0 or p.t_end <= p.t_start:
            errors.append("❌ STIRAP pulse defaults invalid")

        if self.system.max_workers < 1:
            errors.append(f"❌ TRIPWELL_WORKERS={self.system.max_workers} (must be >= 1)")

        for error in errors:
            logger.error(error)
        for warning in warnings:
            logger.warning(warning)

        return not errors

    def as_dict(self) -> dict:
        """ค่าคอนฟิกทั้งหมดแบบ dict (ใช้ใน run manifest)"""
        sections = {}
        for name in ("model", "search", "continuation", "integrator", "lz", "stirap"):
            section = getattr(self, name)
            sections[name] = {f.name: getattr(section, f.name) for f in fields(section)}
        return sections

    def print_config(self):
        """แสดงการตั้งค่าหลัก"""
        logger.info("=" * 50)
        logger.info(f"tripwell {VERSION} configuration")
        logger.info("=" * 50)
        logger.info(f"Integrator: {self.integrator.method} tol={self.integrator.tol:g} "
                    f"norm_bound={self.integrator.norm_bound:g}")
        logger.info(f"x-scan: {self.search.x_grid_points} points in "
                    f"[{self.search.x_min:g}, {self.search.x_max:g}]")
        logger.info(f"Continuation: ds in [{self.continuation.ds_min:g}, {self.continuation.ds_max:g}]")
        logger.info(f"Workers: {self.system.max_workers}")
        logger.info("=" * 50)


# Global config instance
config = Config()
