"""
Sweep Runner
รันจุดของ parameter sweep แบบขนาน (process pool) โดยเก็บผลตามลำดับ input

จุดที่ล้มเหลวจะถูกบันทึกข้อความไว้ และ sweep ทำงานต่อจนครบ
"""
import logging
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from tqdm import tqdm

from core.config import config

logger = logging.getLogger(__name__)


@dataclass
class SweepResult:
    """
    ตารางผลของ sweep

    rows[i] คือ dict ของคอลัมน์ผลลัพธ์ของจุด i (None ถ้าจุดนั้นล้มเหลว)
    leading[i] คือคอลัมน์คงที่ที่อยู่หน้า control (เช่น w เมื่อกวาดหลายค่า)
    """
    control: str
    values: List[float]
    rows: List[Optional[Dict[str, Any]]]
    columns: List[str]
    failures: Dict[int, str] = field(default_factory=dict)
    leading: List[Dict[str, Any]] = field(default_factory=list)
    stats: Dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.values)

    def column(self, name: str) -> np.ndarray:
        """ค่าคอลัมน์ผลลัพธ์ (NaN สำหรับจุดที่ล้มเหลว)"""
        return np.array([row[name] if row is not None else np.nan for row in self.rows], dtype=float)

    def to_frame(self) -> pd.DataFrame:
        records = []
        for i, value in enumerate(self.values):
            record = dict(self.leading[i]) if self.leading else {}
            record[self.control] = value
            row = self.rows[i]
            for name in self.columns:
                record[name] = row[name] if row is not None else np.nan
            records.append(record)
        lead = list(self.leading[0].keys()) if self.leading else []
        return pd.DataFrame.from_records(records, columns=lead + [self.control] + self.columns)

    def diagnostics(self) -> List[str]:
        return [f"{self.control}={self.values[i]!r}: {message}" for i, message in sorted(self.failures.items())]

    @classmethod
    def concat(cls, parts: Sequence["SweepResult"]) -> "SweepResult":
        """รวมหลาย sweep ที่มี control และ columns เดียวกัน (ต่อท้ายตามลำดับ)"""
        first = parts[0]
        merged = cls(control=first.control, values=[], rows=[], columns=list(first.columns))
        for part in parts:
            offset = len(merged.values)
            merged.values.extend(part.values)
            merged.rows.extend(part.rows)
            merged.leading.extend(part.leading or [{} for _ in part.values])
            merged.failures.update({offset + i: m for i, m in part.failures.items()})
        return merged


class SweepRunner:
    """
    รันฟังก์ชัน func(value) สำหรับทุกค่าใน sweep

    Args:
        max_workers: จำนวน process (1 = รันในโปรเซสเดียว)
        show_progress: แสดง progress bar (tqdm) บน stderr
    """

    def __init__(self, max_workers: Optional[int] = None, show_progress: bool = False):
        self.max_workers = max(1, max_workers or config.system.max_workers)
        self.show_progress = show_progress
        self.stats = {
            'total_points': 0,
            'total_processed': 0,
            'total_errors': 0,
            'elapsed': 0.0,
            'avg_point_time': 0.0,
        }

    def _record_failure(self, failures: Dict[int, str], index: int, value: Any, error: BaseException):
        failures[index] = f"{type(error).__name__}: {error}"
        self.stats['total_errors'] += 1
        logger.error(f"❌ Error processing point {value!r}: {error}")

    def run(self, func: Callable[[Any], Dict[str, Any]], control: str, values: Sequence[Any],
            columns: Sequence[str], leading: Optional[Sequence[Dict[str, Any]]] = None) -> SweepResult:
        """
        รัน sweep และคืนผลเรียงตามลำดับ values

        func ต้อง pickle ได้เมื่อ max_workers > 1 (ฟังก์ชันระดับโมดูล หรือ functools.partial)
        """
        values = list(values)
        rows: List[Optional[Dict[str, Any]]] = [None] * len(values)
        failures: Dict[int, str] = {}
        self.stats['total_points'] += len(values)
        started = time.perf_counter()
        progress = tqdm(total=len(values), desc=control, disable=not self.show_progress, leave=False)

        if self.max_workers == 1 or len(values) <= 1:
            for i, value in enumerate(values):
                try:
                    rows[i] = func(value)
                    self.stats['total_processed'] += 1
                except Exception as e:
                    self._record_failure(failures, i, value, e)
                progress.update(1)
        else:
            with ProcessPoolExecutor(max_workers=self.max_workers) as pool:
                futures = {pool.submit(func, value): i for i, value in enumerate(values)}
                for future in as_completed(futures):
                    i = futures[future]
                    try:
                        rows[i] = future.result()
                        self.stats['total_processed'] += 1
                    except Exception as e:
                        self._record_failure(failures, i, values[i], e)
                    progress.update(1)
        progress.close()

        elapsed = time.perf_counter() - started
        self.stats['elapsed'] += elapsed
        self.stats['avg_point_time'] = self.stats['elapsed'] / max(1, self.stats['total_points'])
        done = len(values) - len(failures)
        status = "✅" if not failures else "⚠️"
        logger.info(f"{status} sweep over {control}: {done}/{len(values)} points in {elapsed:.1f}s "
                    f"({self.max_workers} workers)")
        return SweepResult(control=control, values=values, rows=rows, columns=list(columns),
                           failures=failures, leading=list(leading) if leading else [],
                           stats=self.get_stats())

    def get_stats(self) -> dict:
        return dict(self.stats)
