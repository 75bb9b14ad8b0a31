"""
output.py - เขียนผลลัพธ์ CSV / JSON และ run manifest
CSV: ตัวเลข 17 หลักสำคัญ, LF, มี header เสมอ
"""

import logging
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import orjson
import pandas as pd

from core.config import VERSION

logger = logging.getLogger(__name__)

STDOUT = "-"
JSON_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_SERIALIZE_NUMPY | orjson.OPT_SORT_KEYS | orjson.OPT_NON_STR_KEYS


@dataclass
class RunManifest:
    """ข้อมูลที่ใช้รันซ้ำ: command line, config ที่ resolve แล้ว, เวอร์ชัน, เวลา, diagnostics"""
    command: List[str]
    config: Dict[str, Any]
    version: str = VERSION
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))
    diagnostics: List[str] = field(default_factory=list)
    run: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def dumps(self) -> bytes:
        return orjson.dumps(self.to_dict(), option=JSON_OPTIONS, default=_json_default)

    def write(self, path: Path) -> Path:
        path.write_bytes(self.dumps() + b"\n")
        return path

    @classmethod
    def load(cls, path: Path) -> "RunManifest":
        data = orjson.loads(Path(path).read_bytes())
        if "manifest" in data and "command" not in data:
            data = data["manifest"]
        return cls(**{k: data[k] for k in ("command", "config", "version", "timestamp", "diagnostics", "run")
                      if k in data})


def _json_default(value: Any) -> Any:
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def manifest_path(out: str) -> Path:
    return Path(f"{out}.manifest.json")


def frame_to_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, float_format="%.17g", lineterminator="\n", na_rep="nan")


def frame_to_json(frame: pd.DataFrame, manifest: RunManifest) -> bytes:
    """JSON ที่มีเนื้อหาเดียวกับ CSV พร้อม manifest ฝังอยู่ (NaN -> null)"""
    rows = frame.astype(object).where(pd.notna(frame), None).to_dict(orient="records")
    payload = {"manifest": manifest.to_dict(), "columns": list(frame.columns), "rows": rows}
    return orjson.dumps(payload, option=JSON_OPTIONS, default=_json_default) + b"\n"


def write_table(frame: pd.DataFrame, out: Optional[str], fmt: str, manifest: RunManifest) -> List[Path]:
    """
    เขียนตารางผลลัพธ์

    Args:
        frame: ตารางผลลัพธ์
        out: พาธไฟล์ ("-" หรือ None = stdout)
        fmt: "csv" หรือ "json"
        manifest: run manifest (CSV เขียนเป็นไฟล์ <out>.manifest.json, JSON ฝังในไฟล์)

    Returns:
        รายการไฟล์ที่เขียน
    """
    written: List[Path] = []
    body = frame_to_csv(frame).encode("utf-8") if fmt == "csv" else frame_to_json(frame, manifest)

    if out is None or out == STDOUT:
        sys.stdout.buffer.write(body)
        sys.stdout.flush()
        return written

    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(body)
    written.append(path)
    if fmt == "csv":
        written.append(manifest.write(manifest_path(out)))
    logger.info(f"✅ wrote {len(frame)} rows to {path}")
    return written
