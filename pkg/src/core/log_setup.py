"""
Logging setup
ตั้งค่า logging แบบ queue เพื่อไม่ให้ I/O ไปหน่วงงานคำนวณ
"""
import logging
import queue as _log_queue
import sys
from logging.handlers import QueueHandler, QueueListener
from pathlib import Path
from typing import Optional

import colorlog

LOG_QUEUE_LISTENER: Optional[QueueListener] = None


def setup_logging(level: str = "INFO", log_file: Optional[str] = None) -> None:
    """
    ติดตั้ง QueueHandler ที่ root logger และ QueueListener ที่เขียนออก console/file

    Args:
        level: ระดับ log บน console (DEBUG/INFO/WARNING/...)
        log_file: พาธไฟล์ log (None = ไม่เขียนไฟล์)
    """
    global LOG_QUEUE_LISTENER
    shutdown_logging()

    root_logger = logging.getLogger()
    root_logger.setLevel(logging.DEBUG)

    # Console บน stderr เพื่อให้ stdout เป็นข้อมูลล้วน
    stream_handler = colorlog.StreamHandler(sys.stderr)
    stream_handler.setLevel(getattr(logging, level.upper(), logging.INFO))
    stream_handler.setFormatter(colorlog.ColoredFormatter(
        "%(log_color)s%(levelname)-8s%(reset)s %(name)s: %(message)s",
        log_colors={
            "DEBUG": "cyan",
            "INFO": "green",
            "WARNING": "yellow",
            "ERROR": "red",
            "CRITICAL": "red,bg_white",
        },
    ))
    handlers = [stream_handler]

    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(logging.Formatter(
            "%(asctime)s [%(levelname)s] %(name)s: %(message)s"))
        handlers.append(file_handler)

    # Remove any direct handlers attached earlier
    for h in list(root_logger.handlers):
        root_logger.removeHandler(h)

    log_queue = _log_queue.Queue(maxsize=10000)
    queue_handler = QueueHandler(log_queue)
    queue_handler.setLevel(logging.DEBUG)
    root_logger.addHandler(queue_handler)

    LOG_QUEUE_LISTENER = QueueListener(log_queue, *handlers, respect_handler_level=True)
    LOG_QUEUE_LISTENER.start()


def shutdown_logging() -> None:
    """หยุด QueueListener (flush ข้อความที่ค้างอยู่)"""
    global LOG_QUEUE_LISTENER
    if LOG_QUEUE_LISTENER is not None:
        LOG_QUEUE_LISTENER.stop()
        LOG_QUEUE_LISTENER = None
