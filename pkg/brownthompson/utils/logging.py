"""Logging configuration and utilities."""

import sys
from typing import Any, Dict, Optional

import orjson
from loguru import logger as _loguru_logger

logger = _loguru_logger

from ..config import config

_HUMAN_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
)


def serialize_json(record: Dict[str, Any]) -> str:
    """Serialize log record to JSON."""
    log_data = {
        "timestamp": record["time"].isoformat(),
        "level": record["level"].name,
        "message": record["message"],
        "module": record["module"],
        "function": record["function"],
        "line": record["line"],
    }

    if record.get("extra"):
        log_data.update({k: v for k, v in record["extra"].items() if k != "serialized"})

    if record.get("exception"):
        log_data["exception"] = {
            "type": record["exception"].type.__name__,
            "value": str(record["exception"].value),
        }

    return orjson.dumps(log_data, default=str).decode()


def setup_logging(level: Optional[str] = None):
    """Configure logging based on settings.

    Everything goes to stderr: stdout carries command output (tables,
    traces, DOT) and must stay machine-readable.
    """
    global logger  # noqa: PLW0603

    level = level or config.settings.log_level
    _loguru_logger.remove()

    def patch_record(record: Dict[str, Any]) -> None:
        """Modify log record in-place before formatting."""
        if config.telemetry.json_logging:
            record["extra"]["serialized"] = serialize_json(record)

    logger = _loguru_logger.patch(patch_record)

    if config.telemetry.sink in ("stderr", "both"):
        if config.telemetry.json_logging:
            _loguru_logger.add(sys.stderr, format="{extra[serialized]}", level=level, colorize=False)
        else:
            _loguru_logger.add(sys.stderr, format=_HUMAN_FORMAT, level=level)

    if config.log_to_file:
        _loguru_logger.add(
            config.telemetry.log_file,
            rotation="10 MB",
            retention="7 days",
            format="{extra[serialized]}" if config.telemetry.json_logging else "{time} | {level} | {message}",
            level=level
        )


def configure_level(level: str):
    """Re-install sinks at a new level (used by the CLI -v flag)."""
    setup_logging(level)


def get_logger(name: str):
    """Get a contextualized logger."""
    return logger.bind(module=name)


# Setup logging on import
setup_logging()
