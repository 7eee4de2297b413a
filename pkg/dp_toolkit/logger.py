"""Structured logging for proof checking, extraction and the machine pipeline."""

import json
import logging
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Any, Dict, Optional, Union

ROOT_LOGGER = "dp_toolkit"


@dataclass
class ProofLogEntry:
    """Structured log entry for one toolkit operation."""
    level: str
    operation: str
    message: Optional[str] = None
    sequent: Optional[str] = None
    method: Optional[str] = None
    steps: Optional[int] = None
    duration_ms: Optional[float] = None
    context: Dict[str, Any] = field(default_factory=dict)
    timestamp: datetime = field(default_factory=datetime.now)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "timestamp": self.timestamp.isoformat(),
            "level": self.level,
            "operation": self.operation,
        }

        # Only include non-None fields
        for name in ("message", "sequent", "method", "steps"):
            value = getattr(self, name)
            if value is not None:
                data[name] = value

        if self.duration_ms is not None:
            data["duration_ms"] = round(self.duration_ms, 3)

        if self.context:
            data["context"] = self.context

        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=None, separators=(",", ":"), default=str)

    def human_readable(self) -> str:
        parts = [f"[{self.operation}]"]
        if self.message:
            parts.append(self.message)
        if self.method:
            parts.append(f"method={self.method}")
        if self.sequent:
            parts.append(f"sequent: {self.sequent}")
        if self.steps is not None:
            parts.append(f"steps={self.steps}")
        if self.duration_ms is not None:
            parts.append(f"({self.duration_ms:.1f}ms)")
        return " ".join(parts)


class ToolkitLogger:
    """Logger with a stderr console handler and optional rotating text/JSON files."""

    def __init__(
        self,
        level: str = "WARNING",
        log_dir: Optional[str] = None,
        json_logs: bool = False,
        max_log_size: int = 10 * 1024 * 1024,
        backup_count: int = 3,
        name: str = ROOT_LOGGER,
    ):
        self.level = level.upper()
        self.log_dir = Path(log_dir) if log_dir else None
        self.json_logs = json_logs
        self.max_log_size = max_log_size
        self.backup_count = backup_count
        self.logger = logging.getLogger(name)
        self.json_logger: Optional[logging.Logger] = None
        self._setup_handlers()

    def _setup_handlers(self) -> None:
        self.logger.setLevel(logging.DEBUG)
        self.logger.propagate = False
        for handler in list(self.logger.handlers):
            handler.close()
        self.logger.handlers.clear()

        text_formatter = logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")

        # stdout carries command results only
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(getattr(logging, self.level, logging.WARNING))
        console_handler.setFormatter(text_formatter)
        self.logger.addHandler(console_handler)

        if self.log_dir is None:
            return

        self.log_dir.mkdir(parents=True, exist_ok=True)
        text_handler = RotatingFileHandler(
            self.log_dir / "dp_toolkit.log",
            maxBytes=self.max_log_size,
            backupCount=self.backup_count,
        )
        text_handler.setLevel(logging.DEBUG)
        text_handler.setFormatter(text_formatter)
        self.logger.addHandler(text_handler)

        if self.json_logs:
            self.json_logger = logging.getLogger(f"{self.logger.name}.json")
            self.json_logger.setLevel(logging.DEBUG)
            self.json_logger.propagate = False
            for handler in list(self.json_logger.handlers):
                handler.close()
            self.json_logger.handlers.clear()
            json_handler = RotatingFileHandler(
                self.log_dir / "dp_toolkit.jsonl",
                maxBytes=self.max_log_size,
                backupCount=self.backup_count,
            )
            json_handler.setFormatter(logging.Formatter("%(message)s"))
            self.json_logger.addHandler(json_handler)

    def log_entry(self, entry: ProofLogEntry) -> None:
        if self.json_logger is not None:
            self.json_logger.info(entry.to_json())

        level = getattr(logging, entry.level.upper(), logging.INFO)
        self.logger.log(level, entry.human_readable())

    def log_check(self, sequent: str, ok: bool, path: Optional[tuple] = None, reason: Optional[str] = None) -> None:
        context: Dict[str, Any] = {"ok": ok}
        if path is not None:
            context["path"] = list(path)
        if reason:
            context["reason"] = reason
        self.log_entry(ProofLogEntry(
            level="INFO" if ok else "WARNING",
            operation="CHECK",
            message="derivation checks" if ok else "derivation rejected",
            sequent=sequent,
            context=context,
        ))

    def log_extraction(
        self,
        method: str,
        index: int,
        sequent: str,
        base_size: int,
        duration_ms: Optional[float] = None,
    ) -> None:
        self.log_entry(ProofLogEntry(
            level="INFO",
            operation="EXTRACT",
            message=f"disjunct {index}",
            sequent=sequent,
            method=method,
            duration_ms=duration_ms,
            context={"base_size": base_size},
        ))

    def log_normalization(self, sequent: str, steps: int, duration_ms: Optional[float] = None) -> None:
        self.log_entry(ProofLogEntry(
            level="INFO",
            operation="NORMALIZE",
            sequent=sequent,
            steps=steps,
            duration_ms=duration_ms,
        ))

    def log_tm_step(self, operation: str, machine: str, n: int, **context: Any) -> None:
        self.log_entry(ProofLogEntry(
            level="INFO",
            operation=f"TM_{operation.upper()}",
            message=f"{machine} n={n}",
            context=context,
        ))

    def log_error(self, operation: str, error: Union[str, Exception], context: Optional[Dict[str, Any]] = None) -> None:
        details = dict(context or {})
        if hasattr(error, "to_dict"):
            details.update(error.to_dict())
        self.log_entry(ProofLogEntry(
            level="ERROR",
            operation=operation,
            message=str(error),
            context=details,
        ))


class Stopwatch:
    """Context manager measuring elapsed milliseconds."""

    def __enter__(self) -> "Stopwatch":
        self.start = time.perf_counter()
        self.elapsed_ms = 0.0
        return self

    def __exit__(self, *exc) -> None:
        self.elapsed_ms = (time.perf_counter() - self.start) * 1000.0


_toolkit_logger: Optional[ToolkitLogger] = None


def setup_logging(config: Any = None) -> ToolkitLogger:
    """Configure the package logger from a LoggingConfig (or defaults)."""
    global _toolkit_logger

    if config is None:
        _toolkit_logger = ToolkitLogger()
    else:
        _toolkit_logger = ToolkitLogger(
            level=config.level,
            log_dir=config.log_dir,
            json_logs=config.json_logs,
            max_log_size=int(config.max_file_size_mb * 1024 * 1024),
            backup_count=config.backup_count,
        )
    return _toolkit_logger


def get_toolkit_logger() -> ToolkitLogger:
    global _toolkit_logger

    if _toolkit_logger is None:
        _toolkit_logger = ToolkitLogger()
    return _toolkit_logger
