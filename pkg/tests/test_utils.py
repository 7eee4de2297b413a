"""Tests for file output, growth measurement, timing and structured logging."""

import json
import logging
from datetime import datetime

import pytest

from dp_toolkit.logger import ProofLogEntry, Stopwatch, ToolkitLogger
from dp_toolkit.utils import atomic_write_text, default_certificate_path, loglog_slope, timed


class TestAtomicWrite:
    def test_creates_parent_directories(self, tmp_path):
        target = tmp_path / "a" / "b" / "out.txt"
        assert atomic_write_text(target, "hello\n") == target
        assert target.read_text() == "hello\n"

    def test_replaces_and_leaves_no_temporaries(self, tmp_path):
        target = tmp_path / "out.txt"
        atomic_write_text(target, "first")
        atomic_write_text(str(target), "second")
        assert target.read_text() == "second"
        assert [p.name for p in tmp_path.iterdir()] == ["out.txt"]


class TestGrowth:
    def test_quadratic_slope(self):
        assert loglog_slope([1, 2, 4], [1, 4, 16]) == pytest.approx(2.0)

    def test_linear_slope_with_constant(self):
        assert loglog_slope([1, 10, 100], [5, 50, 500]) == pytest.approx(1.0)

    def test_needs_two_points(self):
        with pytest.raises(ValueError):
            loglog_slope([1], [1])
        with pytest.raises(ValueError):
            loglog_slope([1, 2], [1])


def test_default_certificate_path(tmp_path):
    assert default_certificate_path("proofs/conj.nj", tmp_path, ".cert") == tmp_path / "conj.cert"


def test_timed_logs_at_debug(caplog):
    @timed("square")
    def square(x):
        return x * x

    # the package logger does not propagate to the root handler
    utils_logger = logging.getLogger("dp_toolkit.utils")
    utils_logger.addHandler(caplog.handler)
    try:
        with caplog.at_level(logging.DEBUG, logger="dp_toolkit.utils"):
            assert square(3) == 9
    finally:
        utils_logger.removeHandler(caplog.handler)
    assert any(record.getMessage().startswith("square took") for record in caplog.records)
    assert square.__name__ == "square"


class TestProofLogEntry:
    def test_to_dict_omits_unset_fields(self):
        entry = ProofLogEntry(
            level="INFO",
            operation="CHECK",
            sequent="p => p",
            timestamp=datetime(2024, 1, 2, 3, 4, 5),
        )
        assert entry.to_dict() == {
            "timestamp": "2024-01-02T03:04:05",
            "level": "INFO",
            "operation": "CHECK",
            "sequent": "p => p",
        }

    def test_duration_rounded_and_context_kept(self):
        entry = ProofLogEntry(level="INFO", operation="EXTRACT", duration_ms=1.23456, context={"base_size": 3})
        data = json.loads(entry.to_json())
        assert data["duration_ms"] == 1.235
        assert data["context"] == {"base_size": 3}

    def test_human_readable(self):
        entry = ProofLogEntry(level="INFO", operation="NORMALIZE", sequent="p => p", steps=2)
        assert entry.human_readable() == "[NORMALIZE] sequent: p => p steps=2"


class TestToolkitLogger:
    def test_writes_text_and_json_files(self, tmp_path):
        toolkit_logger = ToolkitLogger(level="ERROR", log_dir=str(tmp_path), json_logs=True, name="dp_toolkit.test")
        try:
            toolkit_logger.log_extraction("bm", 1, "p => p | q", base_size=2)
            toolkit_logger.log_check("p => q", ok=False, path=(0, 1), reason="rule mismatch")
        finally:
            for log in (toolkit_logger.logger, toolkit_logger.json_logger):
                for handler in list(log.handlers):
                    handler.close()
                log.handlers.clear()

        text = (tmp_path / "dp_toolkit.log").read_text()
        assert "[EXTRACT] disjunct 1 method=bm" in text
        records = [json.loads(line) for line in (tmp_path / "dp_toolkit.jsonl").read_text().splitlines()]
        assert [r["operation"] for r in records] == ["EXTRACT", "CHECK"]
        assert records[1]["context"] == {"ok": False, "path": [0, 1], "reason": "rule mismatch"}

    def test_console_only_without_log_dir(self):
        toolkit_logger = ToolkitLogger(name="dp_toolkit.console")
        assert len(toolkit_logger.logger.handlers) == 1
        assert toolkit_logger.json_logger is None


def test_stopwatch():
    with Stopwatch() as watch:
        sum(range(1000))
    assert watch.elapsed_ms >= 0.0
