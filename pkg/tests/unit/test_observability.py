"""Unit tests for structured event logging."""

from __future__ import annotations

import json
import logging

import numpy as np
import pytest

from fracperc.observability import get_observability
from fracperc.settings import reload_settings


def test_structured_events_are_json(monkeypatch, caplog):
    monkeypatch.setenv("FRACPERC_OBSERVABILITY__STRUCTURED_LOGGING", "true")
    observability = get_observability(component="tests", settings=reload_settings())

    with caplog.at_level(logging.INFO, logger="fracperc.observability"):
        observability.emit_event("unit.event", counts=np.arange(3), slope=np.float64(1.5))

    payload = json.loads(caplog.records[-1].getMessage())
    assert payload["event"] == "unit.event"
    assert payload["component"] == "tests"
    assert payload["counts"] == [0, 1, 2]
    assert payload["slope"] == 1.5


def test_timed_block_reports_even_on_failure(caplog):
    observability = get_observability(component="tests")

    with caplog.at_level(logging.INFO, logger="fracperc.observability"):
        with pytest.raises(RuntimeError):
            with observability.timed("unit.timed", seed=3) as extra:
                extra["stage"] = "first"
                raise RuntimeError("boom")

    message = caplog.records[-1].getMessage()
    assert message.startswith("unit.timed | ")
    assert "'stage': 'first'" in message
    assert "duration_ms" in message


def test_debug_events_are_skipped_at_info(caplog):
    observability = get_observability(component="tests")

    with caplog.at_level(logging.INFO, logger="fracperc.observability"):
        observability.emit_event("unit.quiet", level=logging.DEBUG)

    assert not [record for record in caplog.records if "unit.quiet" in record.getMessage()]
