"""Shared fixtures for the fracperc test suite."""

from __future__ import annotations

import pytest

from fracperc.settings import get_settings


@pytest.fixture(autouse=True)
def _fresh_settings(monkeypatch: pytest.MonkeyPatch):
    """Drop cached settings and process-wide overrides around every test."""

    for name in ("FRACPERC_MEMORY_BUDGET", "FRACPERC_SETTINGS_FILE"):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
