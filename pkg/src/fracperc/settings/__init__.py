"""Public interface for fracperc configuration settings."""

from .config import (
    DEFAULT_THRESHOLDS,
    MEMORY_BUDGET_ENV_VAR,
    PROJECT_ROOT,
    Settings,
    Threshold,
    get_settings,
    reload_settings,
)

__all__ = [
    "DEFAULT_THRESHOLDS",
    "MEMORY_BUDGET_ENV_VAR",
    "PROJECT_ROOT",
    "Settings",
    "Threshold",
    "get_settings",
    "reload_settings",
]
