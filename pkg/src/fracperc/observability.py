"""Observability helpers for structured logging and run timings."""

from __future__ import annotations

import json
import logging
import time
from contextlib import contextmanager
from datetime import datetime, timezone
from typing import Any, Iterator, Mapping

import numpy as np
from rich.logging import RichHandler

from fracperc.settings import Settings, get_settings

_LOGGER = logging.getLogger("fracperc.observability")
_LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"


class Observability:
    """Emit structured events for long-running computations."""

    def __init__(
        self,
        *,
        settings: Settings,
        component: str | None = None,
        logger: logging.Logger | None = None,
    ) -> None:
        self.settings = settings
        self.component = component or "core"
        self._logger = logger or _LOGGER
        self._structured_logging = bool(settings.observability.structured_logging)

    def emit_event(self, event: str, *, level: int = logging.INFO, **fields: Any) -> None:
        """Emit a structured log record."""

        if not self._logger.isEnabledFor(level):
            return
        payload = {
            "event": event,
            "component": self.component,
            "timestamp": datetime.now(timezone.utc).isoformat(),
            **_sanitize_dict(fields),
        }
        if self._structured_logging:
            self._logger.log(level, json.dumps(payload, default=_serialize))
        else:
            self._logger.log(level, "%s | %s", event, payload)

    @contextmanager
    def timed(self, event: str, **fields: Any) -> Iterator[dict[str, Any]]:
        """Emit ``event`` with ``duration_ms`` when the block exits.

        The yielded dict may be updated inside the block; its entries are added to the event.
        """

        extra: dict[str, Any] = {}
        started = time.perf_counter()
        try:
            yield extra
        finally:
            duration_ms = (time.perf_counter() - started) * 1000.0
            self.emit_event(event, duration_ms=round(duration_ms, 3), **fields, **extra)


def get_observability(*, component: str | None = None, settings: Settings | None = None) -> Observability:
    """Return an :class:`Observability` instance for the requested component."""

    resolved = settings or get_settings()
    return Observability(settings=resolved, component=component, logger=_LOGGER)


def configure_logging(settings: Settings | None = None) -> None:
    """Install a root handler at the configured level.

    Structured runs get plain single-line records so the JSON payloads stay parseable;
    interactive runs get rich formatting.
    """

    resolved = settings or get_settings()
    level = getattr(logging, resolved.runtime.log_level.upper(), logging.INFO)
    if resolved.observability.structured_logging:
        logging.basicConfig(level=level, format=_LOG_FORMAT, force=True)
        return
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(rich_tracebacks=True, show_path=False)],
        force=True,
    )


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _serialize(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (list, tuple)):
        return [_serialize(item) for item in value]
    if isinstance(value, dict):
        return {str(key): _serialize(val) for key, val in value.items()}
    return str(value)


def _sanitize_dict(payload: Mapping[str, Any]) -> Mapping[str, Any]:
    sanitized: dict[str, Any] = {}
    for key, value in payload.items():
        if isinstance(value, Mapping):
            sanitized[str(key)] = _sanitize_dict(value)
        else:
            sanitized[str(key)] = value
    return sanitized


__all__ = ["Observability", "configure_logging", "get_observability"]
