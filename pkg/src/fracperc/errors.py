"""Exception hierarchy shared across fracperc modules."""

from __future__ import annotations

from typing import Any


class FracpercError(RuntimeError):
    """Base class for library errors."""


class BudgetExceededError(FracpercError):
    """Raised when a configured resource ceiling would be exceeded."""

    def __init__(self, resource: str, requested: float, limit: float) -> None:
        self.resource = resource
        self.requested = requested
        self.limit = limit
        super().__init__(f"{resource} budget exceeded: requested {requested:.6g}, limit {limit:.6g}")


class LevelOutOfRangeError(FracpercError, ValueError):
    """Raised when a level lies outside the generated depth."""

    def __init__(self, level: int, depth: int) -> None:
        self.level = level
        self.depth = depth
        super().__init__(f"level {level} outside [0, {depth}]")


class ExtinctRealizationError(FracpercError):
    """Raised when an operation needs a nonempty level."""


class CubeNotRetainedError(FracpercError, KeyError):
    """Raised when a cube is not part of the realization."""

    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else "cube not retained"


class InfeasibleProbabilitiesError(FracpercError, ValueError):
    """Raised when probability adjustment preconditions fail."""


class UnsupportedModeError(FracpercError, ValueError):
    """Raised when a computation mode is unavailable for the given dimension."""


class ConfigValidationError(FracpercError, ValueError):
    """Raised when an experiment configuration has violations."""

    def __init__(self, violations: list[Any]) -> None:
        self.violations = list(violations)
        details = "; ".join(str(item) for item in self.violations)
        super().__init__(f"invalid experiment config: {details}")


__all__ = [
    "BudgetExceededError",
    "ConfigValidationError",
    "CubeNotRetainedError",
    "ExtinctRealizationError",
    "FracpercError",
    "InfeasibleProbabilitiesError",
    "LevelOutOfRangeError",
    "UnsupportedModeError",
]
