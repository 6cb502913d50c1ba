"""Pydantic models describing experiments and their recorded results."""

from __future__ import annotations

import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Literal

from pydantic import BaseModel, ConfigDict, Field

from fracperc.core import derive_seed

SCHEMA_VERSION = 1


class RecipeName(str, Enum):
    """Experiments the harness knows how to run."""

    DIMENSION_SWEEP = "dimension-sweep"
    SLICE_GROWTH = "slice-growth"
    PROJECTION_DIMENSION = "projection-dimension"
    DIAGONAL_EVENT = "diagonal-event"
    SUM_CERTIFICATE = "sum-certificate"
    PROBABILITY_ADJUST = "probability-adjust"
    DISTANCE_CERTIFICATE = "distance-certificate"
    HOEFFDING_TAIL = "hoeffding-tail"


class ExperimentConfig(BaseModel):
    """Everything needed to run (and re-run) one experiment.

    Numeric fields are deliberately unconstrained here; :func:`validate_config` reports every
    out-of-range value at once instead of stopping at the first.
    """

    model_config = ConfigDict(extra="forbid", use_enum_values=True)

    schema_version: int = SCHEMA_VERSION
    command: str = "run"
    recipe: RecipeName
    d: int = 2
    M: int = 2
    p: float = 0.5
    probs: List[float] = Field(default_factory=list)
    coeffs: List[float] = Field(default_factory=list)
    depth: int = 8
    n_lo: int | None = None
    n_hi: int | None = None
    theta: float | None = None
    density_exponent: float | None = None
    epsilon: float | None = None
    alphas: List[float] = Field(default_factory=lambda: [math.pi / 6, math.pi / 4, math.pi / 3])
    ks: List[int] = Field(default_factory=lambda: [1, 2])
    min_len: float | None = None
    contrast_p: float | None = None
    summands: Literal["uniform", "chord"] = "uniform"
    m: int = 100
    t: float = 10.0
    bounds: List[float] = Field(default_factory=lambda: [0.0, 1.0])
    samples: int = 1_000_000
    trials: int = 20
    master_seed: int = 0
    seeds: List[int] | None = None
    workers: int | None = None
    output_dir: Path | None = None
    format: Literal["csv", "json"] = "csv"

    @property
    def level_range(self) -> tuple[int, int]:
        """``(n_lo, n_hi)`` with defaults ``depth // 2`` and ``depth``."""

        n_hi = self.depth if self.n_hi is None else self.n_hi
        n_lo = n_hi // 2 if self.n_lo is None else self.n_lo
        return n_lo, n_hi

    @property
    def trial_count(self) -> int:
        return len(self.seeds) if self.seeds is not None else self.trials

    def trial_seeds(self) -> list[int]:
        """Explicit seeds when given, otherwise ``derive_seed(master_seed, i)``."""

        if self.seeds is not None:
            return list(self.seeds)
        return [derive_seed(self.master_seed, index) for index in range(self.trials)]

    def family_probs(self) -> list[float]:
        return list(self.probs) if self.probs else [self.p] * self.d

    def family_coeffs(self) -> list[float]:
        return list(self.coeffs) if self.coeffs else [1.0] * len(self.family_probs())


class Violation(BaseModel):
    """One failed precondition, tied to the offending field."""

    field: str
    message: str
    condition: str

    def __str__(self) -> str:
        return f"{self.field}: {self.message} ({self.condition})"


class ExperimentRecord(BaseModel):
    """Config echo, metric rows, summary statistics and verdicts of one run."""

    schema_version: int = SCHEMA_VERSION
    recipe: str
    config: ExperimentConfig
    columns: List[str]
    rows: List[Dict[str, Any]] = Field(default_factory=list)
    summary: Dict[str, Any] = Field(default_factory=dict)
    verdicts: Dict[str, bool] = Field(default_factory=dict)
    partial: bool = False

    @property
    def passed(self) -> bool:
        return not self.partial and all(self.verdicts.values())

    def replay(self, *, workers: int | None = None) -> ExperimentRecord:
        """Re-run the echoed config without writing output."""

        from .runner import run_experiment

        config = self.config.model_copy(update={"output_dir": None})
        return run_experiment(config, workers=workers)


__all__ = ["ExperimentConfig", "ExperimentRecord", "RecipeName", "SCHEMA_VERSION", "Violation"]
