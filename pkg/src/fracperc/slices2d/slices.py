"""Slice lengths and line-hit counts of planar realizations."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np

from fracperc.core import Realization

from .geometry import chord_lengths
from .lines import SQRT2, Line, shifted_lines


def _planar(real: Realization) -> None:
    if real.d != 2:
        raise ValueError(f"slice operations need d = 2, got d = {real.d}")


def level_chords(real: Realization, n: int, line: Line, *, slack: float | None = None) -> np.ndarray:
    """Chord of ``line`` in every retained level-``n`` cube, aligned with ``real.cubes(n)``."""

    _planar(real)
    return chord_lengths(real.cubes(n), n, real.M, line, slack=slack)


def slice_length(real: Realization, n: int, line: Line, *, slack: float | None = None) -> float:
    """``L_n(line)``: total length of ``line`` inside ``E_n`` (compensated sum)."""

    return math.fsum(level_chords(real, n, line, slack=slack))


def slice_count(real: Realization, n: int, line: Line, *, slack: float | None = None) -> int:
    """Number of retained level-``n`` cubes whose interior meets ``line``."""

    return int(np.count_nonzero(level_chords(real, n, line, slack=slack)))


def split_small_bigg(chords: np.ndarray, n: int, M: int) -> tuple[np.ndarray, np.ndarray]:
    """Masks of hit cubes with chord below / at least ``M^-n / sqrt 2``."""

    threshold = 1.0 / (SQRT2 * float(M) ** n)
    hit = chords > 0.0
    bigg = chords >= threshold
    return hit & ~bigg, bigg


@dataclass(frozen=True)
class IncidenceCertificate:
    """Count bound and small/bigg containment for one (realization, line, level)."""

    n: int
    count: int
    length: float
    upper_length: float
    lower_length: float
    small: int
    bigg: int
    uncovered_small: int
    length_scale: float
    in_proved_family: bool | None = None

    @property
    def count_bound(self) -> float:
        return 2.0 * self.length_scale * (self.length + self.upper_length + self.lower_length)

    @property
    def bound_holds(self) -> bool:
        return self.count <= self.count_bound

    @property
    def containment_holds(self) -> bool:
        return self.uncovered_small == 0

    def to_dict(self) -> dict[str, Any]:
        payload = asdict(self)
        payload.update(
            count_bound=self.count_bound,
            bound_holds=self.bound_holds,
            containment_holds=self.containment_holds,
        )
        return payload


def incidence_certificate(
    real: Realization,
    n: int,
    line: Line,
    *,
    theta: float | None = None,
    slack: float | None = None,
) -> IncidenceCertificate:
    """Check ``#E_n(l) <= 2 M^n (L + L_up + L_low)`` and that every small cube is bigg for a shifted line."""

    chords = level_chords(real, n, line, slack=slack)
    upper, lower = shifted_lines(line, n, real.M)
    upper_chords = level_chords(real, n, upper, slack=slack)
    lower_chords = level_chords(real, n, lower, slack=slack)
    small, bigg = split_small_bigg(chords, n, real.M)
    _, bigg_upper = split_small_bigg(upper_chords, n, real.M)
    _, bigg_lower = split_small_bigg(lower_chords, n, real.M)
    uncovered = small & ~(bigg_upper | bigg_lower)
    return IncidenceCertificate(
        n=n,
        count=int(np.count_nonzero(chords)),
        length=math.fsum(chords),
        upper_length=math.fsum(upper_chords),
        lower_length=math.fsum(lower_chords),
        small=int(np.count_nonzero(small)),
        bigg=int(np.count_nonzero(bigg)),
        uncovered_small=int(np.count_nonzero(uncovered)),
        in_proved_family=None if theta is None else line.in_proved_family(theta),
        length_scale=float(real.M) ** n,
    )


__all__ = [
    "IncidenceCertificate",
    "incidence_certificate",
    "level_chords",
    "slice_count",
    "slice_length",
    "split_small_bigg",
]
