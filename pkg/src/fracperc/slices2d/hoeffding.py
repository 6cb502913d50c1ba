"""Empirical tails of bounded sums against the Hoeffding bound."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any, Protocol, Sequence

import numpy as np

from fracperc.core import CubeIndex, Realization
from fracperc.core.keyed import child_offsets

from .geometry import chord_lengths
from .lines import Line


class Summands(Protocol):
    """Independent bounded summands ``X_i in [a_i, b_i]`` with known means."""

    lower: np.ndarray
    upper: np.ndarray
    means: np.ndarray

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray: ...


@dataclass(frozen=True)
class UniformSummands:
    lower: np.ndarray
    upper: np.ndarray

    @classmethod
    def from_bounds(cls, bounds: Sequence[tuple[float, float]]) -> UniformSummands:
        array = np.asarray(bounds, dtype=np.float64).reshape(-1, 2)
        if np.any(array[:, 0] > array[:, 1]):
            raise ValueError("every bound needs a_i <= b_i")
        return cls(lower=array[:, 0], upper=array[:, 1])

    @property
    def means(self) -> np.ndarray:
        return (self.lower + self.upper) / 2.0

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return self.lower + (self.upper - self.lower) * rng.random((size, self.lower.size))


@dataclass(frozen=True)
class ChordSummands:
    """Per parent square, the sum of its children's chords, each child kept with probability ``p``.

    ``chords`` has shape ``(m, M^2)``: row ``i`` holds the children chords of parent ``i``.
    """

    chords: np.ndarray
    p: float

    @property
    def lower(self) -> np.ndarray:
        return np.zeros(self.chords.shape[0])

    @property
    def upper(self) -> np.ndarray:
        return self.chords.sum(axis=1)

    @property
    def means(self) -> np.ndarray:
        return self.p * self.upper

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        kept = rng.random((size, *self.chords.shape)) < self.p
        return np.einsum("tij,ij->ti", kept, self.chords)


def chord_summands(real: Realization, n: int, line: Line) -> ChordSummands:
    """Summands for ``L_n(line)`` given ``E_{n-1}``: one per retained level-``n-1`` square the line crosses."""

    if n < 1:
        raise ValueError("n must be at least 1")
    parents = real.cubes(n - 1)
    parent_chords = chord_lengths(parents, n - 1, real.M, line)
    crossing = parents[parent_chords > 0.0]
    offsets = child_offsets(real.M, 2)
    children = (crossing[:, None, :] * real.M + offsets[None, :, :]).reshape(-1, 2)
    chords = chord_lengths(children, n, real.M, line).reshape(crossing.shape[0], -1)
    return ChordSummands(chords=chords, p=real.params.p)


def root_chord_summands(line: Line, M: int, p: float) -> ChordSummands:
    """Single summand: the children of the unit square crossed by ``line``."""

    children = np.asarray([child.k for child in CubeIndex.root(2).children(M)], dtype=np.int64)
    return ChordSummands(chords=chord_lengths(children, 1, M, line)[None, :], p=p)


@dataclass(frozen=True)
class HoeffdingCheck:
    m: int
    t: float
    trials: int
    empirical_tail: float
    bound: float
    standard_error: float
    se_multiplier: float

    @property
    def passed(self) -> bool:
        return self.empirical_tail <= self.bound + self.se_multiplier * self.standard_error

    def to_dict(self) -> dict[str, Any]:
        payload = asdict(self)
        payload["passed"] = self.passed
        return payload


def hoeffding_bound(t: float, widths: np.ndarray) -> float:
    """``exp(-2 t^2 / sum (b_i - a_i)^2)``; 1 for ``t <= 0``."""

    if t <= 0.0:
        return 1.0
    spread = float(np.sum(np.square(widths)))
    if spread == 0.0:
        return 0.0
    return math.exp(-2.0 * t * t / spread)


def hoeffding_tail_check(
    m: int,
    bounds: Sequence[tuple[float, float]] | None,
    t: float,
    trials: int,
    *,
    summands: Summands | None = None,
    seed: int = 0,
    se_multiplier: float = 3.0,
    chunk: int = 100_000,
) -> HoeffdingCheck:
    """Simulate ``P(sum X - E sum X >= t)`` and compare it with the Hoeffding bound.

    Either ``bounds`` (uniform summands on each ``[a_i, b_i]``; a single pair is repeated ``m``
    times) or explicit ``summands`` must be given.
    """

    if trials < 1:
        raise ValueError("trials must be at least 1")
    if summands is None:
        if bounds is None:
            raise ValueError("bounds or summands are required")
        pairs = list(bounds)
        if len(pairs) == 1 and m > 1:
            pairs = pairs * m
        summands = UniformSummands.from_bounds(pairs)
    if summands.lower.size != m:
        raise ValueError(f"expected {m} summands, got {summands.lower.size}")
    rng = np.random.Generator(np.random.Philox(seed))
    expected = float(np.sum(summands.means))
    exceed = 0
    remaining = trials
    while remaining > 0:
        size = min(chunk, remaining)
        totals = summands.sample(rng, size).sum(axis=1)
        exceed += int(np.count_nonzero(totals - expected >= t))
        remaining -= size
    tail = exceed / trials
    return HoeffdingCheck(
        m=m,
        t=t,
        trials=trials,
        empirical_tail=tail,
        bound=hoeffding_bound(t, summands.upper - summands.lower),
        standard_error=math.sqrt(tail * (1.0 - tail) / trials),
        se_multiplier=se_multiplier,
    )


__all__ = [
    "ChordSummands",
    "HoeffdingCheck",
    "UniformSummands",
    "chord_summands",
    "hoeffding_bound",
    "hoeffding_tail_check",
    "root_chord_summands",
]
