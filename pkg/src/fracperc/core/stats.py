"""Counting, survival and dimension primitives over realizations."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np
from scipy import stats

from fracperc.errors import ExtinctRealizationError, LevelOutOfRangeError

from .keyed import child_offsets, derive_seed, pack_indices, retain_mask
from .params import PercolationParams, dimension_formula
from .realization import Realization


def theoretical_dimension(params: PercolationParams) -> float:
    """``log(p M^d) / log M``; negative values mean almost-sure extinction."""

    return dimension_formula(params.d, params.M, params.p)


def extinction_probability(d: int, M: int, p: float, *, tol: float = 1e-15, max_iter: int = 1_000_000) -> float:
    """Smallest fixed point of ``q = (1 - p + p q)^(M^d)``, iterated upward from 0."""

    offspring = M**d
    q = 0.0
    for _ in range(max_iter):
        following = (1.0 - p + p * q) ** offspring
        if abs(following - q) <= tol:
            return following
        q = following
    return q


def survival_probability(params: PercolationParams) -> float:
    return 1.0 - extinction_probability(params.d, params.M, params.p)


def survives(params: PercolationParams, depth: int) -> bool:
    """Whether ``E_depth`` is nonempty, found by depth-first search of the keyed stream.

    Only the cubes on the way to the first surviving path are evaluated, so supercritical
    runs stay cheap at depths where full generation would not fit in memory.
    """

    if depth < 0:
        raise ValueError("depth must be non-negative")
    offsets = child_offsets(params.M, params.d)
    stack: list[tuple[int, np.ndarray]] = [(0, np.zeros(params.d, dtype=np.int64))]
    while stack:
        level, coords = stack.pop()
        if level == depth:
            return True
        children = coords[None, :] * params.M + offsets
        keys = pack_indices(children, level + 1, params.M)
        kept = children[retain_mask(params.seed, level + 1, keys, params.p)]
        # reversed so the lowest index is explored first
        stack.extend((level + 1, child) for child in kept[::-1])
    return False


def survival_estimate(params: PercolationParams, depth: int, trials: int) -> float:
    """Fraction of trial seeds ``derive_seed(params.seed, i)`` whose level ``depth`` is nonempty."""

    if trials < 1:
        raise ValueError("trials must be at least 1")
    alive = sum(survives(params.with_seed(derive_seed(params.seed, index)), depth) for index in range(trials))
    return alive / trials


@dataclass(frozen=True)
class BoxCountFit:
    """Least-squares fit of ``log #E_n`` against ``n log M``."""

    slope: float
    intercept: float
    stderr: float
    levels: tuple[int, ...]
    counts: tuple[int, ...]

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def box_count_fit(real: Realization, n_lo: int, n_hi: int) -> BoxCountFit:
    if not 0 <= n_lo < n_hi:
        raise ValueError(f"need 0 <= n_lo < n_hi, got [{n_lo}, {n_hi}]")
    if n_hi > real.depth:
        raise LevelOutOfRangeError(n_hi, real.depth)
    counts = real.level_counts()[n_lo : n_hi + 1]
    if counts[-1] == 0:
        raise ExtinctRealizationError(f"level {n_hi} is empty")
    levels = np.arange(n_lo, n_hi + 1)
    fit = stats.linregress(levels * math.log(real.M), np.log(counts))
    return BoxCountFit(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        stderr=float(fit.stderr),
        levels=tuple(int(level) for level in levels),
        counts=tuple(int(count) for count in counts),
    )


def box_count_slope(real: Realization, n_lo: int, n_hi: int) -> float:
    """Box-counting dimension estimate over levels ``n_lo..n_hi``."""

    return box_count_fit(real, n_lo, n_hi).slope


def normalized_counts(real: Realization) -> np.ndarray:
    """``#E_n / (p M^d)^n`` for every level (the martingale of the branching process)."""

    scale = real.params.mean_offspring ** np.arange(real.depth + 1)
    return real.level_counts() / scale


__all__ = [
    "BoxCountFit",
    "box_count_fit",
    "box_count_slope",
    "extinction_probability",
    "normalized_counts",
    "survival_estimate",
    "survival_probability",
    "survives",
    "theoretical_dimension",
]
