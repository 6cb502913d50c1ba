"""Box counts of angle-alpha projections onto the decreasing diagonal."""

from __future__ import annotations

import math

import numpy as np
from scipy import stats

from fracperc.core import Realization
from fracperc.errors import ExtinctRealizationError, LevelOutOfRangeError

from .lines import HALF_PI, SQRT2


def _covered_cells(first: np.ndarray, last: np.ndarray) -> int:
    """Number of integers covered by the inclusive ranges ``[first_i, last_i]``."""

    keep = last >= first
    first, last = first[keep], last[keep]
    if first.size == 0:
        return 0
    order = np.argsort(first, kind="stable")
    first, last = first[order], last[order]
    reach = np.maximum.accumulate(last)
    previous = np.concatenate(([first[0] - 1], reach[:-1]))
    fresh = last - np.maximum(first, previous + 1) + 1
    return int(np.clip(fresh, 0, None).sum())


def projection_box_count(real: Realization, n: int, alpha: float) -> int:
    """Number of length-``M^-n`` cells of the diagonal that meet the projection of ``E_n`` along ``alpha``.

    A cube projects to an open interval of length ``sqrt2 M^-n`` centered at the projection of its
    center; touching a cell only at an endpoint does not count.
    """

    if real.d != 2:
        raise ValueError("projections need d = 2")
    if not 0.0 < alpha < HALF_PI:
        raise ValueError(f"alpha must lie in (0, pi/2), got {alpha}")
    cubes = real.cubes(n)
    if cubes.shape[0] == 0:
        return 0
    width = float(real.M) ** n
    cos_a, sin_a = math.cos(alpha), math.sin(alpha)
    cx = (cubes[:, 0] + 0.5) / width
    cy = (cubes[:, 1] + 0.5) / width
    # diagonal parameter of the center, measured in cell units
    center = SQRT2 * (cos_a + sin_a * cx - cos_a * cy) / (sin_a + cos_a) * width
    half = 1.0 / SQRT2
    cells = math.ceil(SQRT2 * width)
    first = np.clip(np.floor(center - half), 0, cells - 1).astype(np.int64)
    last = np.clip(np.ceil(center + half) - 1, 0, cells - 1).astype(np.int64)
    return _covered_cells(first, last)


def projection_counts(real: Realization, alpha: float, n_lo: int, n_hi: int) -> np.ndarray:
    if n_hi > real.depth:
        raise LevelOutOfRangeError(n_hi, real.depth)
    return np.asarray([projection_box_count(real, n, alpha) for n in range(n_lo, n_hi + 1)], dtype=np.int64)


def projection_slope(real: Realization, alpha: float, n_lo: int, n_hi: int) -> float:
    """Least-squares slope of ``log count`` against ``n log M`` (box dimension of the projection)."""

    if not 0 <= n_lo < n_hi:
        raise ValueError(f"need 0 <= n_lo < n_hi, got [{n_lo}, {n_hi}]")
    counts = projection_counts(real, alpha, n_lo, n_hi)
    if counts[-1] == 0:
        raise ExtinctRealizationError(f"level {n_hi} is empty")
    levels = np.arange(n_lo, n_hi + 1)
    return float(stats.linregress(levels * math.log(real.M), np.log(counts)).slope)


__all__ = ["projection_box_count", "projection_counts", "projection_slope"]
