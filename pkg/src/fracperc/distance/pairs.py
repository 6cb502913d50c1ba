"""Distance ranges between M-adic cubes of the same level."""

from __future__ import annotations

import numpy as np

from fracperc.core import CubeIndex
from fracperc.errors import BudgetExceededError
from fracperc.settings import get_settings


def offset_bounds(offsets: np.ndarray, n: int, M: int) -> tuple[np.ndarray, np.ndarray]:
    """Min and max distance between two closed level-``n`` cubes whose indices differ by ``offsets``.

    ``offsets`` has shape ``(count, d)``; only ``|offset|`` matters. Per axis the nearest
    points are ``max(0, |k| - 1)`` sides apart and the farthest ``|k| + 1``. Both squared
    sums are exact integers divided once by ``M^(2n)``, so nested cubes give nested ranges
    in floating point too.
    """

    steps = np.abs(np.asarray(offsets, dtype=np.int64))
    if steps.ndim == 1:
        steps = steps[None, :]
    near = np.maximum(steps - 1, 0)
    far = steps + 1
    scale = float(M ** (2 * n))
    return np.sqrt(np.sum(near * near, axis=1) / scale), np.sqrt(np.sum(far * far, axis=1) / scale)


def pair_distance_interval(cube_a: CubeIndex, cube_b: CubeIndex, M: int) -> tuple[float, float]:
    """``[min, max]`` of ``|x - y|`` over ``x`` in ``cube_a``, ``y`` in ``cube_b``."""

    if cube_a.n != cube_b.n or cube_a.d != cube_b.d:
        raise ValueError("cubes must share level and dimension")
    cube_a.validate(M)
    cube_b.validate(M)
    offset = np.asarray(cube_a.k, dtype=np.int64) - np.asarray(cube_b.k, dtype=np.int64)
    lo, hi = offset_bounds(offset, cube_a.n, M)
    return float(lo[0]), float(hi[0])


def _pack(steps: np.ndarray, width: int) -> np.ndarray:
    weights = width ** np.arange(steps.shape[-1], dtype=np.int64)
    return steps @ weights


def unpack_offsets(keys: np.ndarray, width: int, d: int) -> np.ndarray:
    digits = []
    rest = np.asarray(keys, dtype=np.int64)
    for _ in range(d):
        digits.append(rest % width)
        rest = rest // width
    return np.stack(digits, axis=1)


def distinct_offsets(
    cubes_a: np.ndarray,
    cubes_b: np.ndarray,
    n: int,
    M: int,
    *,
    budget: int | None = None,
    chunk_pairs: int = 2_000_000,
    require_distinct_coordinates: bool = False,
) -> tuple[np.ndarray, np.ndarray]:
    """Distinct ``|k_a - k_b|`` over all cube pairs, with multiplicities.

    Returns ``(offsets, counts)``; offsets have shape ``(count, d)``. Pairs are processed in
    blocks of rows of ``cubes_a`` and deduplicated per block.

    Raises:
        BudgetExceededError: the number of pairs exceeds ``budget`` (default
            ``settings.budget.max_pairs``).
    """

    cubes_a = np.asarray(cubes_a, dtype=np.int64)
    cubes_b = np.asarray(cubes_b, dtype=np.int64)
    d = cubes_a.shape[1]
    limit = budget if budget is not None else get_settings().budget.max_pairs
    pairs = cubes_a.shape[0] * cubes_b.shape[0]
    if pairs > limit:
        raise BudgetExceededError("cube pairs", pairs, limit)
    if pairs == 0:
        return np.zeros((0, d), dtype=np.int64), np.zeros(0, dtype=np.int64)
    width = M**n
    rows = max(1, chunk_pairs // cubes_b.shape[0])
    keys: list[np.ndarray] = []
    counts: list[np.ndarray] = []
    for start in range(0, cubes_a.shape[0], rows):
        block = np.abs(cubes_a[start : start + rows, None, :] - cubes_b[None, :, :]).reshape(-1, d)
        if require_distinct_coordinates:
            block = block[np.all(block > 0, axis=1)]
        unique, multiplicity = np.unique(_pack(block, width), return_counts=True)
        keys.append(unique)
        counts.append(multiplicity)
    merged, inverse = np.unique(np.concatenate(keys), return_inverse=True)
    totals = np.bincount(inverse, weights=np.concatenate(counts)).astype(np.int64)
    return unpack_offsets(merged, width, d), totals


__all__ = ["distinct_offsets", "offset_bounds", "pair_distance_interval", "unpack_offsets"]
