"""Volumes of hyperplane slices ``H_t = {y : a.y = t}`` through product cubes."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any, Literal, Sequence

import numpy as np

from fracperc.errors import BudgetExceededError, UnsupportedModeError
from fracperc.settings import get_settings
from fracperc.slices2d import SQRT2, Line, chord_lengths

from .family import Coefficients, FamilyRealization

VolumeMode = Literal["exact", "monte_carlo"]

_UNIT_CORNERS = np.indices((2, 2, 2)).reshape(3, -1).T.astype(np.float64)
# (base corner, axis) for the 12 edges of the unit cube
_EDGE_BASES = np.asarray([corner for axis in range(3) for corner in _UNIT_CORNERS if corner[axis] == 0.0])
_EDGE_AXES = np.repeat(np.arange(3), 4)


def matched_planar_line(coeffs: Coefficients, t: float) -> Line:
    """Line carrying ``H_t`` after reflecting the second axis (``y -> 1 - y``).

    ``a_1 x + a_2 y = t`` becomes ``a_1 x - a_2 y' = t - a_2``: direction ``(a_2, a_1)``,
    crossing the decreasing diagonal at ``z = sqrt2 t / (a_1 + a_2)``.
    """

    if coeffs.d != 2:
        raise ValueError("a planar line needs two coefficients")
    a1, a2 = coeffs.a
    return Line(math.atan2(a1, a2), SQRT2 * t / (a1 + a2))


def slice_cubes(
    family: FamilyRealization,
    coeffs: Coefficients,
    t: float,
    n: int,
    *,
    budget: int | None = None,
) -> np.ndarray:
    """Retained level-``n`` product cubes whose interior meets ``H_t``, shape ``(count, d)``.

    Coordinates are chosen one axis at a time; partial sums that cannot reach ``t``
    with any completion are dropped before the next axis is broadcast.
    """

    if coeffs.d != family.d:
        raise ValueError(f"{coeffs.d} coefficients for a family of {family.d} members")
    indices = family.member_indices(n)
    d = family.d
    if any(index.size == 0 for index in indices):
        return np.zeros((0, d), dtype=np.int64)
    limit = budget if budget is not None else get_settings().budget.max_product_cubes
    width = float(family.M**n)
    lows = [a * (index / width) for a, index in zip(coeffs.a, indices)]
    highs = [a * ((index + 1) / width) for a, index in zip(coeffs.a, indices)]
    rest_lo = np.concatenate((np.cumsum([low.min() for low in lows][::-1])[::-1], [0.0]))
    rest_hi = np.concatenate((np.cumsum([high.max() for high in highs][::-1])[::-1], [0.0]))
    margin = 1e-12 * coeffs.total

    positions = np.zeros((1, 0), dtype=np.int64)
    part_lo = np.zeros(1)
    part_hi = np.zeros(1)
    for axis in range(d):
        pairs = part_lo.size * lows[axis].size
        if pairs > limit:
            raise BudgetExceededError("product cubes", pairs, limit)
        new_lo = part_lo[:, None] + lows[axis][None, :]
        new_hi = part_hi[:, None] + highs[axis][None, :]
        if axis == d - 1:
            keep = (new_lo < t) & (new_hi > t)
        else:
            keep = (new_lo + rest_lo[axis + 1] < t + margin) & (new_hi + rest_hi[axis + 1] > t - margin)
        rows, cols = np.nonzero(keep)
        positions = np.concatenate((positions[rows], cols[:, None]), axis=1)
        part_lo, part_hi = new_lo[rows, cols], new_hi[rows, cols]
        if rows.size == 0:
            break
    if positions.shape[1] < d:
        return np.zeros((0, d), dtype=np.int64)
    return np.stack([indices[axis][positions[:, axis]] for axis in range(d)], axis=1)


def unit_cube_plane_areas(a: Sequence[float], offsets: np.ndarray) -> np.ndarray:
    """Area of ``{u in [0,1]^3 : a.u = s}`` for each ``s`` in ``offsets``; ``a`` positive, unit norm.

    The section polygon is built from the plane's crossings with the twelve edges, ordered
    by angle about its centroid and measured with the shoelace formula in the ``(u_0, u_1)``
    projection, divided by ``a_2``.
    """

    normal = np.asarray(a, dtype=np.float64)
    offsets = np.asarray(offsets, dtype=np.float64).ravel()
    base_dot = _EDGE_BASES @ normal
    lam = (offsets[:, None] - base_dot[None, :]) / normal[_EDGE_AXES][None, :]
    valid = (lam >= 0.0) & (lam <= 1.0)
    points = np.broadcast_to(_EDGE_BASES[None, :, :2], (offsets.size, 12, 2)).copy()
    for axis in (0, 1):
        moving = _EDGE_AXES == axis
        points[:, moving, axis] += lam[:, moving]
    counts = valid.sum(axis=1)
    safe = np.maximum(counts, 1)[:, None]
    centroid = np.where(valid[:, :, None], points, 0.0).sum(axis=1) / safe
    angles = np.arctan2(points[:, :, 1] - centroid[:, None, 1], points[:, :, 0] - centroid[:, None, 0])
    angles = np.where(valid, angles, 4.0)
    order = np.argsort(angles, axis=1, kind="stable")
    ordered = np.take_along_axis(points, order[:, :, None], axis=1)
    ordered_valid = np.take_along_axis(valid, order, axis=1)
    # unused slots repeat the first vertex and add nothing to the shoelace sum
    ordered = np.where(ordered_valid[:, :, None], ordered, ordered[:, :1, :])
    following = np.roll(ordered, -1, axis=1)
    cross = ordered[:, :, 0] * following[:, :, 1] - following[:, :, 0] * ordered[:, :, 1]
    areas = 0.5 * np.abs(cross.sum(axis=1)) / normal[2]
    return np.where(counts >= 3, areas, 0.0)


def cube_slice_volumes(cubes: np.ndarray, n: int, M: int, coeffs: Coefficients, t: float) -> np.ndarray:
    """Exact ``(d-1)``-volume of ``H_t`` inside each level-``n`` cube, for ``d`` in ``{2, 3}``."""

    cubes = np.asarray(cubes, dtype=np.int64).reshape(-1, coeffs.d)
    if coeffs.d == 2:
        reflected = cubes.copy()
        reflected[:, 1] = M**n - 1 - reflected[:, 1]
        return chord_lengths(reflected, n, M, matched_planar_line(coeffs, t))
    if coeffs.d == 3:
        width = float(M**n)
        corners = cubes / width
        offsets = (t - corners @ coeffs.array) * width
        return unit_cube_plane_areas(coeffs.a, offsets) / (width * width)
    raise UnsupportedModeError(f"exact slice volumes need d in {{2, 3}}, got d = {coeffs.d}")


@dataclass(frozen=True)
class SliceVolume:
    t: float
    n: int
    volume: float
    rescaled: float
    count: int
    standard_error: float
    mode: str

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def _monte_carlo_volume(
    cubes: np.ndarray,
    n: int,
    M: int,
    coeffs: Coefficients,
    t: float,
    samples: int,
    seed: int,
    chunk: int = 100_000,
) -> tuple[float, float]:
    """Solve ``a.y = t`` for the coordinate with the largest coefficient over uniform draws of the others."""

    count, d = cubes.shape
    if count == 0:
        return 0.0, 0.0
    a = coeffs.array
    solved = int(np.argmax(a))
    others = [axis for axis in range(d) if axis != solved]
    width = float(M**n)
    rng = np.random.Generator(np.random.Philox(seed))
    hits = 0
    remaining = samples
    while remaining > 0:
        size = min(chunk, remaining)
        picks = cubes[rng.integers(count, size=size)]
        free = (picks[:, others] + rng.random((size, d - 1))) / width
        coordinate = (t - free @ a[others]) / a[solved]
        inside = (coordinate > picks[:, solved] / width) & (coordinate < (picks[:, solved] + 1) / width)
        hits += int(np.count_nonzero(inside))
        remaining -= size
    fraction = hits / samples
    scale = count * width ** (1 - d) / a[solved]
    return scale * fraction, scale * math.sqrt(fraction * (1.0 - fraction) / samples)


def hyperplane_slice_volume(
    family: FamilyRealization,
    coeffs: Coefficients,
    t: float,
    n: int,
    *,
    mode: VolumeMode = "exact",
    samples: int = 100_000,
    seed: int = 0,
    budget: int | None = None,
) -> SliceVolume:
    """``vol_{d-1}(H_t cap E_n)`` and its rescaling ``g_n(t) = M^(n(d-1)) vol``.

    Raises:
        UnsupportedModeError: exact mode for ``d >= 4``.
    """

    d = family.d
    if d < 2:
        raise ValueError("hyperplane slices need d >= 2")
    if mode == "exact" and d > 3:
        raise UnsupportedModeError(f"exact slice volumes need d in {{2, 3}}, got d = {d}")
    cubes = slice_cubes(family, coeffs, t, n, budget=budget)
    if mode == "exact":
        volume = math.fsum(cube_slice_volumes(cubes, n, family.M, coeffs, t))
        error = 0.0
    elif mode == "monte_carlo":
        volume, error = _monte_carlo_volume(cubes, n, family.M, coeffs, t, samples, seed)
    else:
        raise UnsupportedModeError(f"unknown volume mode {mode!r}")
    scale = float(family.M) ** (n * (d - 1))
    return SliceVolume(
        t=t,
        n=n,
        volume=volume,
        rescaled=scale * volume,
        count=int(cubes.shape[0]),
        standard_error=error,
        mode=mode,
    )


@dataclass(frozen=True)
class LipschitzScan:
    """Finite-difference estimate of ``c_hat`` in ``|g_n(t) - g_n(t')| <= c_hat M^n |t - t'|``."""

    n: int
    t: np.ndarray
    g: np.ndarray
    c_hat: float

    def rows(self) -> list[dict[str, float]]:
        return [{"t": float(t), "g_n": float(g)} for t, g in zip(self.t, self.g)]


def lipschitz_scan(family: FamilyRealization, coeffs: Coefficients, n: int, ts: Sequence[float]) -> LipschitzScan:
    grid = np.unique(np.asarray(ts, dtype=np.float64))
    g = np.asarray([hyperplane_slice_volume(family, coeffs, float(t), n).rescaled for t in grid])
    if grid.size < 2:
        c_hat = 0.0
    else:
        c_hat = float(np.max(np.abs(np.diff(g)) / (float(family.M) ** n * np.diff(grid))))
    return LipschitzScan(n=n, t=grid, g=g, c_hat=c_hat)


__all__ = [
    "LipschitzScan",
    "SliceVolume",
    "cube_slice_volumes",
    "hyperplane_slice_volume",
    "lipschitz_scan",
    "matched_planar_line",
    "slice_cubes",
    "unit_cube_plane_areas",
]
