"""Distance sets of one or two realizations as interval unions."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from fracperc.core import CubeIndex, Realization
from fracperc.errors import CubeNotRetainedError, LevelOutOfRangeError
from fracperc.observability import get_observability
from fracperc.settings import get_settings
from fracperc.sums.intervals import Certificate, IntervalUnion, certificate_payload, certify

from .pairs import distinct_offsets, offset_bounds

Anchors = tuple[CubeIndex | None, CubeIndex | None]


def _compatible(real_a: Realization, real_b: Realization) -> None:
    if real_a.d != real_b.d or real_a.M != real_b.M:
        raise ValueError("realizations must share d and M")
    if real_a.depth != real_b.depth:
        raise ValueError("realizations must share depth")


def _restricted(real: Realization, n: int, anchor: CubeIndex | None) -> np.ndarray:
    if anchor is None:
        return real.cubes(n)
    if not real.contains(anchor):
        raise CubeNotRetainedError(f"anchor {anchor} is not retained")
    if anchor.n > n:
        # above the anchor the subtree is represented by its ancestor
        anchor = anchor.ancestor(n, real.M)
    return real.descendants(anchor, n)


def _offsets(
    real_a: Realization,
    real_b: Realization,
    n: int,
    anchors: Anchors | None,
    distinct_coordinates: bool,
    budget: int | None,
) -> tuple[np.ndarray, np.ndarray, int]:
    anchor_a, anchor_b = anchors if anchors is not None else (None, None)
    cubes_a = _restricted(real_a, n, anchor_a)
    cubes_b = _restricted(real_b, n, anchor_b)
    offsets, counts = distinct_offsets(
        cubes_a,
        cubes_b,
        n,
        real_a.M,
        budget=budget,
        require_distinct_coordinates=distinct_coordinates,
    )
    return offsets, counts, cubes_a.shape[0] * cubes_b.shape[0]


def _union(offsets: np.ndarray, n: int, M: int, d: int) -> IntervalUnion:
    lo, hi = offset_bounds(offsets, n, M)
    tolerance = get_settings().simulation.merge_tolerance * math.sqrt(d)
    return IntervalUnion.from_arrays(lo, hi, tolerance=tolerance)


def distance_set(
    real_a: Realization,
    real_b: Realization,
    n: int,
    *,
    anchors: Anchors | None = None,
    budget: int | None = None,
) -> IntervalUnion:
    """Union over retained cube pairs of their distance ranges; nested in ``n``.

    ``anchors`` restricts each side to the subtree of a retained cube. Symmetric in its
    arguments bit for bit because only ``|k_a - k_b|`` enters.

    Raises:
        BudgetExceededError: more cube pairs than ``budget`` (default
            ``settings.budget.max_pairs``); restrict with ``anchors``.
    """

    _compatible(real_a, real_b)
    offsets, _, _ = _offsets(real_a, real_b, n, anchors, False, budget)
    return _union(offsets, n, real_a.M, real_a.d)


def self_distance_set(
    real: Realization,
    n: int,
    *,
    distinct_coordinates: bool = False,
    anchors: Anchors | None = None,
    budget: int | None = None,
) -> IntervalUnion:
    """``D(E_n)``; with ``distinct_coordinates`` only pairs differing on every axis contribute."""

    offsets, _, _ = _offsets(real, real, n, anchors, distinct_coordinates, budget)
    return _union(offsets, n, real.M, real.d)


@dataclass(frozen=True)
class DistanceProfile:
    n: int
    union: IntervalUnion
    certificate: Certificate
    pairs: int

    def to_payload(self, real_a: Realization, real_b: Realization | None = None) -> dict[str, Any]:
        seeds = [real_a.params.seed] if real_b is None else [real_a.params.seed, real_b.params.seed]
        return certificate_payload(
            kind="distance",
            params=real_a.params.model_dump(),
            seeds=seeds,
            depth=self.n,
            union=self.union,
            certificate=self.certificate,
        )


def distance_certificate(
    real_a: Realization,
    real_b: Realization | None,
    depth: int,
    min_len: float,
    *,
    floor: float | None = None,
    distinct_coordinates: bool = False,
    anchors: Anchors | None = None,
    budget: int | None = None,
) -> DistanceProfile:
    """Longest positive-distance interval inside the distance union of every level ``0..depth``.

    ``real_b=None`` certifies the self distance set; there every cube contributes
    ``[0, side sqrt d]`` at the deepest level, so ``floor`` defaults to that value.
    """

    if not 0 <= depth <= real_a.depth:
        raise LevelOutOfRangeError(depth, real_a.depth)
    other = real_a if real_b is None else real_b
    _compatible(real_a, other)
    if floor is None and real_b is None:
        floor = math.sqrt(real_a.d) / float(real_a.M) ** depth
    observability = get_observability(component="distance.sets")
    pairs = 0
    unions = []
    with observability.timed("distance.profile", level=logging.DEBUG, depth=depth, seed=real_a.params.seed) as extra:
        for n in range(depth + 1):
            offsets, _, examined = _offsets(real_a, other, n, anchors, distinct_coordinates, budget)
            pairs += examined
            unions.append(_union(offsets, n, real_a.M, real_a.d))
            if not unions[-1]:
                break
        union, certificate = certify(unions, min_len, floor=floor)
        extra.update(length=certificate.length, pairs=pairs)
    return DistanceProfile(n=depth, union=union, certificate=certificate, pairs=pairs)


@dataclass(frozen=True)
class DistanceCountProfile:
    """Cube pairs whose distance range strictly contains ``t``, per grid point."""

    n: int
    t: np.ndarray
    counts: np.ndarray
    c_hat: float

    def rows(self) -> list[dict[str, float]]:
        return [{"t": float(t), "count": int(c)} for t, c in zip(self.t, self.counts)]


def distance_count_profile(
    real_a: Realization,
    real_b: Realization | None,
    n: int,
    t_grid: Sequence[float],
    *,
    budget: int | None = None,
) -> DistanceCountProfile:
    """Counts and their finite-difference slope ``max |dcount| / (M^n |dt|)`` over the grid."""

    other = real_a if real_b is None else real_b
    _compatible(real_a, other)
    offsets, multiplicity, _ = _offsets(real_a, other, n, None, False, budget)
    lo, hi = offset_bounds(offsets, n, real_a.M)
    grid = np.unique(np.asarray(t_grid, dtype=np.float64))
    # lo < t < hi  <=>  lo < t and not hi <= t, since lo < hi
    lo_order, hi_order = np.argsort(lo), np.argsort(hi)
    below_lo = np.concatenate(([0], np.cumsum(multiplicity[lo_order])))
    below_hi = np.concatenate(([0], np.cumsum(multiplicity[hi_order])))
    counts = (
        below_lo[np.searchsorted(lo[lo_order], grid, side="left")]
        - below_hi[np.searchsorted(hi[hi_order], grid, side="right")]
    ).astype(np.int64)
    if grid.size < 2:
        c_hat = 0.0
    else:
        c_hat = float(np.max(np.abs(np.diff(counts)) / (float(real_a.M) ** n * np.diff(grid))))
    return DistanceCountProfile(n=n, t=grid, counts=counts, c_hat=c_hat)


__all__ = [
    "DistanceCountProfile",
    "DistanceProfile",
    "distance_certificate",
    "distance_count_profile",
    "distance_set",
    "self_distance_set",
]
