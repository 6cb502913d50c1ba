"""Normalized unions of closed intervals on the real line."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Iterator

import numpy as np


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class IntervalUnion:
    """Sorted disjoint closed intervals ``[lo_j, hi_j]`` with ``hi_j < lo_{j+1}``.

    Instances are always normalized: build them with :meth:`from_arrays` or
    :meth:`from_intervals`, which merge overlapping, touching and nearly touching pieces.
    """

    lo: np.ndarray
    hi: np.ndarray

    @classmethod
    def empty(cls) -> IntervalUnion:
        return cls(lo=_frozen(np.zeros(0)), hi=_frozen(np.zeros(0)))

    @classmethod
    def from_arrays(cls, lo: np.ndarray, hi: np.ndarray, *, tolerance: float = 0.0) -> IntervalUnion:
        """Merge raw intervals; gaps of at most ``tolerance`` are closed."""

        lo = np.asarray(lo, dtype=np.float64).ravel()
        hi = np.asarray(hi, dtype=np.float64).ravel()
        if lo.shape != hi.shape:
            raise ValueError("lo and hi must have the same length")
        if np.any(hi < lo):
            raise ValueError("every interval needs lo <= hi")
        if lo.size == 0:
            return cls.empty()
        order = np.argsort(lo, kind="stable")
        lo, hi = lo[order], hi[order]
        reach = np.maximum.accumulate(hi)
        starts = np.concatenate(([True], lo[1:] > reach[:-1] + tolerance))
        first = np.flatnonzero(starts)
        merged_hi = np.maximum.reduceat(hi, first)
        return cls(lo=_frozen(lo[first].copy()), hi=_frozen(merged_hi))

    @classmethod
    def from_intervals(cls, intervals: Iterable[tuple[float, float]], *, tolerance: float = 0.0) -> IntervalUnion:
        pairs = np.asarray(list(intervals), dtype=np.float64).reshape(-1, 2)
        return cls.from_arrays(pairs[:, 0], pairs[:, 1], tolerance=tolerance)

    def __len__(self) -> int:
        return int(self.lo.size)

    def __iter__(self) -> Iterator[tuple[float, float]]:
        return iter(zip(self.lo.tolist(), self.hi.tolist()))

    def __bool__(self) -> bool:
        return self.lo.size > 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntervalUnion):
            return NotImplemented
        return np.array_equal(self.lo, other.lo) and np.array_equal(self.hi, other.hi)

    __hash__ = None  # type: ignore[assignment]

    @property
    def widths(self) -> np.ndarray:
        return self.hi - self.lo

    @property
    def total_length(self) -> float:
        return float(np.sum(self.widths))

    def longest(self) -> tuple[float, float] | None:
        """Widest member interval, the leftmost one on ties."""

        if not self:
            return None
        index = int(np.argmax(self.widths))
        return float(self.lo[index]), float(self.hi[index])

    def contains(self, x: float) -> bool:
        index = int(np.searchsorted(self.lo, x, side="right")) - 1
        return index >= 0 and bool(self.hi[index] >= x)

    def contains_interval(self, lo: float, hi: float) -> bool:
        index = int(np.searchsorted(self.lo, lo, side="right")) - 1
        return index >= 0 and bool(self.hi[index] >= hi)

    def issubset(self, other: IntervalUnion) -> bool:
        """Every interval lies inside a single interval of ``other``."""

        if not self:
            return True
        if not other:
            return False
        index = np.searchsorted(other.lo, self.lo, side="right") - 1
        valid = index >= 0
        if not np.all(valid):
            return False
        return bool(np.all(other.hi[index] >= self.hi))

    def intersection(self, other: IntervalUnion) -> IntervalUnion:
        """Pointwise intersection; single-point overlaps are kept as degenerate intervals."""

        if not self or not other:
            return IntervalUnion.empty()
        start = np.searchsorted(other.hi, self.lo, side="left")
        stop = np.searchsorted(other.lo, self.hi, side="right")
        counts = np.clip(stop - start, 0, None)
        total = int(counts.sum())
        if total == 0:
            return IntervalUnion.empty()
        mine = np.repeat(np.arange(self.lo.size), counts)
        offsets = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
        theirs = np.repeat(start, counts) + offsets
        lo = np.maximum(self.lo[mine], other.lo[theirs])
        hi = np.minimum(self.hi[mine], other.hi[theirs])
        keep = hi >= lo
        return IntervalUnion.from_arrays(lo[keep], hi[keep])

    def union(self, other: IntervalUnion, *, tolerance: float = 0.0) -> IntervalUnion:
        return IntervalUnion.from_arrays(
            np.concatenate((self.lo, other.lo)), np.concatenate((self.hi, other.hi)), tolerance=tolerance
        )

    def minkowski_sum(self, lo: np.ndarray, hi: np.ndarray, *, tolerance: float = 0.0) -> IntervalUnion:
        """``self + U`` for the union ``U`` of ``[lo_j, hi_j]``, computed pairwise and merged."""

        lo = np.asarray(lo, dtype=np.float64).ravel()
        hi = np.asarray(hi, dtype=np.float64).ravel()
        if not self or lo.size == 0:
            return IntervalUnion.empty()
        return IntervalUnion.from_arrays(
            (self.lo[:, None] + lo[None, :]).ravel(), (self.hi[:, None] + hi[None, :]).ravel(), tolerance=tolerance
        )

    def restricted(self, lo: float, hi: float) -> IntervalUnion:
        """Intersection with the single interval ``[lo, hi]``."""

        return self.intersection(IntervalUnion.from_arrays(np.asarray([lo]), np.asarray([hi])))

    def to_list(self) -> list[list[float]]:
        return [[a, b] for a, b in self]


@dataclass(frozen=True)
class Certificate:
    """Longest interval found inside every level of a nested sequence of unions."""

    lo: float | None
    hi: float | None
    length: float
    min_length: float
    levels: int

    @property
    def found(self) -> bool:
        return self.lo is not None and self.length >= self.min_length

    def to_dict(self) -> dict[str, Any]:
        return {"lo": self.lo, "hi": self.hi, "len": self.length}


def certify(
    unions: Iterable[IntervalUnion],
    min_length: float,
    *,
    floor: float | None = None,
) -> tuple[IntervalUnion, Certificate]:
    """Intersect ``unions`` and report the longest surviving interval.

    ``floor`` discards everything at or below that value before measuring. Returns the
    intersection together with the certificate.
    """

    if min_length <= 0.0:
        raise ValueError("min_length must be positive")
    common: IntervalUnion | None = None
    levels = 0
    for union in unions:
        common = union if common is None else common.intersection(union)
        levels += 1
    if common is None:
        raise ValueError("at least one union is required")
    if floor is not None and common:
        above = common.hi > floor
        common = IntervalUnion.from_arrays(np.maximum(common.lo[above], floor), common.hi[above])
    best = common.longest()
    if best is None:
        return common, Certificate(lo=None, hi=None, length=0.0, min_length=min_length, levels=levels)
    lo, hi = best
    return common, Certificate(lo=lo, hi=hi, length=hi - lo, min_length=min_length, levels=levels)


def certificate_payload(
    *,
    kind: str,
    params: dict[str, Any],
    seeds: list[int],
    depth: int,
    union: IntervalUnion,
    certificate: Certificate,
) -> dict[str, Any]:
    """JSON document shared by sum and distance certificates."""

    return {
        "kind": kind,
        "params": params,
        "seeds": seeds,
        "depth": depth,
        "intervals": union.to_list(),
        "certificate": certificate.to_dict(),
        "found": certificate.found,
    }


__all__ = ["Certificate", "IntervalUnion", "certificate_payload", "certify"]
