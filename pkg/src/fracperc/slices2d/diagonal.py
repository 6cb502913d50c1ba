"""The diagonal event: every diagonal descendant of a square is retained."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np
from scipy import stats

from fracperc.core import CubeIndex, PercolationParams, Realization, derive_seed, pack_indices, retain_mask
from fracperc.errors import CubeNotRetainedError, LevelOutOfRangeError
from fracperc.settings import get_settings


def diagonal_event(real: Realization, cube: CubeIndex, k: int) -> bool:
    """True iff the ``M^k`` level-``n+k`` squares on the increasing diagonal of ``cube`` are retained."""

    if real.d != 2:
        raise ValueError("the diagonal event is planar")
    if k < 1:
        raise ValueError("k must be at least 1")
    if cube.n + k > real.depth:
        raise LevelOutOfRangeError(cube.n + k, real.depth)
    if not real.contains(cube):
        raise CubeNotRetainedError(f"cube {cube} is not retained")
    steps = np.arange(real.M**k, dtype=np.int64)
    origin = np.asarray(cube.k, dtype=np.int64) * real.M**k
    diagonal = origin[None, :] + steps[:, None]
    keys = pack_indices(diagonal, cube.n + k, real.M)
    return bool(np.all(np.isin(keys, real.keys[cube.n + k])))


def diagonal_probability(p: float, M: int, k: int) -> float:
    """Exact probability of the event at the root: every diagonal square on levels ``1..k`` survives."""

    return p ** sum(M**level for level in range(1, k + 1))


@dataclass(frozen=True)
class DiagonalEventEstimate:
    k: int
    trials: int
    hits: int
    frequency: float
    ci_low: float
    ci_high: float
    lower_bound: float
    upper_bound: float
    exact: float
    confidence: float

    @property
    def resolved(self) -> bool:
        """False when the upper bound is below the Monte Carlo resolution ``1/trials``."""

        return self.upper_bound >= 1.0 / self.trials

    @property
    def upper_attained(self) -> bool:
        return math.isclose(self.exact, self.upper_bound, rel_tol=1e-12)

    @property
    def inside_bounds(self) -> bool:
        """Confidence interval within the bound interval.

        For ``k = 1`` the event probability equals the upper bound, so that side is checked as a
        closed bound: the interval must reach down to it.
        """

        if not self.resolved:
            return True
        above_lower = self.ci_low > self.lower_bound
        if self.upper_attained:
            return above_lower and self.ci_low <= self.upper_bound
        return above_lower and self.ci_high < self.upper_bound

    def to_dict(self) -> dict[str, Any]:
        payload = asdict(self)
        payload.update(resolved=self.resolved, inside_bounds=self.inside_bounds)
        return payload

    @classmethod
    def from_hits(
        cls,
        p: float,
        M: int,
        k: int,
        hits: int,
        trials: int,
        *,
        confidence: float | None = None,
    ) -> DiagonalEventEstimate:
        """Wilson interval for ``hits`` out of ``trials`` alongside the bound interval ``(p^(2 M^k), p^(M^k))``."""

        level = get_settings().simulation.confidence if confidence is None else confidence
        interval = stats.binomtest(hits, trials).proportion_ci(confidence_level=level, method="wilson")
        return cls(
            k=k,
            trials=trials,
            hits=hits,
            frequency=hits / trials,
            ci_low=float(interval.low),
            ci_high=float(interval.high),
            lower_bound=p ** (2 * M**k),
            upper_bound=p ** (M**k),
            exact=diagonal_probability(p, M, k),
            confidence=level,
        )


def diagonal_hits(params: PercolationParams, k: int, seeds: np.ndarray) -> np.ndarray:
    """Root diagonal event for each seed in ``seeds``, read straight from the keyed stream.

    Each entry equals :func:`diagonal_event` on the realization generated from that seed.
    """

    if params.d != 2:
        raise ValueError("the diagonal event is planar")
    if k < 1:
        raise ValueError("k must be at least 1")
    seeds = np.asarray(seeds, dtype=np.uint64)
    alive = np.ones(seeds.shape, dtype=bool)
    for level in range(1, k + 1):
        steps = np.arange(params.M**level, dtype=np.int64)
        keys = pack_indices(np.stack([steps, steps], axis=1), level, params.M)
        bits = retain_mask(seeds[:, None], level, keys[None, :], params.p)
        alive &= np.all(bits, axis=1)
    return alive


def diagonal_event_frequency(
    params: PercolationParams,
    k: int,
    trials: int,
    *,
    confidence: float | None = None,
) -> DiagonalEventEstimate:
    """Monte Carlo frequency of the root diagonal event over seeds ``derive_seed(params.seed, i)``."""

    if trials < 1:
        raise ValueError("trials must be at least 1")
    seeds = np.asarray([derive_seed(params.seed, index) for index in range(trials)], dtype=np.uint64)
    hits = int(np.count_nonzero(diagonal_hits(params, k, seeds)))
    return DiagonalEventEstimate.from_hits(params.p, params.M, k, hits, trials, confidence=confidence)


def diagonal_hit_profile(real: Realization, n_lo: int, n_hi: int) -> dict[int, float]:
    """``max #E_n(l) / n`` over the two main diagonals, per level.

    Used as an empirical stand-in for the existential constant that bounds diagonal hits. The
    diagonals have rational parameters, so incidence is decided on integer coordinates: the
    increasing diagonal meets the interior of exactly the squares with ``k_0 == k_1`` and the
    decreasing one those with ``k_0 + k_1 == M^n - 1``.
    """

    if real.d != 2:
        raise ValueError("the diagonal event is planar")
    if n_hi > real.depth:
        raise LevelOutOfRangeError(n_hi, real.depth)
    profile: dict[int, float] = {}
    for n in range(max(n_lo, 1), n_hi + 1):
        cubes = real.cubes(n)
        increasing = int(np.count_nonzero(cubes[:, 0] == cubes[:, 1]))
        decreasing = int(np.count_nonzero(cubes[:, 0] + cubes[:, 1] == real.M**n - 1))
        profile[n] = max(increasing, decreasing) / n
    return profile


__all__ = [
    "DiagonalEventEstimate",
    "diagonal_event",
    "diagonal_event_frequency",
    "diagonal_hit_profile",
    "diagonal_hits",
    "diagonal_probability",
]
