"""Unit tests for the diagonal event and its bounds."""

from __future__ import annotations

import numpy as np
import pytest

from fracperc.core import CubeIndex, PercolationParams, derive_seed, generate
from fracperc.errors import LevelOutOfRangeError
from fracperc.slices2d import (
    DiagonalEventEstimate,
    diagonal_event,
    diagonal_event_frequency,
    diagonal_hit_profile,
    diagonal_hits,
    diagonal_probability,
)


def test_full_realization_always_has_the_event() -> None:
    real = generate(PercolationParams(d=2, M=2, p=1.0), 3)

    assert diagonal_event(real, CubeIndex.root(2), 3)
    assert diagonal_event(real, CubeIndex(1, (1, 0)), 2)


def test_event_needs_enough_depth() -> None:
    real = generate(PercolationParams(d=2, M=2, p=1.0), 2)

    with pytest.raises(LevelOutOfRangeError):
        diagonal_event(real, CubeIndex(1, (0, 0)), 2)


def test_exact_probability_sits_between_bounds() -> None:
    assert diagonal_probability(0.9, 2, 1) == pytest.approx(0.81)
    assert diagonal_probability(0.9, 2, 2) == pytest.approx(0.9**6)
    assert 0.9**8 < diagonal_probability(0.9, 2, 2) < 0.9**4


def test_vectorized_hits_agree_with_generated_realizations() -> None:
    params = PercolationParams(d=2, M=2, p=0.9)
    seeds = np.asarray([derive_seed(4, i) for i in range(200)], dtype=np.uint64)

    hits = diagonal_hits(params, 2, seeds)

    for seed, hit in zip(seeds.tolist(), hits.tolist()):
        real = generate(params.with_seed(int(seed)), 2)
        assert diagonal_event(real, CubeIndex.root(2), 2) == hit


@pytest.mark.parametrize("k", [1, 2])
def test_frequency_interval_inside_bounds(k: int) -> None:
    estimate = diagonal_event_frequency(PercolationParams(d=2, M=2, p=0.9, seed=1), k, 20_000)

    assert estimate.resolved
    assert estimate.inside_bounds


def test_upper_bound_is_attained_for_one_step() -> None:
    estimate = DiagonalEventEstimate.from_hits(0.9, 2, 1, 8_100, 10_000)

    assert estimate.upper_attained
    assert estimate.inside_bounds


def test_bounds_below_resolution_are_skipped() -> None:
    estimate = DiagonalEventEstimate.from_hits(0.5, 2, 3, 0, 100)

    assert not estimate.resolved
    assert estimate.inside_bounds
    assert estimate.frequency == 0.0


def test_hit_profile_of_full_realization() -> None:
    real = generate(PercolationParams(d=2, M=2, p=1.0), 4)

    profile = diagonal_hit_profile(real, 1, 4)

    assert profile == {n: 2**n / n for n in range(1, 5)}


@pytest.mark.integration
@pytest.mark.parametrize("k", [1, 2])
def test_frequency_interval_acceptance(k: int) -> None:
    estimate = diagonal_event_frequency(PercolationParams(d=2, M=2, p=0.9, seed=0), k, 100_000)

    assert estimate.inside_bounds
