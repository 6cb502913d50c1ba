"""Unit tests for cube distance ranges and distance sets."""

from __future__ import annotations

import math

import numpy as np
import pytest

from fracperc.core import CubeIndex, PercolationParams, Realization, generate
from fracperc.distance import (
    distance_certificate,
    distance_count_profile,
    distance_set,
    distinct_offsets,
    offset_bounds,
    pair_distance_interval,
    self_distance_set,
)
from fracperc.errors import BudgetExceededError, CubeNotRetainedError, LevelOutOfRangeError


def test_identical_cubes_span_zero_to_diameter() -> None:
    lo, hi = pair_distance_interval(CubeIndex(2, (1, 3)), CubeIndex(2, (1, 3)), 2)

    assert lo == 0.0
    assert hi == pytest.approx(math.sqrt(2.0) / 4.0)


def test_separated_intervals_have_a_gap() -> None:
    assert pair_distance_interval(CubeIndex(2, (0,)), CubeIndex(2, (3,)), 2) == (0.5, 1.0)


def test_pair_interval_needs_matching_cubes() -> None:
    with pytest.raises(ValueError):
        pair_distance_interval(CubeIndex(1, (0, 0)), CubeIndex(2, (0, 0)), 2)


def test_offset_bounds_ignore_sign() -> None:
    lo, hi = offset_bounds(np.asarray([[2, -3], [-2, 3]]), 1, 3)

    assert lo.tolist() == pytest.approx([math.sqrt(5.0) / 3.0] * 2)
    assert hi.tolist() == pytest.approx([5.0 / 3.0] * 2)


def test_distinct_offsets_count_ordered_pairs() -> None:
    cubes = np.arange(4)[:, None]

    offsets, counts = distinct_offsets(cubes, cubes, 2, 2)

    assert offsets.ravel().tolist() == [0, 1, 2, 3]
    assert counts.tolist() == [4, 6, 4, 2]
    with pytest.raises(BudgetExceededError):
        distinct_offsets(cubes, cubes, 2, 2, budget=3)


@pytest.mark.parametrize("n", [0, 1, 3])
def test_full_square_distance_set(n: int) -> None:
    real = generate(PercolationParams(d=2, M=2, p=1.0), 3)

    union = self_distance_set(real, n)

    assert union.to_list() == [[0.0, pytest.approx(math.sqrt(2.0))]]


def test_full_square_certificate_uses_default_floor() -> None:
    real = generate(PercolationParams(d=2, M=2, p=1.0), 3)

    profile = distance_certificate(real, None, 3, 0.5)

    assert profile.certificate.found
    assert profile.certificate.lo == pytest.approx(math.sqrt(2.0) / 8.0)
    assert profile.certificate.hi == pytest.approx(math.sqrt(2.0))
    payload = profile.to_payload(real)
    assert payload["kind"] == "distance"
    assert payload["seeds"] == [real.params.seed]
    assert payload["found"] is True


def test_extinct_realization_has_no_distances() -> None:
    real = Realization.from_levels(PercolationParams(d=2, M=2, p=0.5), [[[0, 0]], np.zeros((0, 2))])

    assert not self_distance_set(real, 1)
    assert not distance_certificate(real, None, 1, 0.1).certificate.found


def test_certificate_level_must_exist() -> None:
    real = generate(PercolationParams(d=2, M=2, p=0.8), 2)

    with pytest.raises(LevelOutOfRangeError):
        distance_certificate(real, None, 3, 0.1)


def test_distance_sets_are_symmetric_and_nested() -> None:
    real_a = generate(PercolationParams(d=2, M=3, p=0.6, seed=1), 3)
    real_b = generate(PercolationParams(d=2, M=3, p=0.6, seed=2), 3)
    levels = [distance_set(real_a, real_b, n) for n in range(4)]

    assert distance_set(real_b, real_a, 3) == levels[3]
    for coarse, fine in zip(levels, levels[1:]):
        assert fine.issubset(coarse)


def test_anchors_restrict_pairs() -> None:
    real = generate(PercolationParams(d=2, M=2, p=1.0), 2)
    anchors = (CubeIndex(1, (0, 0)), CubeIndex(1, (1, 1)))

    restricted = distance_set(real, real, 2, anchors=anchors)

    assert restricted.issubset(self_distance_set(real, 2))
    assert restricted.to_list() == [[0.0, pytest.approx(math.sqrt(2.0))]]
    # one root pair, one pair of quadrants, then 4 x 4 grandchildren
    assert distance_certificate(real, real, 2, 0.1, anchors=anchors).pairs == 1 + 1 + 16


@pytest.mark.parametrize(
    "anchor",
    [CubeIndex(1, (1, 1)), CubeIndex(1, (1,)), CubeIndex(3, (0, 0))],
    ids=["discarded", "wrong-dimension", "below-depth"],
)
def test_anchors_must_be_retained(anchor: CubeIndex) -> None:
    real = Realization.from_levels(PercolationParams(d=2, M=2, p=0.5), [[[0, 0]], [[0, 0], [1, 0]], [[0, 0]]])

    with pytest.raises(CubeNotRetainedError):
        distance_set(real, real, 2, anchors=(anchor, None))
    with pytest.raises(CubeNotRetainedError):
        distance_certificate(real, real, 2, 0.1, anchors=(None, anchor))


def test_distinct_coordinate_pairs_skip_shared_axes() -> None:
    real = generate(PercolationParams(d=2, M=2, p=1.0), 1)

    union = self_distance_set(real, 1, distinct_coordinates=True)

    assert union.to_list() == [[0.0, pytest.approx(math.sqrt(2.0))]]
    assert len(distinct_offsets(real.cubes(1), real.cubes(1), 1, 2, require_distinct_coordinates=True)[0]) == 1


def test_count_profile_on_full_interval() -> None:
    real = generate(PercolationParams(d=1, M=2, p=1.0), 2)

    profile = distance_count_profile(real, None, 2, [0.1, 0.3, 0.6])

    assert profile.counts.tolist() == [10, 10, 6]
    assert profile.c_hat == pytest.approx(4.0 / (4.0 * 0.3))
    assert profile.rows()[0] == {"t": 0.1, "count": 10}
