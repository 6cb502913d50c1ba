"""Unit tests for interval unions and certificates."""

from __future__ import annotations

import pytest

from fracperc.sums import IntervalUnion, certificate_payload, certify


def test_overlapping_and_touching_intervals_merge() -> None:
    union = IntervalUnion.from_intervals([(3.0, 4.0), (0.0, 1.0), (0.5, 2.0), (2.0, 2.5)])

    assert union.to_list() == [[0.0, 2.5], [3.0, 4.0]]
    assert union.total_length == pytest.approx(3.5)


def test_tolerance_closes_small_gaps() -> None:
    assert len(IntervalUnion.from_intervals([(0.0, 1.0), (1.05, 2.0)])) == 2
    assert len(IntervalUnion.from_intervals([(0.0, 1.0), (1.05, 2.0)], tolerance=0.1)) == 1


def test_invalid_intervals_are_rejected() -> None:
    with pytest.raises(ValueError):
        IntervalUnion.from_intervals([(1.0, 0.0)])


def test_intersection_and_membership() -> None:
    union = IntervalUnion.from_intervals([(0.0, 2.0), (3.0, 5.0)])
    other = IntervalUnion.from_intervals([(1.0, 4.0)])

    common = union.intersection(other)

    assert common.to_list() == [[1.0, 2.0], [3.0, 4.0]]
    assert common.issubset(union)
    assert not union.issubset(common)
    assert union.contains(4.5)
    assert not union.contains(2.5)
    assert union.contains_interval(3.5, 5.0)
    assert not union.contains_interval(1.5, 3.5)
    assert IntervalUnion.empty().issubset(union)


def test_minkowski_sum() -> None:
    union = IntervalUnion.from_intervals([(0.0, 1.0), (3.0, 4.0)])

    total = union.minkowski_sum([0.0], [1.0])

    assert total.to_list() == [[0.0, 2.0], [3.0, 5.0]]
    assert not union.minkowski_sum([], [])


def test_certify_reports_leftmost_longest_interval() -> None:
    unions = [
        IntervalUnion.from_intervals([(0.0, 3.0)]),
        IntervalUnion.from_intervals([(0.0, 1.0), (2.0, 3.0)]),
    ]

    common, certificate = certify(unions, 0.5)

    assert len(common) == 2
    assert (certificate.lo, certificate.hi) == (0.0, 1.0)
    assert certificate.found
    assert certificate.levels == 2


def test_certify_floor_discards_small_values() -> None:
    unions = [IntervalUnion.from_intervals([(0.0, 1.0), (2.0, 2.8)])]

    _, certificate = certify(unions, 0.5, floor=0.5)

    assert (certificate.lo, certificate.hi) == (2.0, 2.8)


def test_certify_without_survivors() -> None:
    _, certificate = certify([IntervalUnion.empty()], 0.1)

    assert not certificate.found
    assert certificate.to_dict() == {"lo": None, "hi": None, "len": 0.0}
    with pytest.raises(ValueError):
        certify([IntervalUnion.empty()], 0.0)


def test_certificate_payload_layout() -> None:
    union, certificate = certify([IntervalUnion.from_intervals([(0.0, 1.0)])], 0.5)

    payload = certificate_payload(
        kind="sum", params={"M": 2}, seeds=[1, 2], depth=0, union=union, certificate=certificate
    )

    assert payload == {
        "kind": "sum",
        "params": {"M": 2},
        "seeds": [1, 2],
        "depth": 0,
        "intervals": [[0.0, 1.0]],
        "certificate": {"lo": 0.0, "hi": 1.0, "len": 1.0},
        "found": True,
    }
