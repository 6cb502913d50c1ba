"""Unit tests for the empirical Hoeffding tail check."""

from __future__ import annotations

import math

import numpy as np
import pytest

from fracperc.core import PercolationParams, generate
from fracperc.slices2d import SQRT2, Line, UniformSummands, chord_summands, hoeffding_tail_check, slice_length
from fracperc.slices2d.hoeffding import hoeffding_bound, root_chord_summands


def test_bound_is_trivial_at_zero_deviation() -> None:
    assert hoeffding_bound(0.0, np.ones(10)) == 1.0


def test_bound_for_uniform_summands() -> None:
    assert hoeffding_bound(10.0, np.ones(100)) == pytest.approx(math.exp(-2.0))


def test_impossible_deviation_has_zero_tail() -> None:
    check = hoeffding_tail_check(10, [(0.0, 1.0)], 11.0, 20_000, seed=3)

    assert check.empirical_tail == 0.0
    assert check.passed


def test_uniform_tail_stays_below_bound() -> None:
    check = hoeffding_tail_check(100, [(0.0, 1.0)], 10.0, 200_000, seed=1)

    assert check.bound == pytest.approx(math.exp(-2.0))
    assert check.passed
    assert check.to_dict()["passed"] is True


def test_summand_count_must_match() -> None:
    with pytest.raises(ValueError):
        hoeffding_tail_check(5, [(0.0, 1.0)] * 3, 1.0, 10)
    with pytest.raises(ValueError):
        UniformSummands.from_bounds([(1.0, 0.0)])


def test_root_chord_summand_of_the_diagonal() -> None:
    summands = root_chord_summands(Line(math.pi / 4, SQRT2 / 2), 2, 1.0)
    rng = np.random.Generator(np.random.Philox(0))

    assert summands.upper.tolist() == pytest.approx([SQRT2])
    assert summands.sample(rng, 4).ravel().tolist() == pytest.approx([SQRT2] * 4)


def test_chord_summands_split_the_parent_slice() -> None:
    real = generate(PercolationParams(d=2, M=2, p=1.0), 3)
    line = Line(0.8, 0.9)

    summands = chord_summands(real, 3, line)

    assert math.fsum(summands.upper) == pytest.approx(slice_length(real, 2, line), abs=1e-12)
    assert np.all(summands.lower == 0.0)


def test_chord_summands_respect_the_bound() -> None:
    real = generate(PercolationParams(d=2, M=2, p=0.7, seed=9), 4)
    summands = chord_summands(real, 4, Line(1.0, 0.7))

    check = hoeffding_tail_check(summands.lower.size, None, 0.05, 50_000, summands=summands, seed=2)

    assert check.passed


@pytest.mark.integration
def test_uniform_tail_acceptance() -> None:
    check = hoeffding_tail_check(100, [(0.0, 1.0)], 10.0, 1_000_000, seed=0)

    assert check.passed
