"""Unit tests for slice lengths, hit counts and incidence certificates."""

from __future__ import annotations

import math

import numpy as np
import pytest

from fracperc.core import CubeIndex, PercolationParams, Realization, derive_seed, generate
from fracperc.slices2d import SQRT2, Line, chord_length, incidence_certificate, slice_count, slice_length


def test_full_realization_recovers_square_chord() -> None:
    real = generate(PercolationParams(d=2, M=2, p=1.0), 5)
    line = Line(1.05, 0.6)
    expected = chord_length(CubeIndex.root(2), line)

    for n in range(6):
        assert slice_length(real, n, line) == pytest.approx(expected, abs=1e-12)


def test_main_diagonal_through_full_realization() -> None:
    real = generate(PercolationParams(d=2, M=2, p=1.0), 4)
    line = Line(math.pi / 4, SQRT2 / 2)

    assert slice_length(real, 4, line) == pytest.approx(SQRT2, abs=1e-12)
    assert slice_count(real, 4, line) == 16
    assert slice_count(real, 1, line) == 2


def test_extinct_level_has_empty_slice() -> None:
    params = PercolationParams(d=2, M=2, p=0.5)
    real = Realization.from_levels(params, [[[0, 0]], [[1, 1]], np.zeros((0, 2))])
    line = Line(0.8, 0.7)

    assert slice_length(real, 2, line) == 0.0
    assert slice_count(real, 2, line) == 0


def test_slices_are_monotone_in_n() -> None:
    real = generate(PercolationParams(d=2, M=3, p=0.7, seed=13), 5)
    line = Line(0.9, 0.8)
    lengths = [slice_length(real, n, line) for n in range(6)]

    assert all(later <= earlier + 1e-12 for earlier, later in zip(lengths, lengths[1:]))


def test_slice_requires_planar_realization() -> None:
    real = generate(PercolationParams(d=3, M=2, p=0.9), 2)

    with pytest.raises(ValueError):
        slice_length(real, 1, Line(0.8, 0.7))


def test_expected_slice_length_follows_conditional_mean() -> None:
    params = PercolationParams(d=2, M=2, p=0.7)
    line = Line(1.0, 0.7)
    full = chord_length(CubeIndex.root(2), line)
    samples = np.array([slice_length(generate(params.with_seed(derive_seed(7, i)), 3), 3, line) for i in range(3_000)])
    standard_error = samples.std(ddof=1) / math.sqrt(samples.size)

    assert abs(samples.mean() - 0.7**3 * full) <= 4 * standard_error


def test_incidence_inequalities_hold_for_random_lines() -> None:
    rng = np.random.Generator(np.random.Philox(5))
    violations = 0
    for seed in range(3):
        real = generate(PercolationParams(d=2, M=2, p=0.75, seed=seed), 6)
        for _ in range(40):
            line = Line(float(rng.uniform(0.01, math.pi / 2 - 0.01)), float(rng.uniform(0.0, SQRT2)))
            for n in range(1, 7):
                certificate = incidence_certificate(real, n, line, theta=0.2)
                violations += int(not certificate.bound_holds) + int(not certificate.containment_holds)

    assert violations == 0


def test_incidence_certificate_payload() -> None:
    real = generate(PercolationParams(d=2, M=2, p=1.0), 3)
    line = Line(math.pi / 4, SQRT2 / 2)

    payload = incidence_certificate(real, 3, line, theta=0.2).to_dict()

    assert payload["count"] == 8
    assert payload["bigg"] == 8
    assert payload["small"] == 0
    assert payload["bound_holds"] and payload["containment_holds"]
    assert payload["in_proved_family"] is True


@pytest.mark.integration
def test_incidence_inequalities_acceptance_sweep() -> None:
    rng = np.random.Generator(np.random.Philox(11))
    lines = [Line(float(rng.uniform(0.0, math.pi / 2)), float(rng.uniform(0.0, SQRT2))) for _ in range(1_000)]
    violations = 0
    for seed in range(10):
        real = generate(PercolationParams(d=2, M=2, p=0.7, seed=seed), 10)
        for line in lines:
            for n in range(1, 11):
                certificate = incidence_certificate(real, n, line)
                violations += int(not certificate.bound_holds) + int(not certificate.containment_holds)

    assert violations == 0
