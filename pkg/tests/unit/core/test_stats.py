"""Unit tests for counting, survival and box-counting estimates."""

from __future__ import annotations

import math

import numpy as np
import pytest

from fracperc.core import (
    PercolationParams,
    Realization,
    box_count_fit,
    box_count_slope,
    derive_seed,
    extinction_probability,
    generate,
    normalized_counts,
    survival_estimate,
    survival_probability,
    survives,
    theoretical_dimension,
)
from fracperc.errors import ExtinctRealizationError


def _finite_depth_survival(d: int, M: int, p: float, depth: int) -> float:
    q = 0.0
    for _ in range(depth):
        q = (1.0 - p + p * q) ** (M**d)
    return 1.0 - q


def test_full_realization_slope_is_dimension() -> None:
    real = generate(PercolationParams(d=2, M=2, p=1.0), 5)

    assert box_count_slope(real, 1, 5) == pytest.approx(2.0, abs=1e-12)


def test_single_line_of_cubes_has_slope_zero() -> None:
    levels = [[[0]], [[0]], [[0]], [[0]], [[0]]]
    real = Realization.from_levels(PercolationParams(d=1, M=2, p=1.0), levels)

    assert box_count_slope(real, 0, 4) == pytest.approx(0.0, abs=1e-12)


def test_box_count_fit_requires_survival() -> None:
    real = Realization.from_levels(PercolationParams(d=1, M=2, p=0.5), [[[0]], [[1]], np.zeros((0, 1))])

    with pytest.raises(ExtinctRealizationError):
        box_count_fit(real, 0, 2)


def test_extinction_probability_fixed_point() -> None:
    # q = (0.1 + 0.9 q)^2 has the roots 1/81 and 1
    q = extinction_probability(1, 2, 0.9)

    assert q == pytest.approx(1.0 / 81.0, abs=1e-12)
    assert survival_probability(PercolationParams(d=1, M=2, p=0.9)) == pytest.approx(80.0 / 81.0, abs=1e-12)


def test_subcritical_extinction_is_certain() -> None:
    assert extinction_probability(2, 2, 0.2) == pytest.approx(1.0, abs=1e-6)


def test_survives_agrees_with_generation() -> None:
    params = PercolationParams(d=2, M=2, p=0.4)
    for index in range(30):
        seeded = params.with_seed(derive_seed(2, index))
        assert survives(seeded, 6) == generate(seeded, 6).survived


def test_survival_estimate_full_probability() -> None:
    assert survival_estimate(PercolationParams(d=2, M=2, p=1.0), 8, 5) == 1.0


def test_subcritical_survival_frequency_is_small() -> None:
    params = PercolationParams(d=2, M=2, p=0.2, seed=31)
    trials = 400
    exact = _finite_depth_survival(2, 2, 0.2, 10)

    frequency = survival_estimate(params, 10, trials)

    assert exact < 0.05
    assert abs(frequency - exact) <= 4 * math.sqrt(exact * (1 - exact) / trials)


def test_supercritical_survival_matches_fixed_point() -> None:
    params = PercolationParams(d=1, M=2, p=0.9, seed=12)
    trials = 600
    exact = survival_probability(params)

    frequency = survival_estimate(params, 25, trials)

    assert abs(frequency - exact) <= 4 * math.sqrt(exact * (1 - exact) / trials) + 1e-6


def test_normalized_counts_of_full_realization() -> None:
    real = generate(PercolationParams(d=2, M=3, p=1.0), 3)

    assert normalized_counts(real).tolist() == [1.0, 1.0, 1.0, 1.0]


def test_level_six_mean_matches_branching_mean() -> None:
    params = PercolationParams(d=2, M=2, p=0.7)
    counts = np.array([generate(params.with_seed(derive_seed(6, i)), 6).count(6) for i in range(500)])
    standard_error = counts.std(ddof=1) / math.sqrt(counts.size)

    assert abs(counts.mean() - 2.8**6) <= 4 * standard_error


@pytest.mark.integration
def test_box_count_slope_matches_dimension_formula() -> None:
    params = PercolationParams(d=2, M=2, p=0.85)
    slopes: list[float] = []
    index = 0
    while len(slopes) < 20:
        real = generate(params.with_seed(derive_seed(0, index)), 12)
        index += 1
        if real.survived:
            slopes.append(box_count_slope(real, 6, 12))

    assert abs(float(np.mean(slopes)) - theoretical_dimension(params)) <= 0.10
