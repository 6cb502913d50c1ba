"""Unit tests for projection box counts."""

from __future__ import annotations

import math

import numpy as np
import pytest

from fracperc.core import PercolationParams, Realization, derive_seed, generate, theoretical_dimension
from fracperc.errors import ExtinctRealizationError
from fracperc.slices2d import SQRT2, projection_box_count, projection_counts, projection_slope


@pytest.mark.parametrize("alpha", [math.pi / 6, math.pi / 4, math.pi / 3])
def test_full_realization_covers_the_diagonal(alpha: float) -> None:
    real = generate(PercolationParams(d=2, M=2, p=1.0), 4)

    for n in range(1, 5):
        assert projection_box_count(real, n, alpha) == math.ceil(SQRT2 * 2**n)


@pytest.mark.parametrize("cube", [(0, 0), (3, 5), (7, 7), (2, 6)])
def test_single_cube_projects_to_few_cells(cube: tuple[int, int]) -> None:
    levels = [[[0, 0]], [[cube[0] // 4, cube[1] // 4]], [[cube[0] // 2, cube[1] // 2]], [list(cube)]]
    real = Realization.from_levels(PercolationParams(d=2, M=2, p=0.5), levels)

    assert projection_box_count(real, 3, 0.9) in {1, 2, 3}


def test_extinct_level_projects_to_nothing() -> None:
    real = Realization.from_levels(PercolationParams(d=2, M=2, p=0.5), [[[0, 0]], np.zeros((0, 2))])

    assert projection_box_count(real, 1, 0.7) == 0
    with pytest.raises(ExtinctRealizationError):
        projection_slope(real, 0.7, 0, 1)


def test_projection_rejects_axis_angles() -> None:
    real = generate(PercolationParams(d=2, M=2, p=1.0), 1)

    with pytest.raises(ValueError):
        projection_box_count(real, 1, 0.0)


def test_projection_counts_never_exceed_cube_counts() -> None:
    real = generate(PercolationParams(d=2, M=3, p=0.3, seed=21), 5)

    counts = projection_counts(real, math.pi / 5, 1, 5)

    assert counts.shape == (5,)
    assert np.all(counts <= 3 * real.level_counts()[1:])


@pytest.mark.integration
@pytest.mark.parametrize("alpha", [math.pi / 6, math.pi / 4, math.pi / 3])
def test_projection_slope_preserves_small_dimension(alpha: float) -> None:
    params = PercolationParams(d=2, M=3, p=0.2)
    slopes: list[float] = []
    index = 0
    while len(slopes) < 20:
        real = generate(params.with_seed(derive_seed(0, index)), 9)
        index += 1
        if real.survived:
            slopes.append(projection_slope(real, alpha, 5, 9))

    assert abs(float(np.mean(slopes)) - min(theoretical_dimension(params), 1.0)) <= 0.10
