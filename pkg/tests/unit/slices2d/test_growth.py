"""Unit tests for grid maxima and the growth dichotomy."""

from __future__ import annotations

import math

import numpy as np
import pytest

from fracperc.core import PercolationParams, Realization, generate
from fracperc.slices2d import (
    GridFamily,
    GrowthConstants,
    growth_diagnostics,
    in_growth_regime,
    line_grid,
    max_rescaled_slice,
    measure_s_theta,
    slice_length,
)
from fracperc.slices2d.growth import clamp_epsilon


def test_constants_in_the_growth_regime() -> None:
    constants = GrowthConstants.build(2, 0.45, 0.05)

    assert constants.epsilon == 0.05
    assert constants.u == pytest.approx(1.0 + 0.05 / 3.0)
    assert constants.lam == pytest.approx(0.45 * 2.0 * (1.0 + 0.1 / 3.0))
    assert constants.lam < 1.0
    assert constants.b(10) == pytest.approx(8.0 * math.log(2.0) / constants.r * 10)


def test_epsilon_is_clamped_into_range() -> None:
    assert clamp_epsilon(2, 0.45, 0.5) == pytest.approx(0.05)
    assert clamp_epsilon(2, 0.45, 0.02) == 0.02


def test_growth_regime_boundaries() -> None:
    assert in_growth_regime(2, 0.45)
    assert in_growth_regime(2, 0.5)
    assert not in_growth_regime(2, 0.25)
    assert not in_growth_regime(2, 0.6)


@pytest.mark.parametrize("n", [2, 3])
def test_grid_maximum_matches_brute_force(n: int) -> None:
    real = generate(PercolationParams(d=2, M=2, p=0.6, seed=14), 3)
    grid = line_grid(0.3, n, 1.0, 2)

    expected = max(2**n * slice_length(real, n, line) for line in grid.lines())
    result = max_rescaled_slice(real, n, grid)

    assert result.value == pytest.approx(expected, abs=1e-9)
    assert result.line is not None
    assert 2**n * slice_length(real, n, result.line) == pytest.approx(expected, abs=1e-9)


def test_grid_maximum_of_extinct_level() -> None:
    real = Realization.from_levels(PercolationParams(d=2, M=2, p=0.5), [[[0, 0]], [[1, 0]], np.zeros((0, 2))])

    result = max_rescaled_slice(real, 2, line_grid(0.3, 2))

    assert result.value == 0.0
    assert result.line is None


def test_diagnostics_rows_in_regime() -> None:
    real = generate(PercolationParams(d=2, M=2, p=0.45, seed=3), 6)
    diagnostics = growth_diagnostics(real, GridFamily(theta=0.2), (3, 6), 0.05)

    rows = diagnostics.rows()

    assert [row["n"] for row in rows] == [3, 4, 5, 6]
    assert diagnostics.applicable
    assert diagnostics.verdict_label in {"pass", "fail"}
    assert all(row["b_n"] == pytest.approx(diagnostics.constants.b(row["n"])) for row in rows)
    assert diagnostics.to_dict()["verdict"] == diagnostics.verdict_label


def test_diagnostics_outside_regime_are_not_applicable() -> None:
    real = generate(PercolationParams(d=2, M=2, p=0.7, seed=3), 4)

    diagnostics = growth_diagnostics(real, GridFamily(theta=0.2), (2, 4))

    assert diagnostics.verdict is None
    assert diagnostics.verdict_label == "not-applicable"


def test_diagnostics_validate_levels() -> None:
    real = generate(PercolationParams(d=2, M=2, p=0.45, seed=3), 4)

    with pytest.raises(ValueError):
        growth_diagnostics(real, GridFamily(theta=0.2), (0, 3))


def test_s_theta_is_finite() -> None:
    value = measure_s_theta(0.2, 4, samples=500)

    assert 0.0 <= value < 10.0
