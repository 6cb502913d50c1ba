"""Unit tests for realization generation, storage and serialization."""

from __future__ import annotations

import numpy as np
import pytest

from fracperc.core import CubeIndex, PercolationParams, Realization, derive_seed, generate, pack_indices
from fracperc.errors import BudgetExceededError, CubeNotRetainedError, LevelOutOfRangeError


def test_full_probability_keeps_every_cube() -> None:
    real = generate(PercolationParams(d=2, M=2, p=1.0, seed=3), 3)

    assert real.level_counts().tolist() == [1, 4, 16, 64]


def test_generation_is_deterministic() -> None:
    params = PercolationParams(d=2, M=2, p=0.5, seed=123)

    first = generate(params, 1)
    second = generate(params, 1)

    assert first == second
    assert first.digest() == second.digest()


def test_levels_are_nested() -> None:
    real = generate(PercolationParams(d=2, M=3, p=0.6, seed=5), 4)

    for n in range(1, real.depth + 1):
        parents = pack_indices(real.cubes(n) // real.M, n - 1, real.M)
        assert np.all(np.isin(parents, real.keys[n - 1]))
        assert np.all(np.diff(real.keys[n]) > 0)


def test_same_seed_couples_probabilities_monotonically() -> None:
    low = generate(PercolationParams(d=2, M=2, p=0.55, seed=17), 6)
    high = generate(PercolationParams(d=2, M=2, p=0.8, seed=17), 6)

    for n in range(low.depth + 1):
        assert np.all(np.isin(low.keys[n], high.keys[n]))


def test_level_one_mean_matches_binomial() -> None:
    params = PercolationParams(d=2, M=2, p=0.7)
    trials = 4_000
    counts = np.array([generate(params.with_seed(derive_seed(1, i)), 1).count(1) for i in range(trials)])
    standard_error = np.sqrt(4 * 0.7 * 0.3 / trials)

    assert abs(counts.mean() - 2.8) <= 4 * standard_error


def test_extinction_absorbs() -> None:
    params = PercolationParams(d=2, M=2, p=0.2)
    for index in range(100):
        real = generate(params.with_seed(index), 6)
        level = real.extinction_level()
        if level is not None:
            assert np.all(real.level_counts()[level:] == 0)
            assert not real.survived
            return
    pytest.fail("no extinct realization among 100 subcritical seeds")


def test_budget_is_enforced() -> None:
    with pytest.raises(BudgetExceededError) as excinfo:
        generate(PercolationParams(d=2, M=2, p=1.0), 10, budget=1_000)

    assert excinfo.value.resource == "retained cubes"


def test_memory_budget_environment_variable(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("FRACPERC_MEMORY_BUDGET", "100")

    with pytest.raises(BudgetExceededError):
        generate(PercolationParams(d=2, M=2, p=1.0), 5)


def test_level_out_of_range() -> None:
    real = generate(PercolationParams(d=2, M=2, p=0.9, seed=1), 2)

    with pytest.raises(LevelOutOfRangeError):
        real.count(3)


def test_serialization_round_trip() -> None:
    real = generate(PercolationParams(d=2, M=3, p=0.5, seed=99), 4)

    restored = Realization.loads(real.dumps())

    assert restored == real
    assert restored.digest() == real.digest()
    assert real.to_payload()["format"] == "fracperc.realization"


def test_from_levels_rejects_orphans() -> None:
    params = PercolationParams(d=1, M=2, p=0.5)

    with pytest.raises(ValueError):
        Realization.from_levels(params, [[[0]], [[0]], [[3]]])


def test_subtree_at_root_is_identity() -> None:
    real = generate(PercolationParams(d=2, M=2, p=0.7, seed=4), 5)

    assert real.subtree(CubeIndex.root(2)) == real


def test_subtree_of_full_realization_is_full() -> None:
    real = generate(PercolationParams(d=2, M=2, p=1.0), 4)

    sub = real.subtree(CubeIndex(1, (1, 0)))

    assert sub.depth == 3
    assert sub.level_counts().tolist() == [1, 4, 16, 64]


def test_subtree_requires_retained_cube() -> None:
    real = Realization.from_levels(PercolationParams(d=1, M=2, p=0.5), [[[0]], [[0]]])

    with pytest.raises(CubeNotRetainedError):
        real.subtree(CubeIndex(1, (1,)))


def test_reflection_is_an_involution() -> None:
    real = generate(PercolationParams(d=2, M=3, p=0.6, seed=8), 3)

    mirrored = real.reflected(1)

    assert mirrored.level_counts().tolist() == real.level_counts().tolist()
    assert mirrored.reflected(1) == real


def test_descendants_and_contains() -> None:
    real = generate(PercolationParams(d=2, M=2, p=1.0), 3)
    cube = CubeIndex(1, (0, 1))

    below = real.descendants(cube, 3)

    assert below.shape == (16, 2)
    assert np.all(below // 4 == np.array([0, 1]))
    assert real.contains(CubeIndex(3, (7, 7)))
    assert not real.contains(CubeIndex(3, (8, 0)))
