"""Unit tests for the experiment runner and its recipes."""

from __future__ import annotations

import json
import math

import pytest

from fracperc.core import PercolationParams, generate
from fracperc.errors import BudgetExceededError, ConfigValidationError
from fracperc.harness import (
    ExperimentConfig,
    Recipe,
    get_recipe,
    load_record,
    metric_rows_text,
    replay_matches,
    run_experiment,
)
from fracperc.slices2d import GridFamily, growth_diagnostics


def test_full_dimension_sweep_passes() -> None:
    config = ExperimentConfig(recipe="dimension-sweep", p=1.0, depth=4, trials=20)

    record = run_experiment(config)

    assert len(record.rows) == 20 * 3
    assert record.summary["mean_slope"] == pytest.approx(2.0)
    assert record.verdicts == {"enough_survivors": True, "slope_within_tolerance": True}
    assert record.passed


def test_invalid_config_raises_with_every_violation() -> None:
    with pytest.raises(ConfigValidationError) as excinfo:
        run_experiment(ExperimentConfig(recipe="dimension-sweep", p=1.5, trials=0))

    assert {violation.field for violation in excinfo.value.violations} >= {"p", "trials"}


def test_unknown_recipe_lookup() -> None:
    with pytest.raises(KeyError):
        get_recipe("no-such-recipe")


def test_replay_is_byte_identical() -> None:
    config = ExperimentConfig(recipe="dimension-sweep", p=0.7, depth=5, trials=6, master_seed=11)

    record = run_experiment(config)

    assert replay_matches(record)
    assert metric_rows_text(record.replay()) == metric_rows_text(record)


def test_worker_count_does_not_change_rows() -> None:
    config = ExperimentConfig(recipe="dimension-sweep", p=0.7, depth=5, trials=6, master_seed=11)

    inline = run_experiment(config, workers=1)
    pooled = run_experiment(config, workers=2)

    assert metric_rows_text(pooled) == metric_rows_text(inline)


def test_growth_rows_follow_diagnostics() -> None:
    config = ExperimentConfig(recipe="slice-growth", p=0.45, depth=6, trials=3, theta=0.2, epsilon=0.05, master_seed=2)

    record = run_experiment(config)

    for seed in config.trial_seeds():
        real = generate(PercolationParams(d=2, M=2, p=0.45, seed=seed), 6)
        rows = [row for row in record.rows if row["seed"] == seed]
        if real.count(6) == 0:
            assert rows == [{"trial": rows[0]["trial"], "seed": seed, "survived": False}]
            continue
        diagnostics = growth_diagnostics(real, GridFamily(theta=0.2), (3, 6), 0.05)
        assert [row["a_n"] for row in rows] == pytest.approx(list(diagnostics.a))
        assert {row["verdict"] for row in rows} == {diagnostics.verdict_label}


def test_records_are_written_and_replayed_from_disk(tmp_path) -> None:
    config = ExperimentConfig(recipe="dimension-sweep", p=0.8, depth=4, trials=4, output_dir=tmp_path)

    record = run_experiment(config)
    loaded = load_record(tmp_path / "dimension-sweep.json")

    assert (tmp_path / "dimension-sweep.csv").read_text(encoding="utf-8") == metric_rows_text(record)
    assert replay_matches(loaded)


def test_budget_abort_flushes_completed_trials(mocker, tmp_path) -> None:
    def run_block(config, block):
        trial, seed = block[0]
        if trial == 2:
            raise BudgetExceededError("retained cubes", 10, 5)
        return [{"trial": trial, "seed": seed}]

    fake = Recipe("dimension-sweep", ("trial", "seed"), run_block, lambda config, rows, thresholds: ({}, {}))
    mocker.patch.dict("fracperc.harness.recipes.RECIPES", {"dimension-sweep": fake})
    config = ExperimentConfig(recipe="dimension-sweep", p=0.7, depth=3, trials=5, output_dir=tmp_path, format="json")

    with pytest.raises(BudgetExceededError):
        run_experiment(config)

    payload = json.loads((tmp_path / "dimension-sweep.json").read_text(encoding="utf-8"))
    assert payload["partial"] is True
    assert payload["summary"] == {"completed_trials": 2}
    assert [row["trial"] for row in payload["rows"]] == [0, 1]


def test_diagonal_event_recipe() -> None:
    config = ExperimentConfig(recipe="diagonal-event", p=0.9, depth=2, ks=[1, 2], trials=4_000)

    record = run_experiment(config)

    assert len(record.rows) == 8_000
    assert record.verdicts == {"k=1_inside_bounds": True, "k=2_inside_bounds": True}


def test_probability_adjust_recipe() -> None:
    config = ExperimentConfig(recipe="probability-adjust", d=5, M=4, depth=1, trials=200)

    record = run_experiment(config)

    assert record.summary == {"cases": 200, "failures": 0}
    assert record.passed


def test_hoeffding_recipe_variants() -> None:
    uniform = run_experiment(ExperimentConfig(recipe="hoeffding-tail", m=100, t=10.0, samples=20_000, trials=2))
    chord = run_experiment(
        ExperimentConfig(recipe="hoeffding-tail", summands="chord", p=0.7, depth=4, t=0.05, samples=20_000, trials=2)
    )

    assert uniform.verdicts == {"below_bound": True}
    assert uniform.rows[0]["bound"] == pytest.approx(math.exp(-2.0))
    assert chord.verdicts == {"below_bound": True}


def test_certificate_recipes_on_full_realizations() -> None:
    sums = run_experiment(
        ExperimentConfig(recipe="sum-certificate", probs=[1.0, 1.0], depth=3, trials=2, min_len=0.5)
    )
    distances = run_experiment(ExperimentConfig(recipe="distance-certificate", p=1.0, depth=3, trials=1))

    assert all(row["found"] for row in sums.rows)
    assert sums.verdicts == {"primary_rate": True}
    assert distances.rows[0]["found"] is True
    assert distances.passed


def test_certificate_recipe_reports_contrast_gap() -> None:
    config = ExperimentConfig(
        recipe="sum-certificate", probs=[1.0, 1.0], depth=3, trials=2, min_len=0.5, contrast_p=0.55
    )

    record = run_experiment(config)

    assert [row["setting"] for row in record.rows] == ["primary", "contrast"] * 2
    assert "contrast_gap" in record.verdicts
    assert record.summary["gap"] == pytest.approx(
        record.summary["primary"]["frequency"] - record.summary["contrast"]["frequency"]
    )


def test_projection_recipe_reports_each_angle() -> None:
    config = ExperimentConfig(recipe="projection-dimension", p=1.0, depth=4, trials=1, alphas=[math.pi / 4])

    record = run_experiment(config)

    assert record.verdicts["alpha=0.785398"] is True
    assert record.verdicts["enough_survivors"] is False
    assert not record.passed


def test_projection_survivors_are_counted_per_trial() -> None:
    config = ExperimentConfig(
        recipe="projection-dimension", p=1.0, depth=3, trials=20, alphas=[math.pi / 6, math.pi / 3]
    )

    record = run_experiment(config)

    assert record.summary["surviving"] == 20
    assert record.summary["alpha=0.523599"]["surviving"] == 20
    assert record.verdicts["enough_survivors"] is True
