"""Experiment recipes: a per-trial function producing metric rows and a summarizer producing verdicts.

Trial functions receive a block of ``(trial index, seed)`` pairs and return the rows of
those trials in order. A row depends only on its trial's seed, so any split into blocks
(and any number of workers) yields the same rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np

from fracperc.core import PercolationParams, box_count_slope, derive_seed, generate, theoretical_dimension
from fracperc.distance import distance_certificate
from fracperc.settings import get_settings
from fracperc.settings.config import ThresholdSettings
from fracperc.slices2d import (
    SQRT2,
    DiagonalEventEstimate,
    GridFamily,
    Line,
    chord_summands,
    diagonal_hits,
    growth_diagnostics,
    hoeffding_tail_check,
    projection_counts,
    projection_slope,
)
from fracperc.sums import (
    Coefficients,
    adjust_conditions,
    adjust_probabilities,
    generate_family,
    interval_certificate,
)

from .models import ExperimentConfig, RecipeName

Row = dict[str, Any]
Block = Sequence[tuple[int, int]]
Summary = tuple[dict[str, Any], dict[str, bool]]


@dataclass(frozen=True)
class Recipe:
    name: str
    columns: tuple[str, ...]
    run_block: Callable[[ExperimentConfig, Block], list[Row]]
    summarize: Callable[[ExperimentConfig, list[Row], ThresholdSettings], Summary]
    block_size: int = 1


def _params(config: ExperimentConfig, seed: int, p: float | None = None) -> PercolationParams:
    return PercolationParams(d=config.d, M=config.M, p=config.p if p is None else p, seed=seed)


def _mean_and_se(values: Sequence[float]) -> tuple[float | None, float | None]:
    if not values:
        return None, None
    array = np.asarray(values, dtype=np.float64)
    se = float(array.std(ddof=1) / math.sqrt(array.size)) if array.size > 1 else 0.0
    return float(array.mean()), se


def _first_rows(rows: list[Row]) -> list[Row]:
    """One row per trial, the first in emission order."""

    seen: set[int] = set()
    firsts = []
    for row in rows:
        if row["trial"] not in seen:
            seen.add(row["trial"])
            firsts.append(row)
    return firsts


# ---------------------------------------------------------------------------
# dimension-sweep
# ---------------------------------------------------------------------------


def _dimension_block(config: ExperimentConfig, block: Block) -> list[Row]:
    n_lo, n_hi = config.level_range
    rows: list[Row] = []
    for trial, seed in block:
        real = generate(_params(config, seed), n_hi)
        counts = real.level_counts()
        survived = bool(counts[n_hi] > 0)
        slope = box_count_slope(real, n_lo, n_hi) if survived else None
        for n in range(n_lo, n_hi + 1):
            rows.append(
                {"trial": trial, "seed": seed, "n": n, "count": int(counts[n]), "survived": survived, "slope": slope}
            )
    return rows


def _dimension_summary(config: ExperimentConfig, rows: list[Row], thresholds: ThresholdSettings) -> Summary:
    slopes = [row["slope"] for row in _first_rows(rows) if row["survived"]]
    mean, se = _mean_and_se(slopes)
    target = theoretical_dimension(_params(config, 0))
    tolerance = thresholds.value("dimension_slope_tolerance")
    summary = {
        "surviving": len(slopes),
        "trials": config.trial_count,
        "mean_slope": mean,
        "slope_se": se,
        "theoretical_dimension": target,
    }
    verdicts = {
        "enough_survivors": len(slopes) >= thresholds.value("min_surviving_seeds"),
        "slope_within_tolerance": mean is not None and abs(mean - target) <= tolerance,
    }
    return summary, verdicts


# ---------------------------------------------------------------------------
# slice-growth
# ---------------------------------------------------------------------------


def _growth_block(config: ExperimentConfig, block: Block) -> list[Row]:
    settings = get_settings()
    n_lo, n_hi = config.level_range
    grid_family = GridFamily(
        theta=config.theta if config.theta is not None else settings.simulation.theta,
        density_exponent=(
            config.density_exponent if config.density_exponent is not None else settings.simulation.density_exponent
        ),
        M=config.M,
    )
    rows: list[Row] = []
    for trial, seed in block:
        real = generate(_params(config, seed), n_hi)
        if real.count(n_hi) == 0:
            rows.append({"trial": trial, "seed": seed, "survived": False})
            continue
        diagnostics = growth_diagnostics(real, grid_family, (max(n_lo, 1), n_hi), config.epsilon)
        for row in diagnostics.rows():
            rows.append(
                {
                    "trial": trial,
                    "seed": seed,
                    "survived": True,
                    "n": row["n"],
                    "a_n": float(row["a_n"]),
                    "b_n": float(row["b_n"]),
                    "lambda": float(row["lambda"]),
                    "C2": float(row["C2"]),
                    "dichotomy": bool(row["verdict"]),
                    "below_linear_bound": bool(row["below_linear_bound"]),
                    "threshold": diagnostics.threshold,
                    "verdict": diagnostics.verdict_label,
                }
            )
    return rows


def _growth_summary(config: ExperimentConfig, rows: list[Row], thresholds: ThresholdSettings) -> Summary:
    n_lo, n_hi = config.level_range
    middle = max(n_hi // 2, max(n_lo, 1))
    by_trial: dict[int, dict[int, float]] = {}
    labels: dict[int, str] = {}
    for row in rows:
        if row["survived"]:
            by_trial.setdefault(row["trial"], {})[row["n"]] = row["a_n"]
            labels[row["trial"]] = row["verdict"]
    survivors = len(by_trial)
    passes = sum(1 for label in labels.values() if label == "pass")
    factor = thresholds.value("growth_ratio_factor")
    ratio_ok = sum(
        1 for values in by_trial.values() if values[n_hi] / n_hi <= factor * values[middle] / middle
    )
    pass_rate = passes / survivors if survivors else None
    ratio_rate = ratio_ok / survivors if survivors else None
    summary = {
        "surviving": survivors,
        "trials": config.trial_count,
        "dichotomy_pass_rate": pass_rate,
        "ratio_levels": [middle, n_hi],
        "ratio_rate": ratio_rate,
    }
    verdicts = {
        "survivors": survivors > 0,
        "dichotomy_rate": pass_rate is not None and pass_rate >= thresholds.value("growth_pass_rate"),
        "linear_ratio_rate": ratio_rate is not None and ratio_rate >= thresholds.value("growth_ratio_rate"),
    }
    return summary, verdicts


# ---------------------------------------------------------------------------
# projection-dimension
# ---------------------------------------------------------------------------


def _projection_block(config: ExperimentConfig, block: Block) -> list[Row]:
    n_lo, n_hi = config.level_range
    rows: list[Row] = []
    for trial, seed in block:
        real = generate(_params(config, seed), n_hi)
        survived = real.count(n_hi) > 0
        for alpha in config.alphas:
            counts = projection_counts(real, alpha, n_lo, n_hi)
            slope = projection_slope(real, alpha, n_lo, n_hi) if survived else None
            for n, count in zip(range(n_lo, n_hi + 1), counts):
                rows.append(
                    {
                        "trial": trial,
                        "seed": seed,
                        "alpha": alpha,
                        "n": n,
                        "count": int(count),
                        "survived": survived,
                        "slope": slope,
                    }
                )
    return rows


def _projection_summary(config: ExperimentConfig, rows: list[Row], thresholds: ThresholdSettings) -> Summary:
    target = min(theoretical_dimension(_params(config, 0)), 1.0)
    tolerance = thresholds.value("projection_slope_tolerance")
    surviving = {row["trial"] for row in rows if row["survived"]}
    slopes: dict[float, dict[int, float]] = {alpha: {} for alpha in config.alphas}
    for row in rows:
        if row["survived"]:
            slopes[row["alpha"]][row["trial"]] = row["slope"]
    summary: dict[str, Any] = {"target_dimension": target, "trials": config.trial_count, "surviving": len(surviving)}
    verdicts: dict[str, bool] = {}
    for alpha, values in slopes.items():
        mean, se = _mean_and_se(list(values.values()))
        key = f"alpha={alpha:.6g}"
        summary[key] = {"mean_slope": mean, "slope_se": se, "surviving": len(values)}
        verdicts[key] = mean is not None and abs(mean - target) <= tolerance
    verdicts["enough_survivors"] = len(surviving) >= thresholds.value("min_surviving_seeds")
    return summary, verdicts


# ---------------------------------------------------------------------------
# diagonal-event
# ---------------------------------------------------------------------------


def _diagonal_block(config: ExperimentConfig, block: Block) -> list[Row]:
    seeds = np.asarray([seed for _, seed in block], dtype=np.uint64)
    params = _params(config, 0)
    hits = {k: diagonal_hits(params, k, seeds) for k in config.ks}
    rows: list[Row] = []
    for position, (trial, seed) in enumerate(block):
        for k in config.ks:
            rows.append({"trial": trial, "seed": seed, "k": k, "hit": bool(hits[k][position])})
    return rows


def _diagonal_summary(config: ExperimentConfig, rows: list[Row], thresholds: ThresholdSettings) -> Summary:
    summary: dict[str, Any] = {}
    verdicts: dict[str, bool] = {}
    for k in config.ks:
        hits = sum(1 for row in rows if row["k"] == k and row["hit"])
        estimate = DiagonalEventEstimate.from_hits(config.p, config.M, k, hits, config.trial_count)
        summary[f"k={k}"] = estimate.to_dict()
        verdicts[f"k={k}_inside_bounds"] = estimate.inside_bounds
    return summary, verdicts


# ---------------------------------------------------------------------------
# sum-certificate and distance-certificate
# ---------------------------------------------------------------------------


def _settings_for(config: ExperimentConfig) -> list[tuple[str, float | None]]:
    pairs: list[tuple[str, float | None]] = [("primary", None)]
    if config.contrast_p is not None:
        pairs.append(("contrast", config.contrast_p))
    return pairs


def _sum_block(config: ExperimentConfig, block: Block) -> list[Row]:
    min_len = config.min_len or get_settings().thresholds.value("sum_certificate_min_length")
    coeffs = Coefficients.normalized(config.family_coeffs())
    rows: list[Row] = []
    for trial, seed in block:
        for setting, override in _settings_for(config):
            probs = config.family_probs() if override is None else [override] * len(config.family_probs())
            family = generate_family(probs, config.M, config.depth, seed)
            certificate = interval_certificate(family, coeffs, config.depth, min_len)
            rows.append(
                {
                    "trial": trial,
                    "seed": seed,
                    "setting": setting,
                    "p_product": math.prod(probs),
                    "survived": family.survived(),
                    "found": certificate.found,
                    "lo": certificate.lo,
                    "hi": certificate.hi,
                    "length": certificate.length,
                }
            )
    return rows


def _distance_block(config: ExperimentConfig, block: Block) -> list[Row]:
    min_len = config.min_len or get_settings().thresholds.value("distance_certificate_min_length")
    rows: list[Row] = []
    for trial, seed in block:
        for setting, override in _settings_for(config):
            p = config.p if override is None else override
            real = generate(_params(config, seed, p), config.depth)
            profile = distance_certificate(real, None, config.depth, min_len)
            rows.append(
                {
                    "trial": trial,
                    "seed": seed,
                    "setting": setting,
                    "p": p,
                    "survived": real.survived,
                    "found": profile.certificate.found,
                    "lo": profile.certificate.lo,
                    "hi": profile.certificate.hi,
                    "length": profile.certificate.length,
                    "pairs": profile.pairs,
                }
            )
    return rows


def _certificate_summary(prefix: str) -> Callable[[ExperimentConfig, list[Row], ThresholdSettings], Summary]:
    def summarize(config: ExperimentConfig, rows: list[Row], thresholds: ThresholdSettings) -> Summary:
        summary: dict[str, Any] = {}
        for setting, _ in _settings_for(config):
            chosen = [row for row in rows if row["setting"] == setting]
            survivors = [row for row in chosen if row["survived"]]
            found = sum(1 for row in chosen if row["found"])
            summary[setting] = {
                "trials": len(chosen),
                "surviving": len(survivors),
                "frequency": found / len(chosen) if chosen else 0.0,
                "surviving_rate": found / len(survivors) if survivors else 0.0,
            }
        verdicts = {"primary_rate": summary["primary"]["surviving_rate"] >= thresholds.value(f"{prefix}_rate")}
        if "contrast" in summary:
            gap = summary["primary"]["frequency"] - summary["contrast"]["frequency"]
            summary["gap"] = gap
            verdicts["contrast_gap"] = gap >= thresholds.value(f"{prefix}_gap")
        return summary, verdicts

    return summarize


# ---------------------------------------------------------------------------
# probability-adjust
# ---------------------------------------------------------------------------


def sample_valid_probabilities(rng: np.random.Generator, d: int, M: int, attempts: int = 10_000) -> list[float]:
    """Uniform draws from ``(1/M, 1]^d`` conditioned on ``prod p_i > M^(1-d)``."""

    floor = 1.0 / M
    for _ in range(attempts):
        probs = floor + (1.0 - floor) * (1.0 - rng.random(d))
        if math.prod(probs.tolist()) > float(M) ** (1 - d):
            return [float(item) for item in probs]
    raise RuntimeError(f"no valid probabilities for d={d}, M={M} after {attempts} attempts")


def _adjust_block(config: ExperimentConfig, block: Block) -> list[Row]:
    tolerance = get_settings().thresholds.value("adjust_tolerance")
    rows: list[Row] = []
    for trial, seed in block:
        rng = np.random.Generator(np.random.Philox(seed))
        d = int(rng.integers(2, config.d + 1))
        M = int(rng.integers(2, config.M + 1))
        probs = sample_valid_probabilities(rng, d, M)
        q = adjust_probabilities(probs, M)
        conditions = adjust_conditions(probs, q, M, tolerance=tolerance)
        rows.append(
            {
                "trial": trial,
                "seed": seed,
                "d": d,
                "M": M,
                "probs": probs,
                "q": list(q),
                **conditions,
                "ok": all(conditions.values()),
            }
        )
    return rows


def _adjust_summary(config: ExperimentConfig, rows: list[Row], thresholds: ThresholdSettings) -> Summary:
    failures = sum(1 for row in rows if not row["ok"])
    return {"cases": len(rows), "failures": failures}, {"all_conclusions_hold": failures == 0}


# ---------------------------------------------------------------------------
# hoeffding-tail
# ---------------------------------------------------------------------------


def _hoeffding_block(config: ExperimentConfig, block: Block) -> list[Row]:
    multiplier = get_settings().thresholds.value("hoeffding_se_multiplier")
    rows: list[Row] = []
    for trial, seed in block:
        if config.summands == "chord":
            real = generate(_params(config, seed), max(1, config.depth - 1))
            line = Line(config.alphas[0], SQRT2 / 2.0)
            summands = chord_summands(real, config.depth, line)
            check = hoeffding_tail_check(
                summands.lower.size,
                None,
                config.t,
                config.samples,
                summands=summands,
                seed=derive_seed(seed, 1),
                se_multiplier=multiplier,
            )
        else:
            check = hoeffding_tail_check(
                config.m, [tuple(config.bounds)], config.t, config.samples, seed=seed, se_multiplier=multiplier
            )
        rows.append({"trial": trial, "seed": seed, **check.to_dict()})
    return rows


def _hoeffding_summary(config: ExperimentConfig, rows: list[Row], thresholds: ThresholdSettings) -> Summary:
    failed = sum(1 for row in rows if not row["passed"])
    tails = [row["empirical_tail"] for row in rows]
    return {"repetitions": len(rows), "max_tail": max(tails), "failed": failed}, {"below_bound": failed == 0}


RECIPES: dict[str, Recipe] = {
    recipe.name: recipe
    for recipe in (
        Recipe(
            RecipeName.DIMENSION_SWEEP.value,
            ("trial", "seed", "n", "count", "survived", "slope"),
            _dimension_block,
            _dimension_summary,
        ),
        Recipe(
            RecipeName.SLICE_GROWTH.value,
            (
                "trial",
                "seed",
                "survived",
                "n",
                "a_n",
                "b_n",
                "lambda",
                "C2",
                "dichotomy",
                "below_linear_bound",
                "threshold",
                "verdict",
            ),
            _growth_block,
            _growth_summary,
        ),
        Recipe(
            RecipeName.PROJECTION_DIMENSION.value,
            ("trial", "seed", "alpha", "n", "count", "survived", "slope"),
            _projection_block,
            _projection_summary,
        ),
        Recipe(
            RecipeName.DIAGONAL_EVENT.value,
            ("trial", "seed", "k", "hit"),
            _diagonal_block,
            _diagonal_summary,
            block_size=10_000,
        ),
        Recipe(
            RecipeName.SUM_CERTIFICATE.value,
            ("trial", "seed", "setting", "p_product", "survived", "found", "lo", "hi", "length"),
            _sum_block,
            _certificate_summary("sum_certificate"),
        ),
        Recipe(
            RecipeName.PROBABILITY_ADJUST.value,
            (
                "trial",
                "seed",
                "d",
                "M",
                "probs",
                "q",
                "product_above",
                "partial_products_below",
                "within_range",
                "ok",
            ),
            _adjust_block,
            _adjust_summary,
            block_size=1_000,
        ),
        Recipe(
            RecipeName.DISTANCE_CERTIFICATE.value,
            ("trial", "seed", "setting", "p", "survived", "found", "lo", "hi", "length", "pairs"),
            _distance_block,
            _certificate_summary("distance_certificate"),
        ),
        Recipe(
            RecipeName.HOEFFDING_TAIL.value,
            (
                "trial",
                "seed",
                "m",
                "t",
                "trials",
                "empirical_tail",
                "bound",
                "standard_error",
                "se_multiplier",
                "passed",
            ),
            _hoeffding_block,
            _hoeffding_summary,
        ),
    )
}


def get_recipe(name: str) -> Recipe:
    try:
        return RECIPES[name]
    except KeyError as exc:
        raise KeyError(f"unknown recipe {name!r}; choose from {sorted(RECIPES)}") from exc


__all__ = ["RECIPES", "Recipe", "get_recipe", "sample_valid_probabilities"]
