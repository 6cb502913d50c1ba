"""Field-by-field precondition checks for experiment configs."""

from __future__ import annotations

import math
from typing import Callable

from fracperc.settings import get_settings

from .models import ExperimentConfig, RecipeName, Violation

PLANAR_RECIPES = {
    RecipeName.SLICE_GROWTH.value,
    RecipeName.PROJECTION_DIMENSION.value,
    RecipeName.DIAGONAL_EVENT.value,
}


def _probability_ok(value: float) -> bool:
    return math.isfinite(value) and 0.0 < value <= 1.0


def validate_config(config: ExperimentConfig) -> list[Violation]:
    """Every violated precondition; empty iff the experiment can run."""

    violations: list[Violation] = []

    def report(field: str, message: str, condition: str) -> None:
        violations.append(Violation(field=field, message=message, condition=condition))

    recipe = config.recipe
    if not _probability_ok(config.p):
        report("p", "probability out of (0,1]", "retention probability 0 < p <= 1")
    if config.d < 1:
        report("d", f"dimension {config.d} below 1", "d >= 1")
    if config.M < 2:
        report("M", f"subdivision {config.M} below 2", "M >= 2")
    if config.depth < 1:
        report("depth", f"depth {config.depth} below 1", "depth >= 1")
    n_lo, n_hi = config.level_range
    if not 0 <= n_lo < n_hi <= max(config.depth, 0):
        report(
            "n_lo/n_hi",
            f"level range [{n_lo}, {n_hi}] invalid for depth {config.depth}",
            "0 <= n_lo < n_hi <= depth",
        )
    if config.trial_count < 1:
        report("trials", "at least one trial is required", "trials >= 1")
    if config.workers is not None and config.workers < 1:
        report("workers", "worker count below 1", "workers >= 1")
    if config.theta is not None and not 0.0 < config.theta < math.pi / 4:
        report("theta", f"theta {config.theta} outside (0, pi/4)", "line family angle range 0 < theta < pi/4")
    if config.density_exponent is not None and not 0.0 < config.density_exponent <= 2.0:
        report("density_exponent", "grid density exponent outside (0, 2]", "0 < gamma <= 2")
    if config.epsilon is not None and not config.epsilon > 0.0:
        report("epsilon", "epsilon must be positive", "epsilon > 0")
    if config.contrast_p is not None and not _probability_ok(config.contrast_p):
        report("contrast_p", "contrast probability out of (0,1]", "retention probability 0 < p <= 1")
    if config.min_len is not None and not config.min_len > 0.0:
        report("min_len", "certificate length must be positive", "min_len > 0")

    if recipe in PLANAR_RECIPES and config.d != 2:
        report("d", f"{recipe} needs d = 2", "planar slices need d = 2")
    if recipe == RecipeName.DIMENSION_SWEEP.value and _probability_ok(config.p) and config.M >= 2:
        if config.p <= float(config.M) ** (-config.d):
            report("p", "extinction is certain for p <= M^-d", "survival requires p > M^-d")
    elif recipe == RecipeName.SLICE_GROWTH.value and config.M >= 2:
        if not float(config.M) ** -2 < config.p <= 1.0 / config.M:
            report("p", f"p = {config.p} outside the growth regime", "growth regime M^-2 < p <= M^-1")
    elif recipe == RecipeName.PROJECTION_DIMENSION.value:
        for alpha in config.alphas:
            if not 0.0 < alpha < math.pi / 2:
                report("alphas", f"projection angle {alpha} outside (0, pi/2)", "0 < alpha < pi/2")
    elif recipe == RecipeName.DIAGONAL_EVENT.value:
        if not config.ks or min(config.ks) < 1:
            report("ks", "diagonal event depth must be at least 1", "k >= 1")
    elif recipe == RecipeName.SUM_CERTIFICATE.value:
        _validate_family(config, report)
    elif recipe == RecipeName.PROBABILITY_ADJUST.value:
        if not 2 <= config.d:
            report("d", "adjustment samples dimensions 2..d, so d must be at least 2", "d >= 2")
    elif recipe == RecipeName.DISTANCE_CERTIFICATE.value and config.M >= 2 and _probability_ok(config.p):
        if config.p <= float(config.M) ** (-config.d + 0.5):
            report("p", "p does not exceed M^(-d + 1/2)", "self distance set condition p > M^(-d+1/2)")
    elif recipe == RecipeName.HOEFFDING_TAIL.value:
        if config.m < 1:
            report("m", "at least one summand is required", "m >= 1")
        if len(config.bounds) != 2 or config.bounds[0] > config.bounds[1]:
            report("bounds", "bounds must be a pair a <= b", "a_i <= X_i <= b_i")
        if config.samples < 1:
            report("samples", "at least one sample is required", "samples >= 1")
        if config.summands == "chord" and config.d != 2:
            report("d", "chord summands need d = 2", "planar slices need d = 2")

    budget = get_settings().budget
    if recipe in PLANAR_RECIPES | {RecipeName.DIMENSION_SWEEP.value} and config.M >= 2 and _probability_ok(config.p):
        expected = (config.p * config.M ** max(config.d, 1)) ** config.depth
        if expected > budget.max_retained_cubes:
            report("depth", f"expected {expected:.3g} cubes exceeds the memory budget", "budget.max_retained_cubes")
    return violations


def _validate_family(config: ExperimentConfig, report: Callable[[str, str, str], None]) -> None:
    probs = config.family_probs()
    coeffs = config.family_coeffs()
    if len(probs) < 2:
        report("probs", "a sum needs at least two members", "d >= 2")
    if len(coeffs) != len(probs):
        report("coeffs", f"{len(coeffs)} coefficients for {len(probs)} members", "one coefficient per member")
    if any(not item > 0.0 for item in coeffs):
        report("coeffs", "coefficients must be positive", "a_i > 0")
    if config.M < 2 or not all(_probability_ok(item) for item in probs):
        report("probs", "member probabilities out of (0,1]", "retention probability 0 < p_i <= 1")
        return
    if any(item <= 1.0 / config.M for item in probs):
        report("probs", "member probability not above 1/M", "p_i > M^-1")
    if math.prod(probs) <= float(config.M) ** (1 - len(probs)):
        report("probs", f"product {math.prod(probs):.6g} too small", "sum interval condition prod p_i > M^(-d+1)")
    if config.contrast_p is not None and config.contrast_p <= 1.0 / config.M:
        report("contrast_p", "contrast member probability not above 1/M", "p_i > M^-1")


__all__ = ["validate_config"]
