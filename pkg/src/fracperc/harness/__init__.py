"""Experiment configs, recipes, runner and record output."""

from .models import SCHEMA_VERSION, ExperimentConfig, ExperimentRecord, RecipeName, Violation
from .output import format_value, load_record, metric_rows_text, rows_to_csv, write_record
from .recipes import RECIPES, Recipe, get_recipe, sample_valid_probabilities
from .runner import replay_matches, run_experiment
from .validation import validate_config

__all__ = [
    "ExperimentConfig",
    "ExperimentRecord",
    "RECIPES",
    "Recipe",
    "RecipeName",
    "SCHEMA_VERSION",
    "Violation",
    "format_value",
    "get_recipe",
    "load_record",
    "metric_rows_text",
    "replay_matches",
    "rows_to_csv",
    "run_experiment",
    "sample_valid_probabilities",
    "validate_config",
    "write_record",
]
