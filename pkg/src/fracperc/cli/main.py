"""Command-line entry point for fracperc experiments."""

from __future__ import annotations

import argparse
import json
from pathlib import Path
from typing import Any

from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from fracperc.core import PercolationParams, generate
from fracperc.errors import BudgetExceededError, ConfigValidationError, FracpercError
from fracperc.harness import (
    ExperimentConfig,
    ExperimentRecord,
    RecipeName,
    load_record,
    replay_matches,
    rows_to_csv,
    run_experiment,
    validate_config,
)
from fracperc.observability import configure_logging, get_observability
from fracperc.settings import get_settings

console = Console()

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_BUDGET = 3

SUBCOMMAND_RECIPES: dict[str, tuple[str, ...]] = {
    "dims": (RecipeName.DIMENSION_SWEEP.value,),
    "slices": (
        RecipeName.SLICE_GROWTH.value,
        RecipeName.DIAGONAL_EVENT.value,
        RecipeName.HOEFFDING_TAIL.value,
    ),
    "project": (RecipeName.PROJECTION_DIMENSION.value,),
    "sums": (RecipeName.SUM_CERTIFICATE.value, RecipeName.PROBABILITY_ADJUST.value),
    "distance": (RecipeName.DISTANCE_CERTIFICATE.value,),
}

# argparse dest -> ExperimentConfig field
CONFIG_FIELDS = {
    "d": "d",
    "M": "M",
    "p": "p",
    "depth": "depth",
    "seed": "master_seed",
    "trials": "trials",
    "theta": "theta",
    "epsilon": "epsilon",
    "grid_exp": "density_exponent",
    "out": "output_dir",
    "format": "format",
    "n_lo": "n_lo",
    "n_hi": "n_hi",
    "alpha": "alphas",
    "k": "ks",
    "probs": "probs",
    "coeffs": "coeffs",
    "min_len": "min_len",
    "contrast_p": "contrast_p",
    "workers": "workers",
    "summands": "summands",
    "m": "m",
    "t": "t",
    "bounds": "bounds",
    "samples": "samples",
}


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--d", type=int, help="Ambient dimension (default: 2).")
    parser.add_argument("--M", type=int, help="Subdivision factor (default: 2).")
    parser.add_argument("--p", type=float, help="Retention probability in (0, 1].")
    parser.add_argument("--depth", type=int, help="Deepest construction level.")
    parser.add_argument("--seed", type=int, help="Master seed; trial seeds are derived from it.")
    parser.add_argument("--out", type=Path, help="Directory for CSV/JSON output.")
    parser.add_argument("--format", choices=["csv", "json"], help="Output format (default: csv).")


def _add_experiment(parser: argparse.ArgumentParser, recipes: tuple[str, ...]) -> None:
    _add_common(parser)
    parser.add_argument("--recipe", choices=recipes, default=recipes[0], help=f"Recipe (default: {recipes[0]}).")
    parser.add_argument("--trials", type=int, help="Number of independent trials.")
    parser.add_argument("--n-lo", dest="n_lo", type=int, help="Lowest level of the fit range.")
    parser.add_argument("--n-hi", dest="n_hi", type=int, help="Highest level of the fit range.")
    parser.add_argument("--workers", type=int, help="Worker processes (default: settings.simulation.workers).")
    parser.add_argument("--progress", action="store_true", help="Show a progress bar.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Fractal percolation experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="Generate one realization and report level counts.")
    _add_common(gen)
    gen.set_defaults(func=run_generate)

    dims = sub.add_parser("dims", help="Box-counting dimension sweep.")
    _add_experiment(dims, SUBCOMMAND_RECIPES["dims"])
    dims.set_defaults(func=run_recipe)

    slices = sub.add_parser("slices", help="Planar line slices: growth dichotomy, diagonal event, tail bound.")
    _add_experiment(slices, SUBCOMMAND_RECIPES["slices"])
    slices.add_argument("--theta", type=float, help="Line family angle in (0, pi/4).")
    slices.add_argument("--epsilon", type=float, help="Growth constant epsilon.")
    slices.add_argument("--grid-exp", dest="grid_exp", type=float, help="Line grid density exponent.")
    slices.add_argument("--k", type=int, action="append", help="Diagonal event depth (repeatable).")
    slices.add_argument("--alpha", type=float, action="append", help="Line angle for chord summands.")
    slices.add_argument("--summands", choices=["uniform", "chord"], help="Tail check summands.")
    slices.add_argument("--m", type=int, help="Number of uniform summands.")
    slices.add_argument("--t", type=float, help="Tail deviation.")
    slices.add_argument("--bounds", type=float, nargs=2, help="Uniform summand bounds a b.")
    slices.add_argument("--samples", type=int, help="Monte Carlo draws per tail check.")
    slices.set_defaults(func=run_recipe)

    project = sub.add_parser("project", help="Box dimension of projections.")
    _add_experiment(project, SUBCOMMAND_RECIPES["project"])
    project.add_argument("--alpha", type=float, action="append", help="Projection angle (repeatable).")
    project.set_defaults(func=run_recipe)

    sums = sub.add_parser("sums", help="Algebraic sums of independent percolations.")
    _add_experiment(sums, SUBCOMMAND_RECIPES["sums"])
    sums.add_argument("--probs", type=float, nargs="+", help="Member retention probabilities.")
    sums.add_argument("--coeffs", type=float, nargs="+", help="Positive coefficients (normalized to unit length).")
    sums.add_argument("--min-len", dest="min_len", type=float, help="Certificate minimum length.")
    sums.add_argument("--contrast-p", dest="contrast_p", type=float, help="Member probability of the contrast run.")
    sums.set_defaults(func=run_recipe)

    distance = sub.add_parser("distance", help="Self distance sets.")
    _add_experiment(distance, SUBCOMMAND_RECIPES["distance"])
    distance.add_argument("--min-len", dest="min_len", type=float, help="Certificate minimum length.")
    distance.add_argument("--contrast-p", dest="contrast_p", type=float, help="Probability of the contrast run.")
    distance.set_defaults(func=run_recipe)

    check = sub.add_parser("check", help="Replay a stored record or validate a config file.")
    target = check.add_mutually_exclusive_group(required=True)
    target.add_argument("--record", type=Path, help="Record JSON written by a previous run.")
    target.add_argument("--config", type=Path, help="Experiment config JSON to validate.")
    check.add_argument("--workers", type=int, help="Worker processes for the replay.")
    check.set_defaults(func=run_check)
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    """Experiment config from parsed flags; flags left unset keep the model defaults."""

    values: dict[str, Any] = {"recipe": args.recipe, "command": args.command}
    for dest, field_name in CONFIG_FIELDS.items():
        value = getattr(args, dest, None)
        if value is not None:
            values[field_name] = value
    return ExperimentConfig(**values)


def _flatten(payload: dict[str, Any], prefix: str = "") -> list[tuple[str, Any]]:
    items: list[tuple[str, Any]] = []
    for key, value in payload.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            items.extend(_flatten(value, prefix=f"{name}."))
        else:
            items.append((name, value))
    return items


def _print_record(record: ExperimentRecord) -> None:
    table = Table(title=f"{record.recipe} ({len(record.rows)} rows)")
    table.add_column("metric", style="cyan")
    table.add_column("value")
    for name, value in _flatten(record.summary):
        table.add_row(name, f"{value:.6g}" if isinstance(value, float) else str(value))
    for name, verdict in record.verdicts.items():
        table.add_row(f"verdict {name}", "[green]pass[/green]" if verdict else "[red]fail[/red]")
    console.print(table)


def run_recipe(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    record = run_experiment(config, workers=args.workers, progress=args.progress)
    _print_record(record)
    if not record.passed:
        console.print("[red]❌ Verdict failed.[/red]")
        return EXIT_FAIL
    console.print("[green]✅ All verdicts passed.[/green]")
    return EXIT_PASS


def run_generate(args: argparse.Namespace) -> int:
    params = PercolationParams(
        d=args.d if args.d is not None else 2,
        M=args.M if args.M is not None else 2,
        p=args.p if args.p is not None else 0.5,
        seed=args.seed if args.seed is not None else 0,
    )
    depth = args.depth if args.depth is not None else 8
    real = generate(params, depth)
    counts = real.level_counts()
    table = Table(title=f"realization {real.digest()[:12]}")
    table.add_column("n", justify="right")
    table.add_column("retained", justify="right")
    for n, count in enumerate(counts):
        table.add_row(str(n), str(int(count)))
    console.print(table)
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        rows = [{"n": n, "count": int(count)} for n, count in enumerate(counts)]
        if (args.format or "csv") == "csv":
            (args.out / "level_counts.csv").write_text(rows_to_csv(["n", "count"], rows), encoding="utf-8")
        (args.out / "realization.json").write_text(real.dumps(), encoding="utf-8")
        console.print(f"[green]✅ Wrote realization to {args.out}[/green]")
    return EXIT_PASS


def run_check(args: argparse.Namespace) -> int:
    if args.config is not None:
        config = ExperimentConfig.model_validate(json.loads(args.config.read_text(encoding="utf-8")))
        violations = validate_config(config)
        if violations:
            for violation in violations:
                console.print(f"[red]❌ {violation}[/red]")
            return EXIT_CONFIG
        console.print("[green]✅ Config is valid.[/green]")
        return EXIT_PASS

    record = load_record(args.record)
    if replay_matches(record, workers=args.workers):
        console.print("[green]✅ Replay produced identical metric rows.[/green]")
        return EXIT_PASS
    console.print("[red]❌ Replay rows differ from the stored record.[/red]")
    return EXIT_FAIL


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(args=argv)
    configure_logging(get_settings())
    observability = get_observability(component="cli")
    try:
        return args.func(args)
    except ConfigValidationError as exc:
        for violation in exc.violations:
            console.print(f"[red]❌ {violation}[/red]")
        return EXIT_CONFIG
    except ValidationError as exc:
        console.print(f"[red]❌ Invalid parameters:[/red] {exc}")
        return EXIT_CONFIG
    except BudgetExceededError as exc:
        observability.emit_event("cli.budget_abort", resource=exc.resource, limit=exc.limit)
        console.print(f"[red]❌ {exc}[/red]")
        return EXIT_BUDGET
    except (FracpercError, ValueError, FileNotFoundError) as exc:
        console.print(f"[red]❌ {exc}[/red]")
        return EXIT_CONFIG


__all__ = ["build_parser", "config_from_args", "main"]
