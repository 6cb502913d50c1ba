"""Run experiment recipes across a worker pool and assemble their records."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Iterator, List, Sequence

from tqdm import tqdm

from fracperc.errors import BudgetExceededError, ConfigValidationError
from fracperc.observability import get_observability
from fracperc.settings import get_settings

from .models import ExperimentConfig, ExperimentRecord
from .output import metric_rows_text, write_record
from .recipes import Block, Row, get_recipe
from .validation import validate_config

LOGGER = logging.getLogger("fracperc.harness.runner")


def _blocks(seeds: Sequence[int], size: int) -> List[Block]:
    indexed = list(enumerate(seeds))
    return [indexed[start : start + size] for start in range(0, len(indexed), size)]


def _run_block(payload: tuple[str, dict, Block]) -> list[Row]:
    """Worker entry point; configs travel as plain dicts."""

    recipe_name, config_payload, block = payload
    config = ExperimentConfig.model_validate(config_payload)
    return get_recipe(recipe_name).run_block(config, block)


def _iterate_blocks(config: ExperimentConfig, blocks: List[Block], workers: int) -> Iterator[list[Row]]:
    payloads = [(config.recipe, config.model_dump(mode="json"), block) for block in blocks]
    if workers <= 1 or len(blocks) <= 1:
        for payload in payloads:
            yield _run_block(payload)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map preserves submission order, so rows never depend on scheduling
        yield from pool.map(_run_block, payloads)


def run_experiment(
    config: ExperimentConfig,
    *,
    workers: int | None = None,
    progress: bool = False,
) -> ExperimentRecord:
    """Validate ``config``, run its recipe over every trial seed and summarize.

    Writes the record when ``config.output_dir`` is set. Rows are identical for any worker count.

    Raises:
        ConfigValidationError: the config violates a precondition.
        BudgetExceededError: a trial hit a resource ceiling; completed rows are flushed first.
    """

    violations = validate_config(config)
    if violations:
        raise ConfigValidationError(violations)

    settings = get_settings()
    recipe = get_recipe(config.recipe)
    worker_count = workers or config.workers or settings.simulation.workers
    seeds = config.trial_seeds()
    blocks = _blocks(seeds, recipe.block_size)
    observability = get_observability(component="harness")
    observability.emit_event(
        "experiment.started",
        recipe=recipe.name,
        trials=len(seeds),
        workers=worker_count,
        master_seed=config.master_seed,
    )

    rows: list[Row] = []
    completed = 0
    started = time.perf_counter()
    bar = tqdm(total=len(seeds), desc=recipe.name, unit="trial", disable=not progress)
    try:
        for block, block_rows in zip(blocks, _iterate_blocks(config, blocks, worker_count)):
            rows.extend(block_rows)
            completed += len(block)
            bar.update(len(block))
            observability.emit_event(
                "experiment.trial_completed",
                level=logging.DEBUG,
                recipe=recipe.name,
                completed=completed,
            )
    except BudgetExceededError as exc:
        observability.emit_event(
            "experiment.aborted",
            level=logging.WARNING,
            recipe=recipe.name,
            completed=completed,
            resource=exc.resource,
            requested=exc.requested,
            limit=exc.limit,
        )
        if config.output_dir is not None:
            partial = ExperimentRecord(
                recipe=recipe.name,
                config=config,
                columns=list(recipe.columns),
                rows=rows,
                summary={"completed_trials": completed},
                partial=True,
            )
            write_record(partial, config.output_dir, config.format)
        raise
    finally:
        bar.close()

    summary, verdicts = recipe.summarize(config, rows, settings.thresholds)
    observability.emit_event(
        "experiment.finished",
        recipe=recipe.name,
        trials=completed,
        duration_ms=round((time.perf_counter() - started) * 1000.0, 3),
        verdicts=verdicts,
    )
    record = ExperimentRecord(
        recipe=recipe.name,
        config=config,
        columns=list(recipe.columns),
        rows=rows,
        summary=summary,
        verdicts=verdicts,
    )
    if config.output_dir is not None:
        write_record(record, config.output_dir, config.format)
    LOGGER.debug("Experiment %s finished with verdicts %s", recipe.name, verdicts)
    return record


def replay_matches(record: ExperimentRecord, *, workers: int | None = None) -> bool:
    """Re-run a stored record and compare its metric rows byte for byte."""

    replayed = record.replay(workers=workers)
    return metric_rows_text(replayed) == metric_rows_text(record)


__all__ = ["replay_matches", "run_experiment"]
