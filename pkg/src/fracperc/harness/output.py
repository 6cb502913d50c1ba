"""CSV and JSON writers for experiment records."""

from __future__ import annotations

import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, Sequence

import numpy as np

from .models import ExperimentRecord

LOGGER = logging.getLogger("fracperc.harness.output")

LIST_SEPARATOR = ";"


def format_value(value: Any) -> str:
    """Text form of one CSV cell; floats carry 17 significant digits."""

    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, (list, tuple, np.ndarray)):
        return LIST_SEPARATOR.join(format_value(item) for item in value)
    return str(value)


def rows_to_csv(columns: Sequence[str], rows: Iterable[Dict[str, Any]]) -> str:
    """Metric rows as CSV text with a header; columns missing from a row are left empty."""

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(column)) for column in columns])
    return buffer.getvalue()


def metric_rows_text(record: ExperimentRecord) -> str:
    """Canonical text of the metric rows; replays compare this byte for byte."""

    return rows_to_csv(record.columns, record.rows)


def _record_payload(record: ExperimentRecord, *, include_rows: bool) -> Dict[str, Any]:
    payload = record.model_dump(mode="json")
    if not include_rows:
        payload.pop("rows", None)
    return payload


def write_record(record: ExperimentRecord, out_dir: Path, fmt: str = "csv") -> Dict[str, Path]:
    """Write the record under ``out_dir`` and return the artifact paths keyed by kind.

    ``csv`` writes ``<recipe>.csv`` for the rows and ``<recipe>.json`` for the summary, verdicts
    and config echo. ``json`` writes a single ``<recipe>.json`` holding the rows too.
    """

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    artifacts: Dict[str, Path] = {}
    normalized = fmt.lower().strip()
    if normalized not in {"csv", "json"}:
        raise ValueError(f"unsupported output format {fmt!r}")

    json_path = out_dir / f"{record.recipe}.json"
    if normalized == "csv":
        csv_path = out_dir / f"{record.recipe}.csv"
        csv_path.write_text(metric_rows_text(record), encoding="utf-8")
        artifacts["csv"] = csv_path
    with json_path.open("w", encoding="utf-8") as handle:
        json.dump(_record_payload(record, include_rows=normalized == "json"), handle, indent=2, sort_keys=False)
        handle.write("\n")
    artifacts["json"] = json_path
    LOGGER.info("Wrote %s record to %s", record.recipe, out_dir)
    return artifacts


def load_record(path: Path) -> ExperimentRecord:
    """Read a record written by :func:`write_record`.

    ``path`` may point at the JSON file or at its directory sibling CSV. Rows written as CSV are
    kept as their text cells; :func:`metric_rows_text` reproduces the file exactly.
    """

    path = Path(path)
    json_path = path.with_suffix(".json")
    payload = json.loads(json_path.read_text(encoding="utf-8"))
    if "rows" not in payload:
        csv_path = path.with_suffix(".csv")
        with csv_path.open(newline="", encoding="utf-8") as handle:
            payload["rows"] = list(csv.DictReader(handle))
    return ExperimentRecord.model_validate(payload)


__all__ = ["format_value", "load_record", "metric_rows_text", "rows_to_csv", "write_record"]
