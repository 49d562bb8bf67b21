"""Serialization of command output tables.

CSV output carries the metadata as ``#``-prefixed JSON lines ahead of the
header row; floats are written with 17 significant digits so identical
runs produce identical bytes. JSON output writes floats in their shortest
round-trip form, which is just as exact.
"""

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Optional

from afcsim.schemas.command import OutputTable

FORMATS = ("csv", "json")


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    return str(value)


def _json_safe(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return format_value(value)
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def to_csv(table: OutputTable) -> str:
    buffer = io.StringIO()
    for key, value in table.metadata.items():
        buffer.write(f"# {key}: {json.dumps(_json_safe(value))}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_value(v) for v in row])
    return buffer.getvalue()


def to_json(table: OutputTable) -> str:
    document = {
        "columns": table.columns,
        "rows": _json_safe(table.rows),
        "metadata": _json_safe(table.metadata),
    }
    if table.passed is not None:
        document["passed"] = table.passed
    return json.dumps(document, indent=2) + "\n"


def render(table: OutputTable, fmt: str = "csv") -> str:
    if fmt == "csv":
        return to_csv(table)
    if fmt == "json":
        return to_json(table)
    raise ValueError(f"Unknown output format: {fmt}")


def write_table(table: OutputTable, fmt: str = "csv", path: Optional[str] = None) -> str:
    """Render the table and write it to ``path``; returns the rendered text"""
    text = render(table, fmt)
    if path:
        Path(path).write_text(text)
    return text
