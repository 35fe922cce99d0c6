"""Output formats: CSV, schema-versioned JSON and gnuplot-style plot data."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any

from .errors import DomainError

SCHEMA = "cospow/1"
FORMATS = ("csv", "json", "plot-data")


@dataclass(frozen=True)
class OutputSpec:
    format: str
    path: str = "-"

    @classmethod
    def parse(cls, text: str) -> "OutputSpec":
        """``csv:-``, ``json:out.json``, ``plot-data`` (stdout) and similar."""
        fmt, sep, path = text.partition(":")
        fmt = fmt.strip().lower()
        if fmt not in FORMATS:
            raise DomainError(f"unknown output format {fmt!r}; expected one of {', '.join(FORMATS)}")
        return cls(fmt, path if sep and path else "-")


@dataclass
class Table:
    command: str
    columns: list[str]
    rows: list[list[Any]] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)


def format_number(v: Any, digits: int | None = None) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if digits is None or not math.isfinite(v):
            return repr(v)
        return format(v, f".{digits}g")
    return str(v)


def _cells(row, digits):
    return [format_number(v, digits) for v in row]


def render_csv(table: Table, digits: int | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow(_cells(row, digits))
    return buf.getvalue()


def render_plot_data(table: Table, digits: int | None = None) -> str:
    lines = [f"# {SCHEMA} {table.command}"]
    for key, value in table.meta.items():
        lines.append(f"# {key}: {json.dumps(value, default=str)}")
    lines.append("# " + " ".join(table.columns))
    for row in table.rows:
        lines.append(" ".join(c if c != "" else "nan" for c in _cells(row, digits)))
    return "\n".join(lines) + "\n"


def _json_value(v, digits):
    if isinstance(v, float) and digits is not None and math.isfinite(v):
        return float(format(v, f".{digits}g"))
    return v


def render_json(table: Table, digits: int | None = None) -> str:
    doc = {"schema": SCHEMA, "command": table.command}
    doc.update(table.meta)
    doc["columns"] = table.columns
    doc["rows"] = [[_json_value(v, digits) for v in row] for row in table.rows]
    return json.dumps(doc, indent=2) + "\n"


def render(table: Table, spec: OutputSpec, digits: int | None = None) -> str:
    if spec.format == "csv":
        return render_csv(table, digits)
    if spec.format == "json":
        return render_json(table, digits)
    return render_plot_data(table, digits)


def emit(table: Table, spec: OutputSpec, digits: int | None = None) -> None:
    text = render(table, spec, digits)
    if spec.path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(spec.path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _parse_cell(s: str):
    if s == "":
        return None
    if s in ("true", "false"):
        return s == "true"
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def read_csv(text: str, command: str = "") -> Table:
    """Inverse of :func:`render_csv` for undigitized output."""
    reader = csv.reader(io.StringIO(text))
    columns = next(reader)
    return Table(command, columns, [[_parse_cell(c) for c in row] for row in reader])
