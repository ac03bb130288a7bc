"""Tabular experiment reports with deterministic CSV/JSON serialization.

A report is a named list of flat rows (key -> scalar) plus the parameters
and provenance (seed and tolerance snapshot) that produced it. CSV output
is written row by row so a long table interrupted mid-run is still a valid
CSV prefix. Formatting is deterministic: identical rows serialize to
identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

from .errors import PreconditionError


def _format_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass
class ExperimentReport:
    """Rows of computed scalars keyed by column name, in declared order."""

    name: str
    params: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)
    on_row: Callable[[Mapping], None] | None = None

    def add_row(self, **cells) -> dict:
        if self.rows and list(cells.keys()) != list(self.rows[0].keys()):
            raise PreconditionError(
                f"row keys {list(cells)} differ from the report schema {list(self.rows[0])}"
            )
        self.rows.append(cells)
        if self.on_row is not None:
            self.on_row(cells)
        return cells

    @property
    def columns(self) -> list[str]:
        return list(self.rows[0].keys()) if self.rows else []

    def check_finite(self) -> None:
        """Invariant: rows nonempty and every numeric cell finite."""
        if not self.rows:
            raise PreconditionError(f"report {self.name!r} has no rows")
        for i, row in enumerate(self.rows):
            for key, value in row.items():
                if isinstance(value, float) and not math.isfinite(value):
                    raise PreconditionError(f"row {i} column {key!r} is not finite")

    def write_csv(self, handle) -> None:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_format_cell(v) for v in row.values()])

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "name": self.name,
            "params": self.params,
            "provenance": self.provenance,
            "rows": self.rows,
        }
        return json.dumps(doc, indent=2, default=_format_cell) + "\n"


class CsvRowStream:
    """Streams report rows to a CSV handle as they are produced."""

    def __init__(self, handle) -> None:
        self._handle = handle
        self._writer = csv.writer(handle, lineterminator="\n")
        self._header_done = False

    def __call__(self, row: Mapping) -> None:
        if not self._header_done:
            self._writer.writerow(list(row.keys()))
            self._header_done = True
        self._writer.writerow([_format_cell(v) for v in row.values()])
        self._handle.flush()
