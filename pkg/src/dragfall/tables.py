"""Deterministic CSV/JSON table output."""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

FLOAT_FMT = ".17g"


def fmt(value) -> str:
    """Render one cell; floats use 17 significant digits."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value + 0.0, FLOAT_FMT)     # no "-0"
    return str(value)


def _json_cell(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


@dataclass
class Table:
    """Named columns plus rows; ``meta`` is carried into JSON output only."""

    name: str
    columns: list
    rows: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} cells, table has {len(self.columns)} columns")
        self.rows.append(list(values))

    def column(self, name):
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.columns) + "\n")
        for r in self.rows:
            buf.write(",".join(fmt(v) for v in r) + "\n")
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "table": self.name,
            "columns": list(self.columns),
            "rows": [[_json_cell(v) for v in r] for r in self.rows],
            "meta": self.meta,
        }
        return json.dumps(doc, indent=2, sort_keys=False, allow_nan=False) + "\n"

    def write(self, out_dir: Path, fmt_name: str) -> Path:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        if fmt_name == "csv":
            path = out_dir / f"{self.name}.csv"
            text = self.to_csv()
        elif fmt_name == "json":
            path = out_dir / f"{self.name}.json"
            text = self.to_json()
        else:
            raise ValueError(f"unknown format {fmt_name!r}")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        return path


def read_csv(path) -> tuple[list, list]:
    """Parse a table written by :meth:`Table.to_csv` back into floats."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    header = lines[0].split(",")

    def cell(s):
        if s in ("true", "false"):
            return s == "true"
        return float(s)

    return header, [[cell(c) for c in ln.split(",")] for ln in lines[1:]]
