"""Flat-file tables: CSV with ``#`` footer lines, or one JSON object per run."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any


@dataclass
class ResultTable:
    command: str
    columns: list[str]
    rows: list[dict[str, Any]]
    params: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None
    derived: dict[str, Any] = field(default_factory=dict)

    def column(self, name: str) -> list:
        return [row[name] for row in self.rows]

    # -- JSON --
    def to_json(self) -> str:
        payload = {
            "command": self.command,
            "params": self.params,
            "seed": self.seed,
            "columns": self.columns,
            "rows": self.rows,
            "derived": self.derived,
        }
        return json.dumps(payload, indent=2, allow_nan=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> ResultTable:
        d = json.loads(text)
        return cls(d["command"], d["columns"], d["rows"], d["params"], d["seed"], d["derived"])

    # -- CSV --
    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_format_cell(row.get(c)) for c in self.columns])
        buf.write(f"# command={json.dumps(self.command)}\n")
        buf.write(f"# seed={json.dumps(self.seed)}\n")
        for key, value in self.params.items():
            buf.write(f"# param.{key}={json.dumps(value)}\n")
        for key, value in self.derived.items():
            buf.write(f"# derived.{key}={json.dumps(value)}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> ResultTable:
        lines = text.splitlines()
        body = [ln for ln in lines if not ln.startswith("#")]
        footer = [ln[2:] for ln in lines if ln.startswith("# ")]
        reader = csv.reader(body)
        columns = next(reader)
        rows = [{c: _parse_cell(v) for c, v in zip(columns, rec)} for rec in reader if rec]
        table = cls("", columns, rows)
        for entry in footer:
            key, _, raw = entry.partition("=")
            value = json.loads(raw)
            if key == "command":
                table.command = value
            elif key == "seed":
                table.seed = value
            elif key.startswith("param."):
                table.params[key[6:]] = value
            elif key.startswith("derived."):
                table.derived[key[8:]] = value
        return table

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        raise ValueError(f"unknown format {fmt!r}")

    def write(self, directory: Path, fmt: str, stem: str | None = None) -> Path:
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / f"{stem or self.command}.{fmt}"
        path.write_text(self.render(fmt))
        return path


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_cell(text: str):
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text
