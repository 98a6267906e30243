"""Readers for the simulator's CSV outputs.

The files carry `#`-prefixed metadata lines (`# key = value`), one header
row, and comma-separated data rows.  Everything here is schema checking
and parsing; no dynamics are ever recomputed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class SchemaError(ValueError):
    """Input CSV violates the expected schema."""


@dataclass
class SweepAxis:
    param: str
    start: float
    stop: float
    points: int


@dataclass
class CsvDoc:
    path: str
    meta: dict
    header: list
    rows: list

    @property
    def n_rows(self) -> int:
        return len(self.rows)


def read_csv(path: str) -> CsvDoc:
    meta = {}
    header = None
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    meta[key.strip()] = value.strip()
                continue
            if not line:
                continue
            if header is None:
                header = line.split(",")
            else:
                rows.append(line.split(","))
    if header is None:
        raise SchemaError(f"{path}: no header row found")
    width = len(header)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise SchemaError(
                f"{path}: data row {i} has {len(row)} fields, expected {width}"
            )
    return CsvDoc(path=path, meta=meta, header=header, rows=rows)


def column(doc: CsvDoc, name: str) -> np.ndarray:
    """One numeric column by header name."""
    try:
        idx = doc.header.index(name)
    except ValueError:
        raise SchemaError(
            f"{doc.path}: column {name!r} not found (have {', '.join(doc.header)})"
        ) from None
    try:
        return np.array([float(row[idx]) for row in doc.rows])
    except ValueError:
        raise SchemaError(f"{doc.path}: column {name!r} has non-numeric values") from None


def axis_spec(doc: CsvDoc, k: int) -> SweepAxis | None:
    """The k-th sweep axis recorded in the metadata, if any."""
    raw = doc.meta.get(f"axis{k}")
    if raw is None:
        return None
    parts = raw.split(":")
    if len(parts) != 4:
        raise SchemaError(f"{doc.path}: malformed axis{k} metadata {raw!r}")
    try:
        return SweepAxis(parts[0], float(parts[1]), float(parts[2]), int(parts[3]))
    except ValueError:
        raise SchemaError(f"{doc.path}: malformed axis{k} metadata {raw!r}") from None


def require_rows(doc: CsvDoc) -> None:
    if not doc.rows:
        raise SchemaError(f"{doc.path}: 0 data rows")
