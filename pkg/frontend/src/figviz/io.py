"""Readers for the sweep CLI's CSV/JSON artifacts, with schema validation."""

from __future__ import annotations

import csv
import json
import os

import numpy as np

from .errors import SchemaError

# columns that hold labels rather than numbers
_STRING_COLUMNS = {"class", "target"}


class Table:
    """One parsed CSV: column access by name, numeric unless label-valued.

    Empty numeric fields (the quartet columns of periodic-boundary spectrum
    rows) parse to NaN rather than failing.
    """

    def __init__(self, path: str, header: list, rows: list):
        self.path = path
        self.name = os.path.basename(path)
        self.header = tuple(header)
        self._rows = rows

    def __len__(self) -> int:
        return len(self._rows)

    def require(self, columns) -> None:
        missing = [c for c in columns if c not in self.header]
        if missing:
            raise SchemaError(
                f"{self.name}: missing column(s) {', '.join(missing)}"
            )

    def col(self, name: str) -> np.ndarray:
        if name not in self.header:
            raise SchemaError(f"{self.name}: missing column(s) {name}")
        i = self.header.index(name)
        if name in _STRING_COLUMNS:
            return np.array([r[i] for r in self._rows], dtype=object)
        out = np.empty(len(self._rows))
        for j, r in enumerate(self._rows):
            cell = r[i]
            try:
                out[j] = float(cell) if cell != "" else np.nan
            except ValueError:
                raise SchemaError(
                    f"{self.name}: column {name} holds non-numeric "
                    f"value {cell!r}"
                ) from None
        return out


def read_table(path: str) -> Table:
    if not os.path.isfile(path):
        raise SchemaError(f"input file not found: {path}")
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{os.path.basename(path)}: file has no header")
        rows = [r for r in reader if r]
    width = len(header)
    for r in rows:
        if len(r) != width:
            raise SchemaError(
                f"{os.path.basename(path)}: ragged row with {len(r)} fields, "
                f"expected {width}"
            )
    return Table(path, header, rows)


def read_meta(path: str, recipe_name: str) -> dict:
    """Parse a recipe metadata sidecar and check it names the right recipe."""
    if not os.path.isfile(path):
        raise SchemaError(f"input file not found: {path}")
    with open(path, "r", encoding="utf-8") as fh:
        try:
            meta = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(
                f"{os.path.basename(path)}: not valid JSON ({exc})"
            ) from None
    if not isinstance(meta, dict) or "recipe" not in meta:
        raise SchemaError(
            f"{os.path.basename(path)}: missing column(s) recipe"
        )
    if meta["recipe"] != recipe_name:
        raise SchemaError(
            f"{os.path.basename(path)}: produced by recipe "
            f"{meta['recipe']!r}, expected {recipe_name!r}"
        )
    return meta
