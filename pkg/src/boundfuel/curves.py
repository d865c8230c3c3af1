"""Tabular curve data and its byte-stable CSV form."""

from __future__ import annotations

import csv
import dataclasses
import io
import math
import os
import tempfile
from pathlib import Path
from typing import Mapping

import numpy as np

__all__ = ["CurveOutput", "format_float", "atomic_write"]


def format_float(x: float) -> str:
    """12 significant digits; ``inf``/``-inf``/``nan`` sentinels; no negative zero."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        return "0"
    return format(x, ".12g")


def atomic_write(path: str | os.PathLike, text: str) -> None:
    """Write via a temp file in the target directory and rename into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclasses.dataclass
class CurveOutput:
    """A swept parameter and named columns evaluated on it."""

    param: str
    grid: np.ndarray
    columns: dict[str, np.ndarray]
    metadata: dict = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        cols = {}
        for name, values in self.columns.items():
            v = np.asarray(values, dtype=float)
            if v.shape != self.grid.shape:
                raise ValueError(f"column {name!r} has shape {v.shape}, grid has {self.grid.shape}")
            cols[name] = v
        self.columns = cols

    def __getitem__(self, name: str) -> np.ndarray:
        if name == self.param:
            return self.grid
        return self.columns[name]

    @property
    def names(self) -> list[str]:
        return [self.param, *self.columns]

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.names)
        arrays = [self.grid, *self.columns.values()]
        for row in zip(*arrays):
            w.writerow([format_float(x) for x in row])
        return buf.getvalue()

    def to_csv(self, path: str | os.PathLike) -> None:
        atomic_write(path, self.to_csv_text())

    @classmethod
    def from_csv(cls, path: str | os.PathLike, metadata: Mapping | None = None) -> "CurveOutput":
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        if not rows:
            raise ValueError(f"{path}: empty CSV (header row is mandatory)")
        header, body = rows[0], rows[1:]
        data = np.array([[float(x) for x in r] for r in body], dtype=float).reshape(len(body), len(header))
        cols = {name: data[:, k] for k, name in enumerate(header[1:], start=1)}
        return cls(header[0], data[:, 0], cols, dict(metadata or {}))
