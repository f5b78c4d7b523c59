"""Numeric tables written as plain CSV."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CsvTable:
    header: tuple
    rows: tuple

    def __init__(self, header, rows):
        header = tuple(str(h) for h in header)
        rows = tuple(tuple(float(v) for v in row) for row in rows)
        for i, row in enumerate(rows):
            if len(row) != len(header):
                raise ValueError(f"row {i} has {len(row)} values, header has {len(header)}")
            if not all(math.isfinite(v) for v in row):
                raise ValueError(f"row {i} contains a non-finite value: {row}")
        object.__setattr__(self, "header", header)
        object.__setattr__(self, "rows", rows)

    def column(self, name):
        return np.array([row[self.header.index(name)] for row in self.rows])

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        # repr round-trips floats exactly and never uses locale separators
        writer.writerows([repr(v) for v in row] for row in self.rows)
        return buf.getvalue()

    def write(self, path):
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv())

    @classmethod
    def read(cls, path):
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            return cls(header, [[float(v) for v in row] for row in reader])
