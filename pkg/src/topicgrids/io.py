"""CSV/JSON serialization for points, placements, and distance matrices.

Points: header ``idx,x,y``. Placements: header ``idx,col,row,path``. Distance
matrices: a first line holding n, then n dense comma-separated rows. Floats
are written with repr so round trips are exact.
"""

from __future__ import annotations

import csv
import io as _io
from pathlib import Path

import numpy as np

from .sd import Placement, as_point_array


def write_points_csv(points, path_or_buf) -> None:
    pts = as_point_array(points)
    with _open_w(path_or_buf) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["idx", "x", "y"])
        for i, (x, y) in enumerate(pts):
            writer.writerow([i, repr(float(x)), repr(float(y))])


def read_points_csv(path_or_buf) -> np.ndarray:
    with _open_r(path_or_buf) as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [c.strip() for c in header] != ["idx", "x", "y"]:
            raise ValueError("points CSV must start with header: idx,x,y")
        rows = [(int(r[0]), float(r[1]), float(r[2])) for r in reader if r]
    rows.sort(key=lambda r: r[0])
    if [r[0] for r in rows] != list(range(len(rows))):
        raise ValueError("points CSV must index points contiguously from 0")
    return as_point_array([(x, y) for _, x, y in rows])


def write_placement_csv(placement: Placement, path_or_buf) -> None:
    with _open_w(path_or_buf) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["idx", "col", "row", "path"])
        for i, path in enumerate(placement.paths):
            col, row = (int(v) for v in placement.cells[i])
            writer.writerow([i, col, row, path])


def read_placement_csv(path_or_buf) -> Placement:
    with _open_r(path_or_buf) as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [c.strip() for c in header] != ["idx", "col", "row", "path"]:
            raise ValueError("placement CSV must start with header: idx,col,row,path")
        rows = [(int(r[0]), int(r[1]), int(r[2]), r[3]) for r in reader if r]
    rows.sort(key=lambda r: r[0])
    if [r[0] for r in rows] != list(range(len(rows))):
        raise ValueError("placement CSV must index points contiguously from 0")
    paths = tuple(r[3] for r in rows)
    if not paths:
        raise ValueError("placement CSV has no rows")
    h = len(paths[0]) // 2
    cells = np.array([[r[1], r[2]] for r in rows], dtype=np.int64)
    return Placement(h=h, cells=cells, paths=paths)


def write_distance_csv(d, path_or_buf) -> None:
    d = np.asarray(d, dtype=float)
    with _open_w(path_or_buf) as fh:
        fh.write(f"{len(d)}\n")
        for row in d:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def read_distance_csv(path_or_buf) -> np.ndarray:
    with _open_r(path_or_buf) as fh:
        first = fh.readline().strip()
        n = int(first)
        rows = [[float(v) for v in fh.readline().split(",")] for _ in range(n)]
    d = np.asarray(rows, dtype=float)
    if d.shape != (n, n):
        raise ValueError(f"distance CSV promised {n} rows of {n} values")
    return d


class _open_w:
    def __init__(self, path_or_buf):
        self.target = path_or_buf
        self.fh = None

    def __enter__(self):
        if isinstance(self.target, (str, Path)):
            self.fh = open(self.target, "w", encoding="utf-8", newline="")
            return self.fh
        return self.target

    def __exit__(self, *exc):
        if self.fh is not None:
            self.fh.close()
        return False


class _open_r:
    def __init__(self, path_or_buf):
        self.target = path_or_buf
        self.fh = None

    def __enter__(self):
        if isinstance(self.target, (str, Path)):
            self.fh = open(self.target, encoding="utf-8", newline="")
            return self.fh
        if isinstance(self.target, str):
            return _io.StringIO(self.target)
        return self.target

    def __exit__(self, *exc):
        if self.fh is not None:
            self.fh.close()
        return False
