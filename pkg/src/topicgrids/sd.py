"""Split-diffuse layout: deform a 2-D point cloud onto a uniform 2^h x 2^h grid.

The layout recursively halves the point set along alternating axes (x at even
depths, y at odd depths), always splitting by rank so both halves have exactly
the same size. The sequence of L/R choices made for a point is its allocation
string; reading its even-depth symbols as the binary digits of the column and
its odd-depth symbols as the digits of the row (most significant first, L=0,
R=1) yields the point's grid cell. Because every split is an exact halving,
the resulting cells are a bijection onto the full grid.

Splitting by rank rather than by a median *value* matters only under duplicate
coordinates: value splits can produce unequal halves there, while the rank
split (ties broken by ascending original index) always halves exactly, which
the 4^h cell budget requires. On distinct values the two coincide.

Everything here is a pure function of its inputs; no shared mutable state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np


class GridCoord(NamedTuple):
    col: int
    row: int


@dataclass(frozen=True, eq=False)
class Placement:
    """Bijection from point index to grid cell, with the per-point split paths.

    ``cells[i]`` is the (col, row) cell of input point i; ``paths[i]`` is the
    L/R allocation string (length 2h) that resolves to that cell.
    """

    h: int
    cells: np.ndarray
    paths: tuple[str, ...]

    @property
    def side(self) -> int:
        return 2 ** self.h

    def __len__(self) -> int:
        return len(self.paths)

    def __post_init__(self) -> None:
        if self.cells.shape != (len(self.paths), 2):
            raise ValueError("cells and paths disagree on the point count")


def as_point_array(points: Sequence | np.ndarray) -> np.ndarray:
    """Coerce to an (n, 2) float array, rejecting NaN/Inf coordinates."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"expected an (n, 2) point array, got shape {pts.shape}")
    if not np.isfinite(pts).all():
        raise ValueError("point coordinates must be finite")
    return pts


def infer_grid_exponent(n: int) -> int:
    """Grid exponent h with 4^h == n, or raise if n is not a power of 4."""
    if n < 1:
        raise ValueError("need at least one point")
    h, m = 0, n
    while m > 1:
        if m % 4:
            raise ValueError("size must be a power of 4")
        m //= 4
        h += 1
    return h


def rank_split(points: np.ndarray, indices: np.ndarray, axis: int) -> tuple[np.ndarray, np.ndarray]:
    """Split an even-sized index subset into equal rank-halves along one axis.

    Every coordinate in the lower half is <= every coordinate in the upper
    half on that axis; equal coordinates are ordered by ascending original
    index, so the halving is exact even under duplicates.
    """
    if axis not in (0, 1):
        raise ValueError(f"axis must be 0 or 1, got {axis}")
    idx = np.asarray(indices, dtype=np.intp)
    if idx.size < 2 or idx.size % 2:
        raise ValueError(f"rank_split needs an even subset of size >= 2, got {idx.size}")
    order = idx[np.lexsort((idx, points[idx, axis]))]
    half = idx.size // 2
    return order[:half], order[half:]


def resolve_allocation(path: str, h: int) -> GridCoord:
    """Resolve an L/R allocation string of length 2h to its grid cell."""
    if len(path) != 2 * h:
        raise ValueError(f"allocation string must have length {2 * h} for h={h}, got {len(path)}")
    col = row = 0
    for depth, sym in enumerate(path):
        if sym == "L":
            bit = 0
        elif sym == "R":
            bit = 1
        else:
            raise ValueError(f"allocation string may only contain L/R, got {sym!r}")
        if depth % 2 == 0:
            col = col << 1 | bit
        else:
            row = row << 1 | bit
    return GridCoord(col, row)


def split_diffuse(points: Sequence | np.ndarray, h: int) -> Placement:
    """Place exactly 4^h points onto the 2^h x 2^h grid.

    Depth 0 splits on x; the half labelled L occupies the lower-coordinate
    side of the remaining grid region on the split axis. Identical input
    (same order) always yields the identical placement, and only the per-axis
    *order* of coordinates matters.
    """
    if h < 0:
        raise ValueError("grid exponent h must be >= 0")
    pts = as_point_array(points)
    n = len(pts)
    if n != 4 ** h:
        raise ValueError(f"size must be a power of 4: need 4^h = {4 ** h} points for h={h}, got {n}")

    paths = [""] * n

    def recurse(indices: np.ndarray, depth: int) -> None:
        if indices.size == 1:
            return
        lower, upper = rank_split(pts, indices, depth % 2)
        for i in lower:
            paths[i] += "L"
        for i in upper:
            paths[i] += "R"
        recurse(lower, depth + 1)
        recurse(upper, depth + 1)

    recurse(np.arange(n, dtype=np.intp), 0)

    cells = np.empty((n, 2), dtype=np.int64)
    for i, path in enumerate(paths):
        cells[i] = resolve_allocation(path, h)
    return Placement(h=h, cells=cells, paths=tuple(paths))
