"""Topology-preservation metrics between original points and a grid placement.

For every unordered point pair and each axis there is one order constraint:
the sign of the coordinate difference must survive the mapping onto the grid.
``err_I`` is the strict violation ratio (a grid tie on the axis counts as a
violation when the original points were ordered); ``err_II`` forgives exactly
those grid ties. With n points there are n(n-1) constraints.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .sd import Placement, as_point_array


@dataclass(frozen=True)
class ConstraintReport:
    n: int
    total: int
    violations_strict: int
    violations_loose: int
    err_I: float
    err_II: float

    def to_json_dict(self) -> dict:
        return asdict(self)


def constraint_count(n: int) -> int:
    """Number of order constraints among n points: one per unordered pair per axis."""
    if n < 2:
        raise ValueError(f"need at least 2 points to have constraints, got {n}")
    return n * (n - 1)


def evaluate(points, placement: Placement | np.ndarray) -> ConstraintReport:
    """Count violated order constraints between points and their grid cells.

    Violation counts are accumulated as exact integers over both axes and
    divided once at the end, so any internal evaluation order gives a
    bit-identical report.
    """
    pts = as_point_array(points)
    cells = placement.cells if isinstance(placement, Placement) else np.asarray(placement)
    if cells.shape != pts.shape:
        raise ValueError(
            f"placement covers {cells.shape[0] if cells.ndim == 2 else '?'} indices, "
            f"points have {len(pts)}"
        )
    n = len(pts)
    total = constraint_count(n)

    strict = 0
    loose = 0
    for axis in range(2):
        s = np.sign(pts[:, axis, None] - pts[None, :, axis]).astype(np.int8)
        g = np.sign(cells[:, axis, None] - cells[None, :, axis]).astype(np.int8)
        mismatch = s != g
        # each unordered pair appears twice in the full matrix, never on the diagonal
        strict += int(np.count_nonzero(mismatch))
        loose += int(np.count_nonzero(mismatch & (g != 0)))
    assert strict % 2 == 0 and loose % 2 == 0
    strict //= 2
    loose //= 2

    return ConstraintReport(
        n=n,
        total=total,
        violations_strict=strict,
        violations_loose=loose,
        err_I=strict / total,
        err_II=loose / total,
    )
