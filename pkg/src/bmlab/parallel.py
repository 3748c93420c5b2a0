"""Generalized parallel volume curves t -> mu(A + tB) and their concavity.

The classical quadratic expansion (area + perimeter t + pi t^2) for a convex
planar set grown by a disk serves as the exact oracle; disks enter the
polygon arithmetic as inscribed regular 64-gons by default, a quantified
bias well under the 1% check tolerance.
"""

import math
from dataclasses import dataclass

import numpy as np

from .concavity import check_curve_power_concavity
from .errors import DomainError
from .quadrature import MeasureEvaluator
from .report import ConcavityReport
from .sets import (ConvexPolygon, IntervalUnion, ProductSet, dilate,
                   mink_sum)

__all__ = ["ParallelCurve", "parallel_curve", "check_parallel_concavity", "steiner_area"]


@dataclass(frozen=True, eq=False)
class ParallelCurve:
    """Sampled curve t -> mu(A + tB) with provenance identifiers."""

    ts: np.ndarray
    values: np.ndarray
    measure_id: str = ""
    a_id: str = ""
    b_id: str = ""

    def __post_init__(self):
        ts = np.asarray(self.ts, dtype=np.float64)
        vals = np.asarray(self.values, dtype=np.float64)
        if ts.ndim != 1 or ts.shape != vals.shape or len(ts) < 1:
            raise DomainError("curve needs matching 1-D ts and values")
        if np.any(ts < 0) or np.any(np.diff(ts) <= 0):
            raise DomainError("t grid must be nonnegative and strictly increasing")
        if np.any(vals < 0):
            raise DomainError("curve values must be nonnegative")
        ts = ts.copy(); ts.setflags(write=False)
        vals = vals.copy(); vals.setflags(write=False)
        object.__setattr__(self, "ts", ts)
        object.__setattr__(self, "values", vals)


def _is_convex_rep(B) -> bool:
    if isinstance(B, ConvexPolygon):
        return not B.degenerate
    if isinstance(B, IntervalUnion):
        return not B.full_line and len(B.intervals) == 1
    if isinstance(B, ProductSet):
        return all(_is_convex_rep(f) or f.full_line for f in B.factors)
    return False


def parallel_curve(ev: MeasureEvaluator, A, B, t_grid) -> ParallelCurve:
    """Evaluate mu(A + tB) on the grid using exact Minkowski sums."""
    if not _is_convex_rep(B):
        raise DomainError("B must be convex (single intervals per factor, or a polygon)")
    ts = np.asarray(t_grid, dtype=np.float64)
    values = []
    for t in ts:
        grown = A if t == 0.0 else mink_sum(A, dilate(B, float(t)))
        values.append(ev.measure(grown))
    d = ev.density
    measure_id = getattr(d, "kind", type(d).__name__)
    return ParallelCurve(ts, np.array(values), measure_id=measure_id,
                         a_id=type(A).__name__, b_id=type(B).__name__)


def check_parallel_concavity(curve: ParallelCurve, s: float) -> ConcavityReport:
    """Power concavity of the sampled parallel-volume curve."""
    rep = check_curve_power_concavity(curve.ts, curve.values, s)
    rep.extras["measure_id"] = curve.measure_id
    return rep


def steiner_area(P: ConvexPolygon, t: float) -> float:
    """area(P) + perimeter(P) t + pi t^2: the exact grown area of a convex set."""
    if t < 0:
        raise DomainError("growth radius must be nonnegative")
    if P.degenerate:
        return math.pi * t * t
    return P.area() + P.perimeter() * t + math.pi * t * t
