"""Exact desk-scale set representations and their Minkowski arithmetic.

Three representations cover every construction the checks need while keeping
Minkowski combinations exact: finite unions of closed intervals (with a
full-line marker for slabs), coordinate products of those, and convex
polygons in the plane.  All values are immutable; every operation is pure.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, DomainError

__all__ = [
    "IntervalUnion",
    "ProductSet",
    "ConvexPolygon",
    "DirectionUnit",
    "mink_combine_1d",
    "mink_combine_product",
    "mink_combine_polygon",
    "mink_combine",
    "mink_sum",
    "dilate",
    "is_unconditional",
    "project_axis",
    "contains_origin",
    "regular_polygon",
    "set_from_json",
    "set_to_json",
]

_MERGE_EPS = 0.0  # touching intervals merge exactly


# ---------------------------------------------------------------------------
# 1-D interval unions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntervalUnion:
    """Sorted disjoint closed intervals, or the full real line."""

    intervals: tuple[tuple[float, float], ...] = ()
    full_line: bool = False

    def __post_init__(self):
        if self.full_line and self.intervals:
            raise DomainError("full-line marker excludes finite intervals")
        object.__setattr__(self, "intervals", _normalize(self.intervals))

    @classmethod
    def interval(cls, a: float, b: float) -> "IntervalUnion":
        return cls(((float(a), float(b)),))

    @classmethod
    def point(cls, x: float) -> "IntervalUnion":
        return cls(((float(x), float(x)),))

    @classmethod
    def empty(cls) -> "IntervalUnion":
        return cls(())

    @classmethod
    def real_line(cls) -> "IntervalUnion":
        return cls((), full_line=True)

    @property
    def is_empty(self) -> bool:
        return not self.full_line and not self.intervals

    def contains(self, x: float) -> bool:
        if self.full_line:
            return True
        return any(a <= x <= b for a, b in self.intervals)

    def total_length(self) -> float:
        if self.full_line:
            return math.inf
        return math.fsum(b - a for a, b in self.intervals)

    def bounds(self) -> tuple[float, float]:
        if self.full_line:
            return (-math.inf, math.inf)
        if self.is_empty:
            raise DomainError("empty set has no bounds")
        return (self.intervals[0][0], self.intervals[-1][1])

    def symmetric_about_zero(self, tol: float = 1e-9) -> bool:
        if self.full_line:
            return True
        mirrored = sorted((-b, -a) for a, b in self.intervals)
        return all(
            abs(p[0] - q[0]) <= tol and abs(p[1] - q[1]) <= tol
            for p, q in zip(mirrored, self.intervals)
        )


def _normalize(pairs) -> tuple[tuple[float, float], ...]:
    cleaned = []
    for a, b in pairs:
        a, b = float(a), float(b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise DomainError("interval endpoints must be finite")
        if a > b:
            raise DomainError(f"interval [{a}, {b}] is inverted")
        cleaned.append((a, b))
    cleaned.sort()
    merged: list[list[float]] = []
    for a, b in cleaned:
        if merged and a <= merged[-1][1] + _MERGE_EPS:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    return tuple((a, b) for a, b in merged)


def mink_sum_1d(A: IntervalUnion, B: IntervalUnion) -> IntervalUnion:
    if A.is_empty or B.is_empty:
        raise DomainError("Minkowski sum of an empty set is undefined")
    if A.full_line or B.full_line:
        return IntervalUnion.real_line()
    sums = [(a1 + a2, b1 + b2) for a1, b1 in A.intervals for a2, b2 in B.intervals]
    return IntervalUnion(tuple(sums))


def mink_combine_1d(A: IntervalUnion, B: IntervalUnion, lam: float) -> IntervalUnion:
    """Exact (1-lam) A + lam B; endpoints return the input unchanged."""
    _check_lambda(lam)
    if A.is_empty or B.is_empty:
        raise DomainError("Minkowski combination of an empty set is undefined")
    if lam == 0.0:
        return A
    if lam == 1.0:
        return B
    return mink_sum_1d(dilate(A, 1.0 - lam), dilate(B, lam))


# ---------------------------------------------------------------------------
# Coordinate products
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProductSet:
    """Product of one IntervalUnion per coordinate."""

    factors: tuple[IntervalUnion, ...]

    def __post_init__(self):
        if not self.factors:
            raise DomainError("product set needs at least one factor")
        object.__setattr__(self, "factors", tuple(self.factors))

    @classmethod
    def box(cls, *sides: tuple[float, float]) -> "ProductSet":
        return cls(tuple(IntervalUnion.interval(a, b) for a, b in sides))

    @property
    def dimension(self) -> int:
        return len(self.factors)

    @property
    def is_empty(self) -> bool:
        return any(f.is_empty for f in self.factors)

    def contains_origin(self) -> bool:
        return all(f.contains(0.0) for f in self.factors)


def mink_combine_product(A: ProductSet, B: ProductSet, lam: float) -> ProductSet:
    if A.dimension != B.dimension:
        raise DimensionMismatchError(
            f"product sets of dimension {A.dimension} and {B.dimension}")
    return ProductSet(tuple(
        mink_combine_1d(a, b, lam) for a, b in zip(A.factors, B.factors)))


# ---------------------------------------------------------------------------
# Convex polygons
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConvexPolygon:
    """Counterclockwise strictly convex polygon (no three collinear vertices).

    A degenerate instance (the origin singleton from dilation by zero) is
    representable; it has measure zero and is rejected by operations that
    need a genuine polygon.
    """

    vertices: np.ndarray
    degenerate: bool = field(default=False, compare=False)

    def __post_init__(self):
        v = np.array(self.vertices, dtype=np.float64)
        if v.ndim != 2 or v.shape[1] != 2:
            raise DomainError("polygon vertices must be an (k, 2) array")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        if self.degenerate:
            return
        if len(v) < 3:
            raise DomainError("polygon needs at least 3 vertices")
        crosses = _edge_crosses(v)
        scale = float(np.max(np.abs(v))) + 1.0
        if np.any(crosses <= 1e-12 * scale * scale):
            raise DomainError("vertices are not in strictly convex CCW position")

    @classmethod
    def from_points(cls, points) -> "ConvexPolygon":
        """Convex hull of a point cloud, collinear points dropped."""
        pts = np.asarray(points, dtype=np.float64)
        hull = _convex_hull(pts)
        if len(hull) < 3:
            raise DomainError("points are collinear; no polygon")
        return cls(hull)

    @classmethod
    def origin_point(cls) -> "ConvexPolygon":
        return cls(np.zeros((1, 2)), degenerate=True)

    def area(self) -> float:
        if self.degenerate:
            return 0.0
        v = self.vertices
        x, y = v[:, 0], v[:, 1]
        return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

    def perimeter(self) -> float:
        if self.degenerate:
            return 0.0
        d = np.roll(self.vertices, -1, axis=0) - self.vertices
        return float(np.sum(np.hypot(d[:, 0], d[:, 1])))

    def contains(self, point, tol: float = 1e-12) -> bool:
        if self.degenerate:
            return bool(np.allclose(point, self.vertices[0], atol=tol))
        p = np.asarray(point, dtype=np.float64)
        v = self.vertices
        nxt = np.roll(v, -1, axis=0)
        cross = (nxt[:, 0] - v[:, 0]) * (p[1] - v[:, 1]) - (nxt[:, 1] - v[:, 1]) * (p[0] - v[:, 0])
        scale = float(np.max(np.abs(v))) + 1.0
        return bool(np.all(cross >= -tol * scale))

    def translated(self, dx: float, dy: float) -> "ConvexPolygon":
        return ConvexPolygon(self.vertices + np.array([dx, dy]), degenerate=self.degenerate)


def _edge_crosses(v: np.ndarray) -> np.ndarray:
    e = np.roll(v, -1, axis=0) - v
    ne = np.roll(e, -1, axis=0)
    return e[:, 0] * ne[:, 1] - e[:, 1] * ne[:, 0]


def _convex_hull(pts: np.ndarray) -> np.ndarray:
    """Monotone-chain hull, CCW, strict (collinear points dropped)."""
    pts = np.unique(pts, axis=0)
    if len(pts) <= 2:
        return pts
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]

    def half(points):
        chain = []
        for p in points:
            while len(chain) >= 2:
                o, a = chain[-2], chain[-1]
                if (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0]) <= 0:
                    chain.pop()
                else:
                    break
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(pts[::-1])
    return np.array(lower[:-1] + upper[:-1])


def _rotate_to_bottom_start(v: np.ndarray) -> np.ndarray:
    idx = np.lexsort((v[:, 0], v[:, 1]))[0]
    return np.roll(v, -idx, axis=0)


def mink_sum_polygon(A: ConvexPolygon, B: ConvexPolygon) -> ConvexPolygon:
    """Exact Minkowski sum by merging edge vectors sorted by angle.

    Ties in edge angle merge by vector addition, so the output has at most
    |A| + |B| vertices and stays strictly convex.
    """
    if A.degenerate or B.degenerate:
        if A.degenerate and B.degenerate:
            return ConvexPolygon(A.vertices + B.vertices, degenerate=True)
        poly, pt = (B, A) if A.degenerate else (A, B)
        return poly.translated(*pt.vertices[0])
    va = _rotate_to_bottom_start(A.vertices)
    vb = _rotate_to_bottom_start(B.vertices)
    ea = np.roll(va, -1, axis=0) - va
    eb = np.roll(vb, -1, axis=0) - vb
    amga = np.mod(np.arctan2(ea[:, 1], ea[:, 0]), 2.0 * math.pi)
    amgb = np.mod(np.arctan2(eb[:, 1], eb[:, 0]), 2.0 * math.pi)

    edges = []
    i = j = 0
    while i < len(ea) or j < len(eb):
        if j >= len(eb):
            edges.append(ea[i]); i += 1
        elif i >= len(ea):
            edges.append(eb[j]); j += 1
        elif abs(amga[i] - amgb[j]) <= 1e-12:
            edges.append(ea[i] + eb[j]); i += 1; j += 1
        elif amga[i] < amgb[j]:
            edges.append(ea[i]); i += 1
        else:
            edges.append(eb[j]); j += 1

    start = va[0] + vb[0]
    verts = start + np.vstack([np.zeros(2), np.cumsum(edges, axis=0)[:-1]])
    verts = _merge_collinear(verts)
    return ConvexPolygon(verts)


def _merge_collinear(v: np.ndarray) -> np.ndarray:
    """Drop vertices whose adjacent edges are numerically collinear."""
    scale = float(np.max(np.abs(v))) + 1.0
    keep = []
    n = len(v)
    for k in range(n):
        prev, cur, nxt = v[(k - 1) % n], v[k], v[(k + 1) % n]
        cross = (cur[0] - prev[0]) * (nxt[1] - prev[1]) - (cur[1] - prev[1]) * (nxt[0] - prev[0])
        if abs(cross) > 1e-12 * scale * scale:
            keep.append(k)
    return v[keep] if len(keep) >= 3 else v


def mink_combine_polygon(A: ConvexPolygon, B: ConvexPolygon, lam: float) -> ConvexPolygon:
    _check_lambda(lam)
    if lam == 0.0:
        return A
    if lam == 1.0:
        return B
    return mink_sum_polygon(dilate(A, 1.0 - lam), dilate(B, lam))


# ---------------------------------------------------------------------------
# Directions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DirectionUnit:
    """Unit vector in the plane."""

    u: tuple[float, float]

    def __post_init__(self):
        u = (float(self.u[0]), float(self.u[1]))
        if abs(math.hypot(*u) - 1.0) > 1e-12:
            raise DomainError("direction must be a unit vector (|u| = 1 within 1e-12)")
        object.__setattr__(self, "u", u)

    @classmethod
    def from_angle(cls, theta: float) -> "DirectionUnit":
        return cls((math.cos(theta), math.sin(theta)))

    @classmethod
    def e1(cls) -> "DirectionUnit":
        return cls((1.0, 0.0))

    @classmethod
    def e2(cls) -> "DirectionUnit":
        return cls((0.0, 1.0))

    @property
    def perp(self) -> tuple[float, float]:
        return (-self.u[1], self.u[0])

    def axis_index(self) -> int | None:
        """0/1 when aligned with +-e1/+-e2, else None."""
        for axis, vec in ((0, (1.0, 0.0)), (1, (0.0, 1.0))):
            if abs(abs(self.u[0] * vec[0] + self.u[1] * vec[1]) - 1.0) <= 1e-12:
                return axis
        return None


# ---------------------------------------------------------------------------
# Shared operations
# ---------------------------------------------------------------------------

def dilate(A, t: float):
    """Scale every coordinate by t >= 0; t = 0 gives the origin singleton."""
    if t < 0:
        raise DomainError("dilation factor must be nonnegative")
    if isinstance(A, IntervalUnion):
        if t == 0.0:
            return IntervalUnion.point(0.0)
        if A.full_line:
            return A
        return IntervalUnion(tuple((a * t, b * t) for a, b in A.intervals))
    if isinstance(A, ProductSet):
        return ProductSet(tuple(dilate(f, t) for f in A.factors))
    if isinstance(A, ConvexPolygon):
        if t == 0.0:
            return ConvexPolygon.origin_point()
        return ConvexPolygon(A.vertices * t, degenerate=A.degenerate)
    raise TypeError(f"cannot dilate {type(A).__name__}")


def mink_sum(A, B):
    if isinstance(A, IntervalUnion) and isinstance(B, IntervalUnion):
        return mink_sum_1d(A, B)
    if isinstance(A, ProductSet) and isinstance(B, ProductSet):
        if A.dimension != B.dimension:
            raise DimensionMismatchError("product sets of unequal dimension")
        return ProductSet(tuple(mink_sum_1d(a, b) for a, b in zip(A.factors, B.factors)))
    if isinstance(A, ConvexPolygon) and isinstance(B, ConvexPolygon):
        return mink_sum_polygon(A, B)
    raise TypeError(f"incompatible set representations {type(A).__name__}, {type(B).__name__}")


def mink_combine(A, B, lam: float):
    """(1-lam) A + lam B for any matching pair of representations."""
    if isinstance(A, IntervalUnion) and isinstance(B, IntervalUnion):
        return mink_combine_1d(A, B, lam)
    if isinstance(A, ProductSet) and isinstance(B, ProductSet):
        return mink_combine_product(A, B, lam)
    if isinstance(A, ConvexPolygon) and isinstance(B, ConvexPolygon):
        return mink_combine_polygon(A, B, lam)
    raise TypeError(f"incompatible set representations {type(A).__name__}, {type(B).__name__}")


def is_unconditional(A) -> bool:
    """Invariance of the set under coordinate sign flips."""
    if isinstance(A, IntervalUnion):
        return A.symmetric_about_zero()
    if isinstance(A, ProductSet):
        return all(f.symmetric_about_zero() for f in A.factors)
    if isinstance(A, ConvexPolygon):
        if A.degenerate:
            return bool(np.allclose(A.vertices, 0.0))
        v = A.vertices
        for flip in ((-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)):
            if not _same_vertex_set(v, v * np.array(flip), tol=1e-9):
                return False
        return True
    raise TypeError(f"cannot test unconditionality of {type(A).__name__}")


def _same_vertex_set(v: np.ndarray, w: np.ndarray, tol: float) -> bool:
    if len(v) != len(w):
        return False
    used = np.zeros(len(w), dtype=bool)
    for p in v:
        d = np.hypot(w[:, 0] - p[0], w[:, 1] - p[1])
        d[used] = math.inf
        k = int(np.argmin(d))
        if d[k] > tol:
            return False
        used[k] = True
    return True


def project_axis(P: ConvexPolygon, axis: int) -> tuple[float, float]:
    """[min, max] of the selected coordinate (axis is 1-based per convention: 1 = x, 2 = y)."""
    if axis not in (1, 2):
        raise DomainError("axis must be 1 (x) or 2 (y)")
    col = P.vertices[:, axis - 1]
    return (float(np.min(col)), float(np.max(col)))


def contains_origin(A) -> bool:
    if isinstance(A, IntervalUnion):
        return A.contains(0.0)
    if isinstance(A, ProductSet):
        return A.contains_origin()
    if isinstance(A, ConvexPolygon):
        return A.contains((0.0, 0.0))
    raise TypeError(f"cannot test origin membership of {type(A).__name__}")


def regular_polygon(k: int, radius: float = 1.0, phase: float = 0.0) -> ConvexPolygon:
    """Regular k-gon inscribed in the circle of the given radius."""
    if k < 3:
        raise DomainError("need at least 3 vertices")
    ang = phase + 2.0 * math.pi * np.arange(k) / k
    return ConvexPolygon(np.column_stack([radius * np.cos(ang), radius * np.sin(ang)]))


# ---------------------------------------------------------------------------
# Chords and panels (used by the quadrature layer)
# ---------------------------------------------------------------------------

def polygon_chord(P: ConvexPolygon, u: DirectionUnit, t: float) -> tuple[float, float] | None:
    """Parameter interval of P cut by the line {x . u = t}.

    Points on the line are t*u + r*perp(u); returns (r_lo, r_hi) or None for
    an empty section.
    """
    if P.degenerate:
        return None
    v = P.vertices
    nxt = np.roll(v, -1, axis=0)
    # outward normal of a CCW edge is the edge vector rotated clockwise
    nx, ny = nxt[:, 1] - v[:, 1], -(nxt[:, 0] - v[:, 0])
    c = nx * v[:, 0] + ny * v[:, 1]
    ux, uy = u.u
    px, py = u.perp
    a = nx * px + ny * py
    b = c - t * (nx * ux + ny * uy)
    scale = float(np.max(np.abs(v))) + 1.0
    tol = 1e-12 * scale
    lo, hi = -math.inf, math.inf
    for ak, bk in zip(a, b):
        if ak > tol:
            hi = min(hi, bk / ak)
        elif ak < -tol:
            lo = max(lo, bk / ak)
        elif bk < -tol:
            return None
    if lo > hi:
        return None
    return (lo, hi)


def polygon_panels(P: ConvexPolygon) -> list[tuple[float, float, float, float, float, float]]:
    """Vertical-strip decomposition (xl, xr, ylo_l, ylo_r, yhi_l, yhi_r).

    Within each strip the lower and upper boundaries are affine; vertical
    edges only occur on strip boundaries.
    """
    if P.degenerate:
        return []
    v = P.vertices
    nxt = np.roll(v, -1, axis=0)
    lower, upper = [], []
    for (x1, y1), (x2, y2) in zip(v, nxt):
        if x2 > x1:
            lower.append((x1, x2, y1, y2))
        elif x2 < x1:
            upper.append((x2, x1, y2, y1))
    xs = np.unique(v[:, 0])
    panels = []
    for xl, xr in zip(xs[:-1], xs[1:]):
        xm = 0.5 * (xl + xr)
        lo_piece = next(p for p in lower if p[0] <= xm <= p[1])
        hi_piece = next(p for p in upper if p[0] <= xm <= p[1])
        panels.append((
            float(xl), float(xr),
            _affine(lo_piece, xl), _affine(lo_piece, xr),
            _affine(hi_piece, xl), _affine(hi_piece, xr),
        ))
    return panels


def _affine(piece, x):
    x1, x2, y1, y2 = piece
    return float(y1 + (y2 - y1) * (x - x1) / (x2 - x1))


def _check_lambda(lam: float):
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda {lam} outside [0, 1]")


# ---------------------------------------------------------------------------
# JSON descriptors
# ---------------------------------------------------------------------------

def set_from_json(obj: dict):
    """Parse {"kind": "intervals"|"product"|"polygon"|"full-line", ...}."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise DomainError("set descriptor must be an object with a 'kind' field")
    kind = obj["kind"]
    if kind == "intervals":
        return IntervalUnion(tuple((float(a), float(b)) for a, b in obj["intervals"]))
    if kind == "full-line":
        return IntervalUnion.real_line()
    if kind == "product":
        return ProductSet(tuple(set_from_json(f) for f in obj["factors"]))
    if kind == "polygon":
        return ConvexPolygon(np.asarray(obj["vertices"], dtype=np.float64))
    raise DomainError(f"unknown set kind {kind!r}")


def set_to_json(A) -> dict:
    if isinstance(A, IntervalUnion):
        if A.full_line:
            return {"kind": "full-line"}
        return {"kind": "intervals", "intervals": [[a, b] for a, b in A.intervals]}
    if isinstance(A, ProductSet):
        return {"kind": "product", "factors": [set_to_json(f) for f in A.factors]}
    if isinstance(A, ConvexPolygon):
        return {"kind": "polygon", "vertices": [[float(x), float(y)] for x, y in A.vertices]}
    raise TypeError(f"cannot serialize {type(A).__name__}")
