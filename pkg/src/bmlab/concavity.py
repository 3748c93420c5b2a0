"""The checker core.

Every paper-shaped inequality lands here: the power-mean inequality scanner
for Minkowski combinations, power-concavity of curves (dilates, exponential
dilates, parallel volumes), the sup-convolution functionals and their
integral inequalities, and the section-matching checkers.  Hypothesis
failures yield vacuous verdicts, never passes.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, ResourceError
from .means import power_mean
from .measures import Density1D, DensityND, check_gamma_concavity, check_unimodal
from .quadrature import MeasureEvaluator
from .report import ConcavityReport, VIOLATION
from .sets import (ConvexPolygon, DirectionUnit, IntervalUnion, ProductSet,
                   contains_origin, dilate, mink_combine, mink_combine_1d,
                   project_axis)
from .util import bisect_root, golden_minimize

__all__ = [
    "SMeanSpec",
    "s_mean",
    "check_bm",
    "check_curve_power_concavity",
    "scan_dilates",
    "check_b_property",
    "check_radial_monotone",
    "PipelineReport",
    "prop_equiv_pipeline",
    "GridFunction1D",
    "GridFunction2D",
    "supconv_min",
    "check_henstock_macbeath",
    "check_prop_concave",
    "check_slab",
    "match_max_section",
    "check_bonnesen_sections",
    "supconv_gamma_2d",
    "check_dancs_uhrin",
]


# ---------------------------------------------------------------------------
# Power means on measures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SMeanSpec:
    """Exponent and weight of a two-point power mean."""

    s: float
    lam: float

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise DomainError("lambda must lie in [0, 1]")


def s_mean(a: float, b: float, spec: SMeanSpec) -> float:
    """((1-lam) a^s + lam b^s)^(1/s) with the continuity conventions."""
    return power_mean(a, b, spec.lam, spec.s)


# ---------------------------------------------------------------------------
# The inequality scanner
# ---------------------------------------------------------------------------

def check_bm(ev: MeasureEvaluator, A, B, s: float, lambda_grid, *,
             refine: bool = True) -> ConcavityReport:
    """Scan mu((1-lam)A + lam B) >= s-mean(mu A, mu B) over a lambda grid.

    Requires mu(A) mu(B) > 0 (vacuous otherwise).  After the grid scan the
    worst cell is refined by golden-section search, since deficits are
    typically smooth in lambda.
    """
    lams = [float(x) for x in lambda_grid]
    if not lams:
        raise DomainError("lambda grid must be non-empty")
    mu_a = ev.measure(A)
    mu_b = ev.measure(B)
    if mu_a * mu_b <= 0.0:
        return ConcavityReport.vacuous(
            f"mu(A) mu(B) = {mu_a * mu_b} is not positive",
            extras={"mu_A": mu_a, "mu_B": mu_b})

    def deficit(lam: float) -> tuple[float, float, float]:
        lhs = ev.measure(mink_combine(A, B, lam))
        rhs = power_mean(mu_a, mu_b, lam, s)
        return lhs - rhs, lhs, rhs

    worst = math.inf
    worst_lam = lams[0]
    worst_sides = (0.0, 0.0)
    scale = max(mu_a, mu_b)
    for lam in lams:
        d, lhs, rhs = deficit(lam)
        scale = max(scale, lhs, rhs)
        if d < worst:
            worst, worst_lam, worst_sides = d, lam, (lhs, rhs)

    if refine and len(lams) >= 2:
        order = sorted(lams)
        k = order.index(worst_lam)
        lo = order[max(k - 1, 0)]
        hi = order[min(k + 1, len(order) - 1)]
        if hi > lo:
            lam_r, d_r = golden_minimize(lambda t: deficit(t)[0], lo, hi,
                                         tol=1e-7, max_iter=40)
            if d_r < worst:
                _, lhs, rhs = deficit(lam_r)
                worst, worst_lam, worst_sides = d_r, lam_r, (lhs, rhs)
                scale = max(scale, lhs, rhs)

    tol = ev.policy.check_tolerance(scale)
    witness = {"lambda": worst_lam, "lhs": worst_sides[0], "rhs": worst_sides[1],
               "mu_A": mu_a, "mu_B": mu_b}
    return ConcavityReport.decide(worst, tol, witness, len(lams),
                                  grids={"lambda": lams}, extras={"s": s})


# ---------------------------------------------------------------------------
# Power concavity of sampled curves
# ---------------------------------------------------------------------------

def check_curve_power_concavity(ts, fs, p: float, *,
                                tolerance: float | None = None) -> ConcavityReport:
    """Three-point concavity test of F^p (log F for p = 0) on a sorted grid.

    For p < 0 the transform reverses order, so the test flips sides; for
    p = +-inf the power-mean form is used directly.  Deficits are reported in
    transformed units with negative meaning violation in every case.
    """
    ts = np.asarray(ts, dtype=np.float64)
    fs = np.asarray(fs, dtype=np.float64)
    if len(ts) < 3 or len(ts) != len(fs):
        raise DomainError("need at least 3 curve samples")
    if np.any(np.diff(ts) <= 0):
        raise DomainError("curve grid must be strictly increasing")
    if np.any(fs < 0):
        raise DomainError("curve values must be nonnegative")

    if p == 0.0 or p < 0.0:
        if np.any(fs == 0.0):
            raise DomainError(f"p={p} transform needs strictly positive curve values")

    if math.isinf(p):
        def triple_deficit(k):
            t1, t2, t3 = ts[k - 1], ts[k], ts[k + 1]
            theta = (t3 - t2) / (t3 - t1)
            return fs[k] - power_mean(fs[k - 1], fs[k + 1], 1.0 - theta, p)
        gvals = fs
    else:
        if p == 0.0:
            gvals = np.log(fs)
        else:
            gvals = fs**p

        def triple_deficit(k):
            t1, t2, t3 = ts[k - 1], ts[k], ts[k + 1]
            theta = (t3 - t2) / (t3 - t1)
            interp = theta * gvals[k - 1] + (1.0 - theta) * gvals[k + 1]
            d = gvals[k] - interp
            return d if p >= 0.0 else -d

    worst = math.inf
    witness = None
    for k in range(1, len(ts) - 1):
        d = triple_deficit(k)
        if d < worst:
            worst = d
            witness = {"t": [float(ts[k - 1]), float(ts[k]), float(ts[k + 1])],
                       "F": [float(fs[k - 1]), float(fs[k]), float(fs[k + 1])]}
    if tolerance is None:
        tolerance = 1e-12 * max(1.0, float(np.max(np.abs(gvals))))
    return ConcavityReport.decide(worst, tolerance, witness, len(ts) - 2,
                                  grids={"t": ts.tolist()}, extras={"p": p})


def scan_dilates(ev: MeasureEvaluator, A, t_grid, p: float) -> ConcavityReport:
    """Power concavity of t -> mu(t A) on a positive grid; requires 0 in A."""
    ts = np.asarray(t_grid, dtype=np.float64)
    if np.any(ts <= 0):
        raise DomainError("dilation grid must be strictly positive")
    if not contains_origin(A):
        return ConcavityReport.vacuous("0 not in A (dilate-scan hypothesis)")
    fs = np.array([ev.measure(dilate(A, float(t))) for t in ts])
    tol = _curve_tolerance(ev, fs, p)
    return check_curve_power_concavity(ts, fs, p, tolerance=tol)


def check_b_property(ev: MeasureEvaluator, A, t_grid) -> ConcavityReport:
    """Log-concavity of t -> mu(e^t A) on a grid over the real line."""
    if not contains_origin(A):
        return ConcavityReport.vacuous("0 not in A (exponential-dilate hypothesis)")
    ts = np.asarray(t_grid, dtype=np.float64)
    fs = np.array([ev.measure(dilate(A, math.exp(float(t)))) for t in ts])
    tol = _curve_tolerance(ev, fs, 0.0)
    return check_curve_power_concavity(ts, fs, 0.0, tolerance=tol)


def _curve_tolerance(ev: MeasureEvaluator, fs: np.ndarray, p: float) -> float:
    """Quadrature noise propagated through the G transform."""
    fs = fs[fs > 0] if (p <= 0.0) else fs
    if len(fs) == 0:
        return ev.policy.check_tolerance(1.0)
    fmin = float(np.min(fs))
    fmax = float(np.max(fs))
    noise = ev.policy.abs_tol + ev.policy.rel_tol * fmax
    if p == 0.0:
        deriv = 1.0 / max(fmin, 1e-300)
    elif math.isinf(p):
        deriv = 1.0
    else:
        base = fmin if p < 1.0 else fmax
        deriv = abs(p) * max(base, 1e-300) ** (p - 1.0)
    return 4.0 * noise * deriv + 1e-14


def check_radial_monotone(d, rays, t_grid) -> bool:
    """True when t -> density(t x) is non-increasing on the grid for every ray."""
    ts = np.asarray(t_grid, dtype=np.float64)
    if np.any(ts < 0):
        raise DomainError("radial grid must be nonnegative")
    ts = np.sort(ts)
    slack = 1e-12
    for x in rays:
        xv = np.atleast_1d(np.asarray(x, dtype=np.float64))
        pts = ts[:, None] * xv[None, :]
        if isinstance(d, Density1D):
            vals = np.asarray(d(pts[:, 0]), dtype=np.float64)
        else:
            vals = np.asarray(d(*(pts[:, i] for i in range(d.n))), dtype=np.float64)
        if np.any(np.diff(vals) > slack * (1.0 + np.max(vals))):
            return False
    return True


@dataclass(frozen=True)
class PipelineReport:
    """Joint record of the radial / exponential-dilate / dilate checks.

    contradiction is True when the first two pass but the dilate scan
    reports a violation: numerically impossible if tolerances are sane, so
    it is surfaced loudly rather than absorbed.
    """

    radial_monotone: bool
    b_property: ConcavityReport
    dilates: ConcavityReport
    contradiction: bool
    notes: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "radial_monotone": self.radial_monotone,
            "b_property": self.b_property.to_dict(),
            "dilates": self.dilates.to_dict(),
            "contradiction": self.contradiction,
            "notes": list(self.notes),
        }


def prop_equiv_pipeline(ev: MeasureEvaluator, A, *, rays=None,
                        b_grid=None, dilate_grid=None,
                        radial_grid=None) -> PipelineReport:
    """Radial monotonicity + exponential-dilate log-concavity => dilate concavity.

    The implication is an exact statement; a run where the premises pass and
    the conclusion fails is flagged as a numerical-contradiction incident.
    The converse is not implied, and runs where only the exponential-dilate
    check fails are annotated as such.
    """
    if not contains_origin(A):
        raise DomainError("pipeline requires 0 in A")
    n = ev.dimension
    if rays is None:
        rays = _default_rays(ev.density, A)
    if radial_grid is None:
        radial_grid = np.linspace(0.0, 2.5, 26)
        hull = _density_hull_scale(ev.density)
        if hull is not None:
            reach = max(float(np.max(np.abs(np.atleast_1d(r)))) for r in rays)
            if reach > 0:
                radial_grid = np.linspace(0.0, hull / reach, 26)
    if b_grid is None:
        b_grid = np.linspace(-2.0, 2.0, 33)
    if dilate_grid is None:
        dilate_grid = np.linspace(0.25, 3.0, 23)

    radial = check_radial_monotone(ev.density, rays, radial_grid)
    b_rep = check_b_property(ev, A, b_grid)
    d_rep = scan_dilates(ev, A, dilate_grid, 1.0 / n)

    contradiction = bool(radial and b_rep.passed and d_rep.verdict == VIOLATION)
    notes = []
    if contradiction:
        notes.append("numerical-contradiction incident: premises pass but dilate scan fails; audit tolerances")
    if d_rep.passed and b_rep.verdict == VIOLATION:
        notes.append("converse not implied: dilate concavity holds while exponential-dilate log-concavity fails")
    if not radial:
        notes.append("radial monotonicity hypothesis fails; implication not applicable")
    return PipelineReport(radial, b_rep, d_rep, contradiction, tuple(notes))


def _default_rays(d, A):
    if isinstance(A, ConvexPolygon):
        rays = [tuple(v) for v in A.vertices]
        rays += [(math.cos(k * math.pi / 8), math.sin(k * math.pi / 8)) for k in range(16)]
        return rays
    if isinstance(A, ProductSet):
        bounds = []
        for f in A.factors:
            lo, hi = f.bounds()
            bounds.append(max(abs(lo), abs(hi), 1.0))
        rays = []
        for signs in np.ndindex(*(2,) * len(bounds)):
            rays.append(tuple(b if s == 0 else -b for s, b in zip(signs, bounds)))
        return rays
    return [1.0, -1.0]


def _density_hull_scale(d) -> float | None:
    """Largest |x| safely evaluable along rays (tabulated kinds restrict it)."""
    hulls = []
    if isinstance(d, Density1D):
        factors = (d,)
    elif d.is_separable:
        factors = d.factors
    else:
        return None
    for f in factors:
        lo, hi = f.support_hull()
        if math.isfinite(lo) or math.isfinite(hi):
            if f.kind == "tabulated":
                hulls.append(min(abs(lo), abs(hi)))
    return min(hulls) if hulls else None


# ---------------------------------------------------------------------------
# Grid functions and sup-convolutions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GridFunction1D:
    """Nonnegative samples on a uniform grid."""

    xs: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=np.float64)
        vals = np.asarray(self.values, dtype=np.float64)
        if xs.ndim != 1 or xs.shape != vals.shape or len(xs) < 2:
            raise DomainError("grid function needs matching 1-D xs and values")
        steps = np.diff(xs)
        if np.any(steps <= 0) or np.max(steps) - np.min(steps) > 1e-9 * np.max(steps):
            raise DomainError("grid must be uniform and increasing")
        if np.any(vals < 0):
            raise DomainError("grid function values must be nonnegative")
        xs = xs.copy(); xs.setflags(write=False)
        vals = vals.copy(); vals.setflags(write=False)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "values", vals)

    @property
    def dx(self) -> float:
        return float(self.xs[1] - self.xs[0])

    def integral(self) -> float:
        return float(np.trapezoid(self.values, self.xs))

    def max(self) -> float:
        return float(np.max(self.values))

    def same_grid(self, other: "GridFunction1D") -> bool:
        return len(self.xs) == len(other.xs) and bool(np.allclose(self.xs, other.xs, atol=1e-12))


@dataclass(frozen=True, eq=False)
class GridFunction2D:
    """Nonnegative samples on a uniform 2-D grid; values indexed [ix, iy]."""

    xs: np.ndarray
    ys: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=np.float64)
        ys = np.asarray(self.ys, dtype=np.float64)
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.shape != (len(xs), len(ys)):
            raise DomainError("values must have shape (len(xs), len(ys))")
        for g in (xs, ys):
            steps = np.diff(g)
            if len(g) < 2 or np.any(steps <= 0) or np.max(steps) - np.min(steps) > 1e-9 * np.max(steps):
                raise DomainError("grids must be uniform and increasing")
        if np.any(vals < 0):
            raise DomainError("grid function values must be nonnegative")
        for arr, name in ((xs, "xs"), (ys, "ys"), (vals, "values")):
            arr = arr.copy(); arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def dx(self) -> float:
        return float(self.xs[1] - self.xs[0])

    @property
    def dy(self) -> float:
        return float(self.ys[1] - self.ys[0])

    def integral(self) -> float:
        return float(np.trapezoid(np.trapezoid(self.values, self.ys, axis=1), self.xs))

    def max(self) -> float:
        return float(np.max(self.values))

    def section_profile(self, axis: int) -> np.ndarray:
        """Integral over the complementary axis, one value per grid line."""
        if axis == 0:
            return np.trapezoid(self.values, self.ys, axis=1)
        if axis == 1:
            return np.trapezoid(self.values, self.xs, axis=0)
        raise DomainError("axis must be 0 or 1")

    def m_u(self, axis: int) -> float:
        return float(np.max(self.section_profile(axis)))

    def same_grid(self, other: "GridFunction2D") -> bool:
        return (self.values.shape == other.values.shape
                and bool(np.allclose(self.xs, other.xs, atol=1e-12))
                and bool(np.allclose(self.ys, other.ys, atol=1e-12)))


def supconv_min(f: GridFunction1D, g: GridFunction1D, lam: float) -> GridFunction1D:
    """Minimal h with h((1-lam)x + lam y) >= min(f(x), g(y)), binned to the grid."""
    if not f.same_grid(g):
        raise DomainError("sup-convolution needs a common grid")
    if not 0.0 <= lam <= 1.0:
        raise DomainError("lambda must lie in [0, 1]")
    h = _kernels.supconv_min_1d(f.values, g.values, float(lam))
    return GridFunction1D(f.xs, h)


def check_henstock_macbeath(f: GridFunction1D, g: GridFunction1D, lam: float) -> ConcavityReport:
    """Integral inequality for the min-pairing sup-convolution.

    Requires max(f) = max(g) within 1e-9 (vacuous otherwise).  The pass
    threshold carries the grid-discretization slack dx (max f + max g).
    """
    gap = abs(f.max() - g.max())
    if gap > 1e-9:
        return ConcavityReport.vacuous(
            f"max(f) and max(g) differ by {gap:.3e} (> 1e-9)",
            extras={"max_f": f.max(), "max_g": g.max()})
    h = supconv_min(f, g, lam)
    int_f, int_g, int_h = f.integral(), g.integral(), h.integral()
    deficit = int_h - (1.0 - lam) * int_f - lam * int_g
    slack = f.dx * (f.max() + g.max())
    witness = {"lambda": lam, "int_h": int_h, "int_f": int_f, "int_g": int_g}
    return ConcavityReport.decide(deficit, slack, witness, 1,
                                  extras={"grid_points": len(f.xs)})


# ---------------------------------------------------------------------------
# Unimodal-measure and slab checks
# ---------------------------------------------------------------------------

def check_prop_concave(ev: MeasureEvaluator, A: IntervalUnion, B: IntervalUnion,
                       lambda_grid) -> ConcavityReport:
    """Arithmetic-mean inequality for a unimodal 1-D density whose mode lies in both sets."""
    d = ev.density
    if not isinstance(d, Density1D):
        raise DomainError("check_prop_concave needs a 1-D density")
    if d.mode is None:
        return ConcavityReport.vacuous("density has no mode")
    if not (d.nondecreasing_left and d.nonincreasing_right):
        lo = min(A.bounds()[0], B.bounds()[0], d.mode) - 1.0
        hi = max(A.bounds()[1], B.bounds()[1], d.mode) + 1.0
        ok, where = check_unimodal(d, np.linspace(lo, hi, 201))
        if not ok:
            return ConcavityReport.vacuous(f"density not unimodal (violation near {where})")
    if not A.contains(d.mode) or not B.contains(d.mode):
        return ConcavityReport.vacuous(
            f"mode {d.mode} must lie in both sets", extras={"mode": d.mode})
    rep = check_bm(ev, A, B, 1.0, lambda_grid)
    rep.extras["mode"] = d.mode
    return rep


def check_slab(ev: MeasureEvaluator, A: ProductSet, B: ConvexPolygon,
               lambda_grid) -> ConcavityReport:
    """Arithmetic inequality for A = A1 x R against a planar set B.

    Uses the exact identity (1-lam)A + lam B = ((1-lam)A1 + lam proj(B)) x R
    for lam < 1, so the left side reduces to a 1-D mass times the finite
    total mass of the second factor.
    """
    d = ev.density
    if not (isinstance(d, DensityND) and d.is_separable and d.n == 2):
        raise DomainError("check_slab needs a separable 2-D product density")
    if not (isinstance(A, ProductSet) and A.dimension == 2 and A.factors[1].full_line):
        raise DomainError("A must be A1 x R (second factor full-line)")
    a1 = A.factors[0]
    d1, d2 = d.factor(0), d.factor(1)
    m2 = d2.total_mass()
    if not math.isfinite(m2):
        raise DomainError("second-factor density must have finite total mass")
    if not (d1.nondecreasing_left and d1.nonincreasing_right and d1.mode == 0.0):
        return ConcavityReport.vacuous("first-factor density must be unimodal with mode 0")
    if not a1.contains(0.0) or not B.contains((0.0, 0.0)):
        return ConcavityReport.vacuous("0 must lie in A and in B")

    proj = IntervalUnion.interval(*project_axis(B, 1))
    mu_a = ev._factor_mass(d1, a1) * m2
    mu_b = ev.measure_polygon(B)
    worst = math.inf
    witness = None
    scale = max(mu_a, mu_b)
    lams = [float(x) for x in lambda_grid]
    for lam in lams:
        if lam == 1.0:
            lhs = mu_b
        else:
            lhs = ev._factor_mass(d1, mink_combine_1d(a1, proj, lam)) * m2
        rhs = (1.0 - lam) * mu_a + lam * mu_b
        scale = max(scale, lhs, rhs)
        d_l = lhs - rhs
        if d_l < worst:
            worst = d_l
            witness = {"lambda": lam, "lhs": lhs, "rhs": rhs, "mu_A": mu_a, "mu_B": mu_b}
    tol = ev.policy.check_tolerance(scale)
    return ConcavityReport.decide(worst, tol, witness, len(lams), grids={"lambda": lams})


# ---------------------------------------------------------------------------
# Section matching (Bonnesen-type)
# ---------------------------------------------------------------------------

def match_max_section(ev: MeasureEvaluator, A: ConvexPolygon, B: ConvexPolygon,
                      u: DirectionUnit, *, rel_tol: float = 1e-7):
    """Rescale the set with the larger maximal section down to match the other.

    Downscaling is always feasible (the maximal section goes to 0 with the
    scale), so a bisection bracket exists; returns (A', B', info).
    """
    _, ma = ev.max_section(A, u)
    _, mb = ev.max_section(B, u)
    if ma <= 0.0 or mb <= 0.0:
        raise DomainError("sets must have positive maximal sections")
    if abs(ma - mb) <= rel_tol * max(ma, mb):
        return A, B, {"scaled": "none", "scale": 1.0, "target": ma}
    shrink_b = mb > ma
    target = min(ma, mb)
    big = B if shrink_b else A

    def gap(c: float) -> float:
        return ev.max_section(dilate(big, c), u)[1] - target

    lo = 0.5
    while gap(lo) > 0.0:
        lo *= 0.5
        if lo < 1e-9:
            raise DomainError("could not bracket the section-matching scale")
    c = bisect_root(gap, lo, 1.0, tol=1e-11)
    scaled = dilate(big, c)
    info = {"scaled": "B" if shrink_b else "A", "scale": c, "target": target}
    return (A, scaled, info) if shrink_b else (scaled, B, info)


def check_bonnesen_sections(ev: MeasureEvaluator, A: ConvexPolygon, B: ConvexPolygon,
                            u: DirectionUnit, lambda_grid, *,
                            verify_density: bool = True) -> ConcavityReport:
    """Arithmetic inequality for planar sets with equal maximal section measure.

    The density must be declared (-1)-concave and is spot-verified by a
    seeded sample; mismatched sections give a vacuous verdict with the
    measured gap (callers typically rescale with match_max_section first).
    """
    d = ev.density
    if not (isinstance(d, DensityND) and d.n == 2):
        raise DomainError("check_bonnesen_sections needs a 2-D density")
    if d.gamma_class is None or d.gamma_class < -1.0:
        return ConcavityReport.vacuous(
            f"density gamma class {d.gamma_class} is not >= -1")
    if verify_density:
        spot = check_gamma_concavity(d, -1.0, _spot_triples(A, B))
        if not spot.passed:
            return ConcavityReport.vacuous(
                "density failed the -1-concavity spot check",
                extras={"spot_deficit": spot.worst_deficit})
    _, ma = ev.max_section(A, u)
    _, mb = ev.max_section(B, u)
    gap = abs(ma - mb)
    if gap > 1e-6 * max(ma, mb):
        return ConcavityReport.vacuous(
            f"maximal sections differ by {gap:.3e} relative {gap / max(ma, mb):.3e}",
            extras={"m_A": ma, "m_B": mb})
    rep = check_bm(ev, A, B, 1.0, lambda_grid)
    rep.extras.update({"m_A": ma, "m_B": mb, "u": list(u.u)})
    return rep


def _spot_triples(A: ConvexPolygon, B: ConvexPolygon, n: int = 128):
    """Deterministic sample triples spanning the working box of both sets."""
    pts = np.vstack([A.vertices, B.vertices])
    lo = pts.min(axis=0) - 0.5
    hi = pts.max(axis=0) + 0.5
    rng = np.random.default_rng(1729)
    xs = rng.uniform(lo, hi, size=(n, 2))
    ys = rng.uniform(lo, hi, size=(n, 2))
    lams = rng.uniform(0.0, 1.0, size=n)
    return [(x, y, float(l)) for x, y, l in zip(xs, ys, lams)]


# ---------------------------------------------------------------------------
# 2-D sup-convolution (gamma pairing)
# ---------------------------------------------------------------------------

_MAX_SUPCONV_GRID = 64


def supconv_gamma_2d(f: GridFunction2D, g: GridFunction2D, lam: float,
                     gamma: float = -1.0) -> GridFunction2D:
    """Minimal admissible h on the common grid under the gamma-mean pairing.

    O(N^4) pairing; grids beyond 64 per axis are refused.
    """
    if not f.same_grid(g):
        raise DomainError("sup-convolution needs a common grid")
    nx, ny = f.values.shape
    if nx > _MAX_SUPCONV_GRID or ny > _MAX_SUPCONV_GRID:
        raise ResourceError(
            f"sup-convolution grid {nx}x{ny} exceeds {_MAX_SUPCONV_GRID} per axis")
    if not 0.0 <= lam <= 1.0:
        raise DomainError("lambda must lie in [0, 1]")
    if gamma < -1.0:
        raise DomainError("gamma must be at least -1 in the plane")
    h = _kernels.supconv_gamma_2d(f.values, g.values, float(lam), float(gamma))
    return GridFunction2D(f.xs, f.ys, h)


def check_dancs_uhrin(f: GridFunction2D, g: GridFunction2D, u: DirectionUnit,
                      lam: float, gamma: float = -1.0) -> ConcavityReport:
    """Integral inequality for the gamma-pairing sup-convolution.

    Requires equal maximal section integrals along an axis direction within
    1e-6 relative; the pass threshold carries the 2-D grid slack
    (dx Ly + dy Lx)(max f + max g).
    """
    axis = u.axis_index()
    if axis is None:
        raise DomainError("grid functions support only axis directions (+-e1, +-e2)")
    mf, mg = f.m_u(axis), g.m_u(axis)
    if mf <= 0 or mg <= 0:
        return ConcavityReport.vacuous("maximal sections must be positive")
    if abs(mf - mg) > 1e-6 * max(mf, mg):
        return ConcavityReport.vacuous(
            f"m_u(f)={mf:.6g} and m_u(g)={mg:.6g} differ beyond 1e-6 relative",
            extras={"m_f": mf, "m_g": mg})
    h = supconv_gamma_2d(f, g, lam, gamma)
    int_f, int_g, int_h = f.integral(), g.integral(), h.integral()
    deficit = int_h - (1.0 - lam) * int_f - lam * int_g
    lx = float(f.xs[-1] - f.xs[0])
    ly = float(f.ys[-1] - f.ys[0])
    slack = (f.dx * ly + f.dy * lx) * (f.max() + g.max())
    witness = {"lambda": lam, "int_h": int_h, "int_f": int_f, "int_g": int_g}
    return ConcavityReport.decide(deficit, slack, witness, 1,
                                  extras={"gamma": gamma, "axis": axis})
