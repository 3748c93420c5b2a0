"""Closed-form violation family on the line and a parametric 2-D search engine.

The 1-D family (power density x^(1/gamma) on the half-line, symmetric
intervals) violates every power-mean inequality stronger than its own class;
its masses are closed forms, so violations certify exactly.  The 2-D engine
searches documented convex-set families for negative deficits under a chosen
measure; its findings are exploratory by default and only certified after
surviving a quadrature-tolerance tightening.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .concavity import check_bm
from .errors import DomainError
from .means import power_mean
from .measures import DensityND
from .quadrature import MeasureEvaluator, QuadraturePolicy
from .report import ConcavityReport
from .sets import ConvexPolygon, dilate, mink_combine
from .util import golden_minimize, worker_count

__all__ = [
    "PowerFamilyInstance",
    "power_mass",
    "power_family_deficit",
    "power_family_search",
    "SearchFamily",
    "violation_search",
    "FAMILY_IDS",
]


# ---------------------------------------------------------------------------
# The closed-form 1-D family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PowerFamilyInstance:
    """Symmetric intervals [-a, a], [-b, b] under the power density of class s."""

    s: float
    r: float
    a: float
    b: float

    def __post_init__(self):
        if not 0.0 < self.s < 1.0:
            raise DomainError("family needs 0 < s < 1")
        if self.r <= self.s:
            raise DomainError("family needs r > s")
        if not 0.0 < self.a < self.b:
            raise DomainError("family needs 0 < a < b")


def power_mass(s: float, a: float) -> float:
    """Mass of [-a, a] (equivalently [0, a]) under the class-s power density: s a^(1/s)."""
    if not 0.0 < s < 1.0:
        raise DomainError("power_mass needs 0 < s < 1")
    if a < 0:
        raise DomainError("a must be nonnegative")
    if a == 0.0:
        return 0.0
    return s * a ** (1.0 / s)


def power_family_deficit(inst: PowerFamilyInstance, lam: float) -> float:
    """mu((1-lam)A + lam B) minus the r-mean of the masses; negative certifies."""
    if not 0.0 <= lam <= 1.0:
        raise DomainError("lambda must lie in [0, 1]")
    c = (1.0 - lam) * inst.a + lam * inst.b
    lhs = power_mass(inst.s, c)
    rhs = power_mean(power_mass(inst.s, inst.a), power_mass(inst.s, inst.b), lam, inst.r)
    return lhs - rhs


def power_family_search(s: float, r: float, b: float) -> tuple[float, float]:
    """Smallest lam=1/2 deficit over a in (0, b): grid scan plus golden refinement."""
    if not 0.0 < s < 1.0 or r <= s or b <= 0:
        raise DomainError("need 0 < s < 1, r > s, b > 0")

    def deficit(a: float) -> float:
        return power_family_deficit(PowerFamilyInstance(s, r, a, b), 0.5)

    grid = np.linspace(b * 1e-3, b * 0.999, 257)
    vals = np.array([deficit(float(a)) for a in grid])
    k = int(np.argmin(vals))
    lo = float(grid[max(k - 1, 0)])
    hi = float(grid[min(k + 1, len(grid) - 1)])
    a_star, d_star = golden_minimize(deficit, lo, hi, tol=1e-12)
    if vals[k] < d_star:
        a_star, d_star = float(grid[k]), float(vals[k])
    return a_star, d_star


# ---------------------------------------------------------------------------
# Parametric 2-D families
# ---------------------------------------------------------------------------

FAMILY_IDS = ("triangle", "halfplane", "symmetric-dilate")


@dataclass(frozen=True)
class SearchFamily:
    """A documented family of convex pairs 0 in A subset B plus a measure and target s.

    Parameters live in the unit cube; decode() maps them to a valid pair by
    construction (containment is enforced by clamping, never by rejection,
    so every sample is usable).
    """

    family_id: str
    measure: DensityND
    s: float
    seed: int = 0
    ranges: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family_id not in FAMILY_IDS:
            raise DomainError(f"unknown family {self.family_id!r}; known: {FAMILY_IDS}")

    @property
    def n_params(self) -> int:
        return {"triangle": 8, "halfplane": 7, "symmetric-dilate": 8}[self.family_id]

    def decode(self, u: np.ndarray) -> tuple[ConvexPolygon, ConvexPolygon]:
        u = np.clip(np.asarray(u, dtype=np.float64), 0.0, 1.0)
        if self.family_id == "triangle":
            return _decode_triangle(u)
        if self.family_id == "halfplane":
            return _decode_halfplane(u)
        return _decode_symmetric_dilate(u)


def _lin(u, lo, hi):
    return lo + (hi - lo) * u


def _max_feasible_shift(base: ConvexPolygon, tau: float, direction: np.ndarray) -> float:
    """Largest c with tau*B + c*dir inside B and 0 inside tau*B + c*dir."""
    def feasible(c: float) -> bool:
        t = c * direction
        # t in (1-tau) B  and  -t in tau B
        ok1 = tau >= 1.0 - 1e-12 and np.allclose(t, 0.0) or \
            (tau < 1.0 and base.contains(t / (1.0 - tau)))
        ok2 = base.contains(-t / tau)
        return bool(ok1 and ok2)

    hi = 2.0 * float(np.max(np.abs(base.vertices)))
    lo = 0.0
    if not feasible(hi * 1e-9):
        return 0.0
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _decode_triangle(u: np.ndarray) -> tuple[ConvexPolygon, ConvexPolygon]:
    q = _lin(u[:5], 0.2, 2.0)
    tau = _lin(u[5], 0.05, 1.0)
    theta = 2.0 * math.pi * u[6]
    frac = u[7]
    B = ConvexPolygon(np.array([[-q[0], -q[1]], [q[2], -q[3]], [0.0, q[4]]]))
    direction = np.array([math.cos(theta), math.sin(theta)])
    cmax = _max_feasible_shift(B, tau, direction)
    shift = 0.98 * frac * cmax * direction
    A = ConvexPolygon(tau * B.vertices + shift)
    return A, B


def _decode_halfplane(u: np.ndarray) -> tuple[ConvexPolygon, ConvexPolygon]:
    w1, w2, h1, h2 = _lin(u[0], 0.3, 2.0), _lin(u[1], 0.3, 2.0), _lin(u[2], 0.3, 2.0), _lin(u[3], 0.3, 2.0)
    theta = 2.0 * math.pi * u[4]
    frac = _lin(u[5], 0.05, 0.95)
    # u[6] skews the box corner used below only through the normal offset
    B = ConvexPolygon(np.array([[-w1, -h1], [w2, -h1], [w2, h2], [-w1, h2]]))
    nu = np.array([math.cos(theta), math.sin(theta)])
    cmax = float(np.max(B.vertices @ nu))
    c = 1e-3 + frac * (cmax - 1e-3) * max(u[6], 0.05)
    clipped = _clip_halfplane(B.vertices, nu, c)
    A = ConvexPolygon.from_points(clipped)
    return A, B


def _clip_halfplane(verts: np.ndarray, nu: np.ndarray, c: float) -> np.ndarray:
    out = []
    n = len(verts)
    for k in range(n):
        p, q = verts[k], verts[(k + 1) % n]
        dp, dq = float(p @ nu - c), float(q @ nu - c)
        if dp <= 0:
            out.append(p)
        if dp * dq < 0:
            t = dp / (dp - dq)
            out.append(p + t * (q - p))
    return np.array(out)


def _decode_symmetric_dilate(u: np.ndarray) -> tuple[ConvexPolygon, ConvexPolygon]:
    radii = _lin(u[:3], 0.4, 1.6)
    jitter = _lin(u[3:6], -0.3, 0.3)
    angles = np.array([0.0, math.pi / 3, 2 * math.pi / 3]) + jitter
    pts = np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])
    base = ConvexPolygon.from_points(np.vstack([pts, -pts]))
    alpha, beta = sorted((_lin(u[6], 0.3, 1.5), _lin(u[7], 0.3, 1.5)))
    alpha = max(alpha, 0.3)
    if beta - alpha < 1e-6:
        beta = alpha * 1.05
    return dilate(base, alpha), dilate(base, beta)


# ---------------------------------------------------------------------------
# The search engine
# ---------------------------------------------------------------------------

_SCAN_POLICY = QuadraturePolicy(abs_tol=1e-7, rel_tol=1e-6)


def violation_search(fam: SearchFamily, budget: int, *, lam: float = 0.5,
                     restart_evals: int = 400) -> ConcavityReport:
    """Coordinate descent with random restarts minimizing the lam deficit.

    Deterministic per seed: restarts own spawned generators and the reduction
    orders by (deficit, restart index).  The winner gets a full lambda scan;
    a negative deficit is only reported as a violation after surviving a 10x
    quadrature-tolerance tightening.
    """
    if budget < 1:
        raise DomainError("budget must be positive")
    ev = MeasureEvaluator(fam.measure, _SCAN_POLICY)

    def objective(u: np.ndarray) -> float:
        A, B = fam.decode(u)
        mu_a = ev.measure_polygon(A)
        mu_b = ev.measure_polygon(B)
        if mu_a * mu_b <= 0.0:
            return math.inf
        mid = ev.measure_polygon(mink_combine(A, B, lam))
        return mid - power_mean(mu_a, mu_b, lam, fam.s)

    n_restarts = max(1, min(budget // restart_evals, 64))
    per_restart = budget // n_restarts
    seeds = np.random.SeedSequence(fam.seed).spawn(n_restarts)

    def run_restart(idx: int):
        rng = np.random.default_rng(seeds[idx])
        x = rng.uniform(0.0, 1.0, fam.n_params)
        fx = objective(x)
        evals = 1
        step = 0.2
        while evals < per_restart and step > 1e-3:
            improved = False
            for k in range(fam.n_params):
                for sign in (+1.0, -1.0):
                    if evals >= per_restart:
                        break
                    cand = x.copy()
                    cand[k] = min(1.0, max(0.0, cand[k] + sign * step))
                    if cand[k] == x[k]:
                        continue
                    fc = objective(cand)
                    evals += 1
                    if fc < fx:
                        x, fx = cand, fc
                        improved = True
                        break
            if not improved:
                step *= 0.5
        return fx, idx, x, evals

    workers = worker_count()
    if workers > 1 and n_restarts > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_restart, range(n_restarts)))
    else:
        results = [run_restart(i) for i in range(n_restarts)]
    results.sort(key=lambda r: (r[0], r[1]))
    best_f, best_idx, best_u, _ = results[0]
    total_evals = sum(r[3] for r in results)

    A, B = fam.decode(best_u)
    scan = check_bm(ev, A, B, fam.s, [k / 10.0 for k in range(11)])
    certified = False
    if scan.verdict != "vacuous" and scan.worst_deficit < -scan.tolerance:
        tight = ev.tightened(10.0)
        lam_star = scan.witness["lambda"]
        mu_a = tight.measure_polygon(A)
        mu_b = tight.measure_polygon(B)
        mid = tight.measure_polygon(mink_combine(A, B, lam_star))
        d_tight = mid - power_mean(mu_a, mu_b, lam_star, fam.s)
        certified = d_tight < -tight.policy.check_tolerance(max(mid, mu_a, mu_b))

    extras = {
        "family": fam.family_id,
        "s": fam.s,
        "seed": fam.seed,
        "budget": budget,
        "evaluations": total_evals,
        "restarts": n_restarts,
        "best_restart": best_idx,
        "params": [float(v) for v in best_u],
        "A_vertices": [[float(x), float(y)] for x, y in A.vertices],
        "B_vertices": [[float(x), float(y)] for x, y in B.vertices],
        "exploratory": True,
        "certified": bool(certified),
        "search_deficit": best_f if math.isfinite(best_f) else None,
    }
    if scan.verdict == "vacuous":
        return ConcavityReport.vacuous(scan.reason or "winner has zero measure", extras=extras)
    return ConcavityReport.decide(scan.worst_deficit, scan.tolerance, scan.witness,
                                  scan.samples_checked, grids=scan.grids,
                                  extras=extras, certified=certified)
