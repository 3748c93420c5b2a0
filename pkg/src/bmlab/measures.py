"""Density catalog with verifiable structural hypotheses.

The catalog is a closed enum of analytic kinds plus a tabulated escape hatch;
each density carries a declared power-concavity class and unimodality
metadata so the checkers can verify hypotheses instead of assuming them.
Everything evaluates vectorized and is immutable after construction.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, SubConvexOnlyError
from .means import power_mean
from .report import ConcavityReport

__all__ = [
    "Density1D",
    "DensityND",
    "GammaClass",
    "eval_density",
    "borell_gamma_to_s",
    "check_unimodal",
    "check_gamma_concavity",
    "density_from_json",
    "density_to_json",
    "CUSTOM_2D_REGISTRY",
]

_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True, eq=False)
class GammaClass:
    """Declared power-concavity class of a density; larger gamma is stronger."""

    gamma: float  # extended real; math.inf / -math.inf allowed

    def implies(self, other: "GammaClass") -> bool:
        return other.gamma <= self.gamma


# ---------------------------------------------------------------------------
# One-dimensional densities
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Density1D:
    """Nonnegative density on the line with monotonicity/mode metadata."""

    kind: str
    params: tuple[float, ...] = ()
    grid: np.ndarray | None = None
    values: np.ndarray | None = None
    mode: float | None = None
    nondecreasing_left: bool = False
    nonincreasing_right: bool = False
    normalize: bool = False
    gamma_class: float | None = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def gaussian(cls, sigma: float = 1.0) -> "Density1D":
        if sigma <= 0:
            raise DomainError("sigma must be positive")
        return cls("gaussian", (float(sigma),), mode=0.0,
                   nondecreasing_left=True, nonincreasing_right=True,
                   normalize=True, gamma_class=0.0)

    @classmethod
    def two_sided_exponential(cls, rate: float = 1.0, normalize: bool = False) -> "Density1D":
        """exp(-rate |x|), matching the display convention; normalize adds rate/2."""
        if rate <= 0:
            raise DomainError("rate must be positive")
        return cls("two-sided-exponential", (float(rate),), mode=0.0,
                   nondecreasing_left=True, nonincreasing_right=True,
                   normalize=bool(normalize), gamma_class=0.0)

    @classmethod
    def power_plus(cls, gamma: float) -> "Density1D":
        """x^(1/gamma) on x >= 0; increasing, so no mode."""
        if gamma <= 0:
            raise DomainError("gamma must be positive")
        return cls("power-plus", (float(gamma),), gamma_class=float(gamma))

    @classmethod
    def uniform(cls, lo: float, hi: float) -> "Density1D":
        if not lo < hi:
            raise DomainError("uniform interval must have lo < hi")
        # canonical maximizer: the plateau point closest to the origin
        mode = min(max(0.0, lo), hi)
        return cls("uniform", (float(lo), float(hi)), mode=mode,
                   nondecreasing_left=True, nonincreasing_right=True,
                   gamma_class=math.inf)

    @classmethod
    def tabulated(cls, grid, values, gamma_class: float | None = None) -> "Density1D":
        g = np.asarray(grid, dtype=np.float64)
        v = np.asarray(values, dtype=np.float64)
        if g.ndim != 1 or g.shape != v.shape or len(g) < 2:
            raise DomainError("tabulated density needs matching 1-D grid and values, length >= 2")
        if np.any(np.diff(g) <= 0):
            raise DomainError("tabulated grid must be strictly increasing")
        if np.any(v < 0):
            raise DomainError("tabulated values must be nonnegative")
        g = g.copy(); g.setflags(write=False)
        v = v.copy(); v.setflags(write=False)
        k = int(np.argmax(v))
        mode = float(g[k])
        left_ok = bool(np.all(np.diff(v[: k + 1]) >= -1e-12))
        right_ok = bool(np.all(np.diff(v[k:]) <= 1e-12))
        return cls("tabulated", (), grid=g, values=v, mode=mode,
                   nondecreasing_left=left_ok, nonincreasing_right=right_ok,
                   gamma_class=gamma_class)

    # -- evaluation ----------------------------------------------------------

    def __call__(self, x):
        """Vectorized pointwise value; tabulated queries must stay in the grid hull."""
        x = np.asarray(x, dtype=np.float64)
        if self.kind == "gaussian":
            s = self.params[0]
            out = np.exp(-x * x / (2.0 * s * s)) / (s * _SQRT_TWO_PI)
        elif self.kind == "two-sided-exponential":
            rate = self.params[0]
            pref = 0.5 * rate if self.normalize else 1.0
            out = pref * np.exp(-rate * np.abs(x))
        elif self.kind == "power-plus":
            e = 1.0 / self.params[0]
            out = np.where(x > 0.0, np.power(np.maximum(x, 0.0), e), 0.0)
        elif self.kind == "uniform":
            lo, hi = self.params
            out = ((x >= lo) & (x <= hi)).astype(np.float64)
        elif self.kind == "tabulated":
            if np.any(x < self.grid[0]) or np.any(x > self.grid[-1]):
                raise DomainError("tabulated density queried outside its grid hull")
            out = np.interp(x, self.grid, self.values)
        else:
            raise DomainError(f"unknown density kind {self.kind!r}")
        return float(out) if out.ndim == 0 else out

    def breakpoints(self) -> tuple[float, ...]:
        """Locations where the density is not smooth; quadrature splits there."""
        if self.kind == "two-sided-exponential" or self.kind == "power-plus":
            return (0.0,)
        if self.kind == "uniform":
            return self.params
        if self.kind == "tabulated":
            return tuple(float(t) for t in self.grid)
        return ()

    def total_mass(self) -> float:
        if self.kind == "gaussian":
            return 1.0
        if self.kind == "two-sided-exponential":
            return 1.0 if self.normalize else 2.0 / self.params[0]
        if self.kind == "uniform":
            return self.params[1] - self.params[0]
        if self.kind == "power-plus":
            return math.inf
        if self.kind == "tabulated":
            return float(np.trapezoid(self.values, self.grid))
        raise DomainError(f"unknown density kind {self.kind!r}")

    def support_hull(self) -> tuple[float, float]:
        """Interval outside of which the density is zero (or undefined, for tabulated)."""
        if self.kind == "tabulated":
            return (float(self.grid[0]), float(self.grid[-1]))
        if self.kind == "uniform":
            return self.params
        return (-math.inf, math.inf)


# ---------------------------------------------------------------------------
# n-dimensional densities
# ---------------------------------------------------------------------------

def _rq(x, y):
    return 1.0 / (1.0 + np.asarray(x) ** 2 + np.asarray(y) ** 2)


def _const1(x, y):
    return np.ones(np.broadcast_shapes(np.shape(x), np.shape(y)), dtype=np.float64)


#: Named custom 2-D densities addressable from JSON descriptors.
CUSTOM_2D_REGISTRY: dict[str, tuple] = {
    "reciprocal-quadratic": (_rq, -1.0),
    "constant": (_const1, math.inf),
}


@dataclass(frozen=True, eq=False)
class DensityND:
    """Product densities, the two standard isotropic examples, or a custom 2-D handle."""

    kind: str
    n: int
    factors: tuple[Density1D, ...] | None = None
    fn: object | None = field(default=None, repr=False)
    name: str | None = None
    normalize: bool = False
    gamma_class: float | None = None

    @classmethod
    def product(cls, factors) -> "DensityND":
        factors = tuple(factors)
        if not factors:
            raise DomainError("product density needs at least one factor")
        gammas = [f.gamma_class for f in factors]
        gamma = None if any(g is None for g in gammas) else min(gammas)
        return cls("product", len(factors), factors=factors, gamma_class=gamma)

    @classmethod
    def gaussian_standard(cls, n: int) -> "DensityND":
        if n < 1:
            raise DomainError("dimension must be >= 1")
        return cls("gaussian-standard", n,
                   factors=tuple(Density1D.gaussian(1.0) for _ in range(n)),
                   normalize=True, gamma_class=0.0)

    @classmethod
    def exponential_product(cls, n: int, normalize: bool = False) -> "DensityND":
        if n < 1:
            raise DomainError("dimension must be >= 1")
        return cls("exponential-product", n,
                   factors=tuple(Density1D.two_sided_exponential(1.0, normalize) for _ in range(n)),
                   normalize=bool(normalize), gamma_class=0.0)

    @classmethod
    def custom_2d(cls, fn, gamma_class: float, name: str | None = None) -> "DensityND":
        return cls("custom-2d", 2, fn=fn, name=name, gamma_class=gamma_class)

    @classmethod
    def from_registry(cls, name: str) -> "DensityND":
        try:
            fn, gamma = CUSTOM_2D_REGISTRY[name]
        except KeyError:
            raise DomainError(f"unknown custom-2d density {name!r}") from None
        return cls.custom_2d(fn, gamma, name=name)

    @property
    def is_separable(self) -> bool:
        return self.factors is not None

    def factor(self, i: int) -> Density1D:
        if self.factors is None:
            raise DomainError(f"{self.kind} density has no coordinate factors")
        return self.factors[i]

    def __call__(self, *coords):
        if len(coords) != self.n:
            raise DomainError(f"density expects {self.n} coordinate arrays, got {len(coords)}")
        if self.kind == "custom-2d":
            out = np.asarray(self.fn(coords[0], coords[1]), dtype=np.float64)
            return float(out) if out.ndim == 0 else out
        out = self.factors[0](coords[0])
        for f, c in zip(self.factors[1:], coords[1:]):
            out = out * f(c)
        return out


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def eval_density(d, x):
    """Pointwise value of a 1-D or n-D density at a single point."""
    if isinstance(d, Density1D):
        return float(d(float(x)))
    if isinstance(d, DensityND):
        pt = np.atleast_1d(np.asarray(x, dtype=np.float64))
        if pt.shape != (d.n,):
            raise DomainError(f"point of dimension {pt.shape} for density of dimension {d.n}")
        return float(d(*pt))
    raise TypeError(f"not a density: {type(d).__name__}")


def borell_gamma_to_s(gamma: float, n: int) -> float:
    """Map a density concavity class gamma to the measure class s = gamma/(1+n*gamma).

    Endpoints: gamma=+inf -> 1/n, gamma=-1/n -> -inf, gamma=0 -> 0.
    gamma < -1/n has no power-concavity class for the measure.
    """
    if n < 1:
        raise DomainError("dimension must be a positive integer")
    if gamma == math.inf:
        return 1.0 / n
    if gamma < -1.0 / n - 1e-15:
        raise SubConvexOnlyError(
            f"gamma={gamma} < -1/{n}: sub-convex only, no s-concavity class")
    denom = 1.0 + n * gamma
    if denom <= 0.0:
        return -math.inf
    return gamma / denom


def check_unimodal(d: Density1D, grid) -> tuple[bool, float | None]:
    """Grid-scan the non-decreasing/non-increasing split at the mode.

    Returns (ok, first_violation_location). A density without a mode fails
    at its first increasing step (there is nothing to be unimodal about).
    """
    grid = np.asarray(grid, dtype=np.float64)
    if len(grid) < 3:
        raise DomainError("unimodality scan needs at least 3 grid points")
    vals = np.asarray(d(grid), dtype=np.float64)
    slack = 1e-12
    if d.mode is None:
        rising = np.nonzero(np.diff(vals) > slack)[0]
        where = float(grid[rising[0] + 1]) if len(rising) else float(grid[0])
        return (False, where)
    left = grid <= d.mode
    dv = np.diff(vals)
    for k, ok in enumerate(dv):
        if left[k + 1]:  # still climbing toward the mode
            if ok < -slack:
                return (False, float(grid[k + 1]))
        else:
            if ok > slack:
                return (False, float(grid[k + 1]))
    return (True, None)


def check_gamma_concavity(d, gamma: float, samples) -> ConcavityReport:
    """Sampled three-point test of f((1-lam)x + lam y) >= gamma-mean.

    samples is an iterable of (x, y, lam) triples; pairs with f(x) f(y) = 0
    are skipped per the definition. Slack is 1e-9 relative to the larger side.
    """
    worst = math.inf
    witness = None
    checked = 0
    scale = 0.0
    for x, y, lam in samples:
        if isinstance(d, Density1D):
            fx, fy = float(d(x)), float(d(y))
            mid = (1.0 - lam) * x + lam * y
            fm = float(d(mid))
        else:
            xv = np.asarray(x, dtype=np.float64)
            yv = np.asarray(y, dtype=np.float64)
            fx, fy = float(d(*xv)), float(d(*yv))
            mid = (1.0 - lam) * xv + lam * yv
            fm = float(d(*mid))
        if fx * fy <= 0.0:
            continue
        target = power_mean(fx, fy, lam, gamma)
        deficit = fm - target
        checked += 1
        scale = max(scale, fm, target)
        if deficit < worst:
            worst = deficit
            witness = {"x": _as_json(x), "y": _as_json(y), "lambda": float(lam),
                       "f_mid": fm, "gamma_mean": target}
    if checked == 0:
        return ConcavityReport.vacuous("no sample triple with f(x) f(y) > 0")
    tol = 1e-9 * max(scale, 1e-300)
    return ConcavityReport.decide(worst, tol, witness, checked,
                                  extras={"gamma": gamma})


def _as_json(x):
    if np.isscalar(x):
        return float(x)
    return [float(v) for v in np.atleast_1d(x)]


# ---------------------------------------------------------------------------
# JSON descriptors
# ---------------------------------------------------------------------------

def density_from_json(obj: dict):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise DomainError("density descriptor must be an object with a 'kind' field")
    kind = obj["kind"]
    if kind == "gaussian":
        return Density1D.gaussian(obj.get("sigma", 1.0))
    if kind == "two-sided-exponential":
        return Density1D.two_sided_exponential(obj.get("rate", 1.0), obj.get("normalize", False))
    if kind == "power-plus":
        return Density1D.power_plus(obj["gamma"])
    if kind == "uniform":
        lo, hi = obj["interval"]
        return Density1D.uniform(lo, hi)
    if kind == "tabulated":
        return Density1D.tabulated(obj["grid"], obj["values"], obj.get("gamma_class"))
    if kind == "product":
        return DensityND.product(tuple(density_from_json(f) for f in obj["factors"]))
    if kind == "gaussian-standard":
        return DensityND.gaussian_standard(int(obj["n"]))
    if kind == "exponential-product":
        return DensityND.exponential_product(int(obj["n"]), obj.get("normalize", False))
    if kind == "custom-2d":
        return DensityND.from_registry(obj["name"])
    raise DomainError(f"unknown density kind {kind!r}")


def density_to_json(d) -> dict:
    if isinstance(d, Density1D):
        if d.kind == "gaussian":
            return {"kind": "gaussian", "sigma": d.params[0]}
        if d.kind == "two-sided-exponential":
            return {"kind": "two-sided-exponential", "rate": d.params[0], "normalize": d.normalize}
        if d.kind == "power-plus":
            return {"kind": "power-plus", "gamma": d.params[0]}
        if d.kind == "uniform":
            return {"kind": "uniform", "interval": list(d.params)}
        if d.kind == "tabulated":
            out = {"kind": "tabulated", "grid": d.grid.tolist(), "values": d.values.tolist()}
            if d.gamma_class is not None:
                out["gamma_class"] = d.gamma_class
            return out
    if isinstance(d, DensityND):
        if d.kind == "product":
            return {"kind": "product", "factors": [density_to_json(f) for f in d.factors]}
        if d.kind == "gaussian-standard":
            return {"kind": "gaussian-standard", "n": d.n}
        if d.kind == "exponential-product":
            return {"kind": "exponential-product", "n": d.n, "normalize": d.normalize}
        if d.kind == "custom-2d":
            if d.name is None:
                raise DomainError("custom-2d densities serialize only through the registry")
            return {"kind": "custom-2d", "name": d.name}
    raise TypeError(f"cannot serialize {type(d).__name__}")
