"""Small deterministic numeric helpers."""

import math
import os

__all__ = ["golden_minimize", "golden_maximize", "bisect_root", "worker_count", "parse_grid"]

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0  # 0.618...
_INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def golden_minimize(f, a: float, b: float, *, tol: float = 1e-10, max_iter: int = 80):
    """Golden-section minimization on [a, b]; returns (x, f(x)).

    Deterministic; also tracks the best endpoint so the result never exceeds
    the sampled minimum.
    """
    best_x, best_f = a, f(a)
    fb_ = f(b)
    if fb_ < best_f:
        best_x, best_f = b, fb_
    lo, hi = a, b
    c = lo + _INVPHI2 * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if hi - lo <= tol * (1.0 + abs(lo) + abs(hi)):
            break
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = lo + _INVPHI2 * (hi - lo)
            fc = f(c)
            x, fx = c, fc
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = f(d)
            x, fx = d, fd
        if fx < best_f:
            best_x, best_f = x, fx
    return best_x, best_f


def golden_maximize(f, a: float, b: float, *, tol: float = 1e-10, max_iter: int = 80):
    x, fx = golden_minimize(lambda t: -f(t), a, b, tol=tol, max_iter=max_iter)
    return x, -fx


def bisect_root(f, lo: float, hi: float, *, tol: float = 1e-12, max_iter: int = 200) -> float:
    """Plain bisection for a sign change of f on [lo, hi]."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise ValueError("bisect_root: no sign change on the bracket")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or hi - lo <= tol * (1.0 + abs(mid)):
            return mid
        if flo * fm < 0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def worker_count() -> int:
    """Thread-pool size, capped by the BMLAB_THREADS environment variable."""
    cap = os.environ.get("BMLAB_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return max(1, min(n, 8))


def parse_grid(spec) -> list[float]:
    """Parse a grid given as a list or an "a:b:step" string (both ends included)."""
    if isinstance(spec, (list, tuple)):
        return [float(v) for v in spec]
    if isinstance(spec, str):
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid spec {spec!r} is not of the form a:b:step")
        a, b, step = (float(p) for p in parts)
        if step <= 0 or b < a:
            raise ValueError(f"grid spec {spec!r} must have step > 0 and b >= a")
        n = int(math.floor((b - a) / step + 1e-9)) + 1
        return [a + k * step for k in range(n)]
    raise TypeError(f"cannot parse grid from {type(spec).__name__}")
