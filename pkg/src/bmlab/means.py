"""Weighted power means with the continuity conventions used throughout.

The two-point mean M_p(a, b; lam) = ((1-lam) a^p + lam b^p)^(1/p) is the
primitive behind both the measure-level and the density-level concavity
checks.  Conventions at the boundary exponents:

  p = 0      geometric mean a^(1-lam) b^lam
  p = -inf   min(a, b)
  p = +inf   max(a, b)
  a*b = 0 and p <= 0   ->  0

lam = 0 and lam = 1 return a and b exactly (no pow round-trip).
"""

import math

import numpy as np

__all__ = ["power_mean", "power_mean_arrays"]


def power_mean(a: float, b: float, lam: float, p: float) -> float:
    """Weighted p-mean of two nonnegative scalars."""
    if a < 0 or b < 0:
        raise ValueError("power_mean requires nonnegative arguments")
    if not 0.0 <= lam <= 1.0:
        raise ValueError("weight lam must lie in [0, 1]")
    if lam == 0.0:
        return a
    if lam == 1.0:
        return b
    if p == math.inf:
        return max(a, b)
    if p == -math.inf:
        return min(a, b)
    if a == 0.0 or b == 0.0:
        if p <= 0.0:
            return 0.0
        # p > 0: the zero argument simply drops out of the sum
        return ((1.0 - lam) * a**p + lam * b**p) ** (1.0 / p)
    if p == 0.0:
        return a ** (1.0 - lam) * b**lam
    # guard overflow for very negative p on disparate scales: work in logs
    if abs(p) > 64.0:
        la, lb = math.log(a), math.log(b)
        m = max(p * la, p * lb)
        return math.exp((m + math.log((1.0 - lam) * math.exp(p * la - m) + lam * math.exp(p * lb - m))) / p)
    return ((1.0 - lam) * a**p + lam * b**p) ** (1.0 / p)


def power_mean_arrays(a: np.ndarray, b: np.ndarray, lam: float, p: float) -> np.ndarray:
    """Vectorized power_mean on broadcastable nonnegative arrays."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if lam == 0.0:
        return np.broadcast_to(a, np.broadcast_shapes(a.shape, b.shape)).copy()
    if lam == 1.0:
        return np.broadcast_to(b, np.broadcast_shapes(a.shape, b.shape)).copy()
    if p == math.inf:
        return np.maximum(a, b)
    if p == -math.inf:
        return np.minimum(a, b)
    zero = (a == 0.0) | (b == 0.0)
    if p == 0.0:
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.exp((1.0 - lam) * np.log(np.where(a > 0, a, 1.0)) + lam * np.log(np.where(b > 0, b, 1.0)))
        return np.where(zero, 0.0, out)
    with np.errstate(invalid="ignore"):
        out = ((1.0 - lam) * a**p + lam * b**p) ** (1.0 / p)
    if p <= 0.0:
        return np.where(zero, 0.0, out)
    # p > 0 with one zero argument: recompute from the surviving term only
    safe = ((1.0 - lam) * np.where(a > 0, a, 0.0) ** p + lam * np.where(b > 0, b, 0.0) ** p) ** (1.0 / p)
    return np.where(zero, safe, out)
