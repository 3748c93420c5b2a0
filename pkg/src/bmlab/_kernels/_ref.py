"""Pure-numpy reference implementations of the hot kernels.

Semantics match bmlab._kernels._fast exactly (same subdivision rule, same
binning); this module is the fallback selected at import when the compiled
extension is unavailable, and the baseline the benchmark compares against.
"""

import math

import numpy as np

from ..errors import ConvergenceError
from ..means import power_mean_arrays

BACKEND_NAME = "numpy"

_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)

# density kind codes shared with the compiled kernels
KIND_GAUSSIAN = 0
KIND_EXP2 = 1
KIND_POWER_PLUS = 2
KIND_UNIFORM = 3


def eval_catalog(kind: int, p0: float, p1: float, x):
    x = np.asarray(x, dtype=np.float64)
    if kind == KIND_GAUSSIAN:
        return np.exp(-x * x / (2.0 * p0 * p0)) / (p0 * _SQRT_TWO_PI)
    if kind == KIND_EXP2:
        return p1 * np.exp(-p0 * np.abs(x))
    if kind == KIND_POWER_PLUS:
        return np.where(x > 0.0, np.power(np.maximum(x, 0.0), p0), 0.0)
    if kind == KIND_UNIFORM:
        return ((x >= p0) & (x <= p1)).astype(np.float64)
    raise ValueError(f"unknown kind code {kind}")


def _kind_breaks(kind: int, p0: float, p1: float) -> tuple[float, ...]:
    if kind in (KIND_EXP2, KIND_POWER_PLUS):
        return (0.0,)
    if kind == KIND_UNIFORM:
        return (p0, p1)
    return ()


def _split_at_breaks(kind, p0, p1, lo, hi):
    pts = [lo] + [b for b in _kind_breaks(kind, p0, p1) if lo < b < hi] + [hi]
    return list(zip(pts[:-1], pts[1:]))


# ---------------------------------------------------------------------------
# Adaptive Simpson (vectorized worklist)
# ---------------------------------------------------------------------------

def _simpson_worklist(fn, owner, a, b, abs_tol, rel_tol, max_depth, out):
    """Adaptive Simpson on many smooth panels at once.

    fn maps an ndarray of points to values; owner[i] indexes out, which
    accumulates per-owner integrals.  Subdivision halves the absolute
    tolerance; acceptance is |S2-S1| <= 15 max(tol, rel |S2|).
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    owner = np.asarray(owner, dtype=np.intp)
    keep = b > a
    a, b, owner = a[keep], b[keep], owner[keep]
    if len(a) == 0:
        return
    m = 0.5 * (a + b)
    fa, fm, fb = fn(a), fn(m), fn(b)
    tol = np.full(len(a), abs_tol, dtype=np.float64)
    s1 = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    for _ in range(max_depth + 1):
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm, frm = fn(lm), fn(rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        s2 = left + right
        err = (s2 - s1) / 15.0
        done = np.abs(s2 - s1) <= 15.0 * np.maximum(tol, rel_tol * np.abs(s2))
        done |= (b - a) <= 1e-14 * (1.0 + np.abs(a) + np.abs(b))
        if np.any(done):
            np.add.at(out, owner[done], (s2 + err)[done])
        if np.all(done):
            return
        split = ~done
        na = np.concatenate([a[split], m[split]])
        nm = np.concatenate([lm[split], rm[split]])
        nb = np.concatenate([m[split], b[split]])
        nfa = np.concatenate([fa[split], fm[split]])
        nfm = np.concatenate([flm[split], frm[split]])
        nfb = np.concatenate([fm[split], fb[split]])
        ntol = np.concatenate([0.5 * tol[split]] * 2)
        nowner = np.concatenate([owner[split]] * 2)
        ns1 = np.concatenate([left[split], right[split]])
        a, m, b, fa, fm, fb, tol, owner, s1 = na, nm, nb, nfa, nfm, nfb, ntol, nowner, ns1
    raise ConvergenceError("adaptive quadrature exceeded max depth")


def integrate_catalog(kind, p0, p1, a, b, abs_tol, rel_tol, max_depth) -> float:
    out = np.zeros(1)
    pieces = _split_at_breaks(kind, p0, p1, a, b) if b > a else []
    for lo, hi in pieces:
        if kind == KIND_UNIFORM:
            # constant on the open piece; the midpoint classifies it exactly
            out[0] += (hi - lo) * float(eval_catalog(kind, p0, p1, 0.5 * (lo + hi)))
            continue
        _simpson_worklist(lambda x: eval_catalog(kind, p0, p1, x),
                          np.zeros(1, dtype=np.intp),
                          np.array([lo]), np.array([hi]),
                          abs_tol, rel_tol, max_depth, out)
    return float(out[0])


def integrate_catalog_batch(kind, p0, p1, lo, hi, abs_tol, rel_tol, max_depth) -> np.ndarray:
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    out = np.zeros(len(lo))
    seg_a, seg_b, seg_owner = [], [], []
    for i, (a, b) in enumerate(zip(lo, hi)):
        for pa, pb in _split_at_breaks(kind, p0, p1, a, b) if b > a else []:
            if kind == KIND_UNIFORM:
                out[i] += (pb - pa) * float(eval_catalog(kind, p0, p1, 0.5 * (pa + pb)))
                continue
            seg_a.append(pa); seg_b.append(pb); seg_owner.append(i)
    if seg_a:
        _simpson_worklist(lambda x: eval_catalog(kind, p0, p1, x),
                          np.array(seg_owner, dtype=np.intp),
                          np.array(seg_a), np.array(seg_b),
                          abs_tol, rel_tol, max_depth, out)
    return out


def polygon_measure_sep(k1, p10, p11, k2, p20, p21, panels,
                        abs_tol, rel_tol, max_depth) -> float:
    """Iterated integral of a separable density over vertical strips.

    panels rows are (xl, xr, ylo_l, ylo_r, yhi_l, yhi_r) with affine chord
    bounds inside each strip; strips are pre-split at outer kinks.
    """
    panels = np.asarray(panels, dtype=np.float64)
    if panels.size == 0:
        return 0.0
    xl, xr = panels[:, 0], panels[:, 1]
    width = xr - xl
    slo = np.where(width > 0, (panels[:, 3] - panels[:, 2]) / np.where(width > 0, width, 1.0), 0.0)
    shi = np.where(width > 0, (panels[:, 5] - panels[:, 4]) / np.where(width > 0, width, 1.0), 0.0)
    ylo0, yhi0 = panels[:, 2], panels[:, 4]
    inner_abs = max(abs_tol * 1e-2, 1e-16)
    inner_rel = rel_tol * 0.1

    # worklist panels carry their panel id so chord bounds can be recovered
    def g(pid, x):
        y0 = ylo0[pid] + slo[pid] * (x - xl[pid])
        y1 = yhi0[pid] + shi[pid] * (x - xl[pid])
        inner = integrate_catalog_batch(k2, p20, p21, y0, np.maximum(y0, y1),
                                        inner_abs, inner_rel, max_depth)
        return eval_catalog(k1, p10, p11, x) * inner

    out = np.zeros(1)
    _simpson_worklist_with_ids(g, np.arange(len(panels), dtype=np.intp),
                               xl.copy(), xr.copy(), abs_tol, rel_tol, max_depth, out)
    return float(out[0])


def _simpson_worklist_with_ids(g, pid, a, b, abs_tol, rel_tol, max_depth, out):
    """Worklist Simpson where the integrand also needs the panel id."""
    keep = b > a
    a, b, pid = a[keep], b[keep], pid[keep]
    if len(a) == 0:
        return
    m = 0.5 * (a + b)
    fa, fm, fb = g(pid, a), g(pid, m), g(pid, b)
    tol = np.full(len(a), abs_tol, dtype=np.float64)
    s1 = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    for _ in range(max_depth + 1):
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm, frm = g(pid, lm), g(pid, rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        s2 = left + right
        err = (s2 - s1) / 15.0
        done = np.abs(s2 - s1) <= 15.0 * np.maximum(tol, rel_tol * np.abs(s2))
        done |= (b - a) <= 1e-14 * (1.0 + np.abs(a) + np.abs(b))
        if np.any(done):
            out[0] += float(np.sum((s2 + err)[done]))
        if np.all(done):
            return
        split = ~done
        a, m, b = (np.concatenate([a[split], m[split]]),
                   np.concatenate([lm[split], rm[split]]),
                   np.concatenate([m[split], b[split]]))
        fa, fm, fb = (np.concatenate([fa[split], fm[split]]),
                      np.concatenate([flm[split], frm[split]]),
                      np.concatenate([fm[split], fb[split]]))
        tol = np.concatenate([0.5 * tol[split]] * 2)
        pid = np.concatenate([pid[split]] * 2)
        s1 = np.concatenate([left[split], right[split]])
    raise ConvergenceError("adaptive quadrature exceeded max depth")


# ---------------------------------------------------------------------------
# Sup-convolutions
# ---------------------------------------------------------------------------

def supconv_min_1d(f, g, lam: float) -> np.ndarray:
    """Minimal h with h((1-lam)x + lam y) >= min(f(x), g(y)), binned to the grid."""
    f = np.asarray(f, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    n = len(f)
    if len(g) != n:
        raise ValueError("grid functions must share one grid")
    idx = np.arange(n, dtype=np.float64)
    k = np.floor(np.add.outer((1.0 - lam) * idx, lam * idx) + 0.5).astype(np.intp)
    vals = np.minimum.outer(f, g)
    h = np.zeros(n)
    np.maximum.at(h, k.ravel(), vals.ravel())
    return h


def supconv_gamma_2d(f, g, lam: float, gamma: float) -> np.ndarray:
    """Minimal h on the common 2-D grid under the gamma-mean pairing."""
    f = np.asarray(f, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    if f.shape != g.shape:
        raise ValueError("grid functions must share one grid")
    nx, ny = f.shape
    ix = np.repeat(np.arange(nx, dtype=np.float64), ny)
    iy = np.tile(np.arange(ny, dtype=np.float64), nx)
    ff, gg = f.ravel(), g.ravel()
    h = np.zeros(nx * ny)
    chunk = max(1, (1 << 22) // max(1, len(gg)))
    for start in range(0, len(ff), chunk):
        sl = slice(start, min(start + chunk, len(ff)))
        gm = power_mean_arrays(ff[sl][:, None], gg[None, :], lam, gamma)
        kx = np.floor((1.0 - lam) * ix[sl][:, None] + lam * ix[None, :] + 0.5)
        ky = np.floor((1.0 - lam) * iy[sl][:, None] + lam * iy[None, :] + 0.5)
        flat = (kx * ny + ky).astype(np.intp)
        np.maximum.at(h, flat.ravel(), gm.ravel())
    return h.reshape(nx, ny)
