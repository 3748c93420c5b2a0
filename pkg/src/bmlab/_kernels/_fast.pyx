# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: adaptive Simpson over the analytic density catalog,
the iterated polygon integral for separable densities, and the 1-D/2-D
sup-convolution pairings.  Semantics mirror bmlab._kernels._ref."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, fabs, pow, floor, NAN, isnan, INFINITY

from bmlab.errors import ConvergenceError

BACKEND_NAME = "cython"

KIND_GAUSSIAN = 0
KIND_EXP2 = 1
KIND_POWER_PLUS = 2
KIND_UNIFORM = 3

cdef double SQRT_TWO_PI = 2.5066282746310002


cdef inline double _eval(int kind, double p0, double p1, double x) nogil:
    if kind == 0:
        return exp(-x * x / (2.0 * p0 * p0)) / (p0 * SQRT_TWO_PI)
    elif kind == 1:
        return p1 * exp(-p0 * fabs(x))
    elif kind == 2:
        return pow(x, p0) if x > 0.0 else 0.0
    elif kind == 3:
        return 1.0 if (p0 <= x <= p1) else 0.0
    return 0.0


def eval_catalog(int kind, double p0, double p1, x):
    xs = np.asarray(x, dtype=np.float64)
    flat = np.ravel(xs)
    cdef double[::1] xv = np.ascontiguousarray(flat)
    out = np.empty(flat.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    for i in range(xv.shape[0]):
        ov[i] = _eval(kind, p0, p1, xv[i])
    return out.reshape(xs.shape)


cdef double _simpson_rec(int kind, double p0, double p1,
                         double a, double fa, double m, double fm,
                         double b, double fb, double s1,
                         double tol, double rel_tol, int depth) nogil:
    cdef double lm = 0.5 * (a + m)
    cdef double rm = 0.5 * (m + b)
    cdef double flm = _eval(kind, p0, p1, lm)
    cdef double frm = _eval(kind, p0, p1, rm)
    cdef double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    cdef double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    cdef double s2 = left + right
    cdef double err = (s2 - s1) / 15.0
    cdef double gate = rel_tol * fabs(s2)
    if gate < tol:
        gate = tol
    if fabs(s2 - s1) <= 15.0 * gate or (b - a) <= 1e-14 * (1.0 + fabs(a) + fabs(b)):
        return s2 + err
    if depth <= 0:
        return NAN
    return (_simpson_rec(kind, p0, p1, a, fa, lm, flm, m, fm, left, 0.5 * tol, rel_tol, depth - 1)
            + _simpson_rec(kind, p0, p1, m, fm, rm, frm, b, fb, right, 0.5 * tol, rel_tol, depth - 1))


cdef double _integrate_smooth(int kind, double p0, double p1, double a, double b,
                              double abs_tol, double rel_tol, int max_depth) nogil:
    if b <= a:
        return 0.0
    cdef double m = 0.5 * (a + b)
    cdef double fa = _eval(kind, p0, p1, a)
    cdef double fm = _eval(kind, p0, p1, m)
    cdef double fb = _eval(kind, p0, p1, b)
    cdef double s1 = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_rec(kind, p0, p1, a, fa, m, fm, b, fb, s1, abs_tol, rel_tol, max_depth)


cdef int _kind_breaks(int kind, double p0, double p1, double* out) nogil:
    if kind == 1 or kind == 2:
        out[0] = 0.0
        return 1
    if kind == 3:
        out[0] = p0
        out[1] = p1
        return 2
    return 0


cdef double _integrate_c(int kind, double p0, double p1, double a, double b,
                         double abs_tol, double rel_tol, int max_depth) nogil:
    cdef double breaks[2]
    cdef int nb = _kind_breaks(kind, p0, p1, breaks)
    cdef double total = 0.0
    cdef double lo = a
    cdef int i
    if b <= a:
        return 0.0
    if kind == 3:
        # constant on each open piece; midpoints classify the pieces exactly
        for i in range(nb):
            if a < breaks[i] < b:
                total += (breaks[i] - lo) * _eval(kind, p0, p1, 0.5 * (lo + breaks[i]))
                lo = breaks[i]
        total += (b - lo) * _eval(kind, p0, p1, 0.5 * (lo + b))
        return total
    for i in range(nb):
        if a < breaks[i] < b:
            total += _integrate_smooth(kind, p0, p1, lo, breaks[i], abs_tol, rel_tol, max_depth)
            lo = breaks[i]
    total += _integrate_smooth(kind, p0, p1, lo, b, abs_tol, rel_tol, max_depth)
    return total


def integrate_catalog(int kind, double p0, double p1, double a, double b,
                      double abs_tol, double rel_tol, int max_depth):
    cdef double v
    with nogil:
        v = _integrate_c(kind, p0, p1, a, b, abs_tol, rel_tol, max_depth)
    if isnan(v):
        raise ConvergenceError("adaptive quadrature exceeded max depth")
    return v


def integrate_catalog_batch(int kind, double p0, double p1, lo, hi,
                            double abs_tol, double rel_tol, int max_depth):
    cdef const double[::1] lov = np.ascontiguousarray(lo, dtype=np.float64)
    cdef const double[::1] hiv = np.ascontiguousarray(hi, dtype=np.float64)
    out = np.zeros(lov.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    cdef bint bad = False
    with nogil:
        for i in range(lov.shape[0]):
            ov[i] = _integrate_c(kind, p0, p1, lov[i], hiv[i], abs_tol, rel_tol, max_depth)
            if isnan(ov[i]):
                bad = True
    if bad:
        raise ConvergenceError("adaptive quadrature exceeded max depth")
    return out


# ---------------------------------------------------------------------------
# Iterated polygon integral (separable densities)
# ---------------------------------------------------------------------------

cdef double _gfun(int k1, double p10, double p11, int k2, double p20, double p21,
                  double x, double xl, double ylo0, double slo, double yhi0, double shi,
                  double iabs, double irel, int max_depth) nogil:
    cdef double v1 = _eval(k1, p10, p11, x)
    cdef double y0, y1
    if v1 == 0.0:
        return 0.0
    y0 = ylo0 + slo * (x - xl)
    y1 = yhi0 + shi * (x - xl)
    if y1 < y0:
        y1 = y0
    return v1 * _integrate_c(k2, p20, p21, y0, y1, iabs, irel, max_depth)


cdef double _outer_rec(int k1, double p10, double p11, int k2, double p20, double p21,
                       double xl, double ylo0, double slo, double yhi0, double shi,
                       double a, double fa, double m, double fm, double b, double fb,
                       double s1, double tol, double rel_tol, int depth,
                       double iabs, double irel, int max_depth) nogil:
    cdef double lm = 0.5 * (a + m)
    cdef double rm = 0.5 * (m + b)
    cdef double flm = _gfun(k1, p10, p11, k2, p20, p21, lm, xl, ylo0, slo, yhi0, shi, iabs, irel, max_depth)
    cdef double frm = _gfun(k1, p10, p11, k2, p20, p21, rm, xl, ylo0, slo, yhi0, shi, iabs, irel, max_depth)
    cdef double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    cdef double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    cdef double s2 = left + right
    cdef double err = (s2 - s1) / 15.0
    cdef double gate = rel_tol * fabs(s2)
    if gate < tol:
        gate = tol
    if fabs(s2 - s1) <= 15.0 * gate or (b - a) <= 1e-14 * (1.0 + fabs(a) + fabs(b)):
        return s2 + err
    if depth <= 0:
        return NAN
    return (_outer_rec(k1, p10, p11, k2, p20, p21, xl, ylo0, slo, yhi0, shi,
                       a, fa, lm, flm, m, fm, left, 0.5 * tol, rel_tol, depth - 1, iabs, irel, max_depth)
            + _outer_rec(k1, p10, p11, k2, p20, p21, xl, ylo0, slo, yhi0, shi,
                         m, fm, rm, frm, b, fb, right, 0.5 * tol, rel_tol, depth - 1, iabs, irel, max_depth))


def polygon_measure_sep(int k1, double p10, double p11, int k2, double p20, double p21,
                        panels, double abs_tol, double rel_tol, int max_depth):
    cdef const double[:, ::1] pv = np.ascontiguousarray(panels, dtype=np.float64)
    cdef double iabs = abs_tol * 1e-2
    if iabs < 1e-16:
        iabs = 1e-16
    cdef double irel = rel_tol * 0.1
    cdef double total = 0.0
    cdef double xl, xr, w, slo, shi, ylo0, yhi0, m, fa, fm, fb, s1, v
    cdef Py_ssize_t i
    cdef bint bad = False
    with nogil:
        for i in range(pv.shape[0]):
            xl = pv[i, 0]; xr = pv[i, 1]
            w = xr - xl
            if w <= 0.0:
                continue
            ylo0 = pv[i, 2]; yhi0 = pv[i, 4]
            slo = (pv[i, 3] - pv[i, 2]) / w
            shi = (pv[i, 5] - pv[i, 4]) / w
            m = 0.5 * (xl + xr)
            fa = _gfun(k1, p10, p11, k2, p20, p21, xl, xl, ylo0, slo, yhi0, shi, iabs, irel, max_depth)
            fm = _gfun(k1, p10, p11, k2, p20, p21, m, xl, ylo0, slo, yhi0, shi, iabs, irel, max_depth)
            fb = _gfun(k1, p10, p11, k2, p20, p21, xr, xl, ylo0, slo, yhi0, shi, iabs, irel, max_depth)
            s1 = w / 6.0 * (fa + 4.0 * fm + fb)
            v = _outer_rec(k1, p10, p11, k2, p20, p21, xl, ylo0, slo, yhi0, shi,
                           xl, fa, m, fm, xr, fb, s1, abs_tol, rel_tol, max_depth,
                           iabs, irel, max_depth)
            if isnan(v):
                bad = True
                break
            total += v
    if bad:
        raise ConvergenceError("adaptive quadrature exceeded max depth")
    return total


# ---------------------------------------------------------------------------
# Sup-convolutions
# ---------------------------------------------------------------------------

cdef inline double _gmean(double a, double b, double lam, double gamma) nogil:
    if lam == 0.0:
        return a
    if lam == 1.0:
        return b
    if gamma == INFINITY:
        return a if a > b else b
    if gamma == -INFINITY:
        return a if a < b else b
    if a == 0.0 or b == 0.0:
        if gamma <= 0.0:
            return 0.0
        return pow((1.0 - lam) * (pow(a, gamma) if a > 0.0 else 0.0)
                   + lam * (pow(b, gamma) if b > 0.0 else 0.0), 1.0 / gamma)
    if gamma == 0.0:
        return pow(a, 1.0 - lam) * pow(b, lam)
    return pow((1.0 - lam) * pow(a, gamma) + lam * pow(b, gamma), 1.0 / gamma)


def supconv_min_1d(f, g, double lam):
    cdef const double[::1] fv = np.ascontiguousarray(f, dtype=np.float64)
    cdef const double[::1] gv = np.ascontiguousarray(g, dtype=np.float64)
    if fv.shape[0] != gv.shape[0]:
        raise ValueError("grid functions must share one grid")
    cdef Py_ssize_t n = fv.shape[0]
    out = np.zeros(n)
    cdef double[::1] hv = out
    cdef Py_ssize_t i, j, k
    cdef double fi, gj, v, base
    with nogil:
        for i in range(n):
            fi = fv[i]
            if fi <= 0.0:
                continue
            base = (1.0 - lam) * i
            for j in range(n):
                gj = gv[j]
                if gj <= 0.0:
                    continue
                v = fi if fi < gj else gj
                k = <Py_ssize_t>floor(base + lam * j + 0.5)
                if v > hv[k]:
                    hv[k] = v
    return out


def supconv_gamma_2d(f, g, double lam, double gamma):
    cdef const double[:, ::1] fv = np.ascontiguousarray(f, dtype=np.float64)
    cdef const double[:, ::1] gv = np.ascontiguousarray(g, dtype=np.float64)
    if fv.shape[0] != gv.shape[0] or fv.shape[1] != gv.shape[1]:
        raise ValueError("grid functions must share one grid")
    cdef Py_ssize_t nx = fv.shape[0], ny = fv.shape[1]
    out = np.zeros((nx, ny))
    cdef double[:, ::1] hv = out
    cdef Py_ssize_t i1, j1, i2, j2, kx, ky
    cdef double fval, gval, v, bx, by
    with nogil:
        for i1 in range(nx):
            for j1 in range(ny):
                fval = fv[i1, j1]
                bx = (1.0 - lam) * i1
                by = (1.0 - lam) * j1
                for i2 in range(nx):
                    kx = <Py_ssize_t>floor(bx + lam * i2 + 0.5)
                    for j2 in range(ny):
                        gval = gv[i2, j2]
                        v = _gmean(fval, gval, lam, gamma)
                        if v > 0.0:
                            ky = <Py_ssize_t>floor(by + lam * j2 + 0.5)
                            if v > hv[kx, ky]:
                                hv[kx, ky] = v
    return out
