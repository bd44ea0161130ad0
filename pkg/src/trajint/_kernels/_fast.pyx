# cython: language_level=3str, boundscheck=False, wraparound=False, cdivision=True
"""Compiled float kernels; same contracts as ``_pure``."""

from libc.math cimport INFINITY, fabs

import numpy as np

cdef enum:
    MAXK = 64

cdef int UNBOUNDED = 1
cdef int ATTAINED = 0


cdef inline double _objective(double* d, double* v, Py_ssize_t n, double h) nogil:
    cdef double best = -INFINITY
    cdef double x
    cdef Py_ssize_t k
    for k in range(n):
        x = v[k] - h * d[k]
        if x > best:
            best = x
    return best


cdef inline (double, double) _consider(double* d, double* v, Py_ssize_t n, double h,
                                       double best, double best_h, int npass, double tol):
    cdef double s = _objective(d, v, n, h)
    if npass == 0:
        if s < best:
            return s, h
        return best, best_h
    if s <= best + tol:
        if fabs(h) < fabs(best_h) or (fabs(h) == fabs(best_h) and h < best_h):
            return best, h
    return best, best_h


def pl_minimize(deltas, values, double lo, double hi, double eps=0.0):
    """Minimise ``h -> max_k (values[k] - h * deltas[k])`` over ``[lo, hi]``."""
    cdef Py_ssize_t n = len(deltas)
    if n > MAXK:
        from ._pure import pl_minimize as slow
        return slow([float(x) for x in deltas], [float(x) for x in values], lo, hi, eps)
    cdef double d[MAXK]
    cdef double v[MAXK]
    cdef Py_ssize_t i, k
    cdef bint pos = False, neg = False, zero = False
    for i in range(n):
        d[i] = deltas[i]
        v[i] = values[i]
        if fabs(d[i]) <= eps:
            d[i] = 0.0
        if d[i] > 0:
            pos = True
        elif d[i] < 0:
            neg = True
        else:
            zero = True
    if hi == INFINITY and pos and not (neg or zero):
        return -INFINITY, None, UNBOUNDED
    if lo == -INFINITY and neg and not (pos or zero):
        return -INFINITY, None, UNBOUNDED

    cdef double best = INFINITY, best_h = 0.0, h, tol = 0.0
    # two passes: find the minimum, then the smallest-|h| candidate within tol
    cdef int npass
    for npass in range(2):
        if npass == 1:
            tol = eps * (fabs(best) if fabs(best) > 1.0 else 1.0)
            best_h = INFINITY
        if lo != -INFINITY:
            best, best_h = _consider(d, v, n, lo, best, best_h, npass, tol)
        if hi != INFINITY:
            best, best_h = _consider(d, v, n, hi, best, best_h, npass, tol)
        h = 0.0
        if h < lo:
            h = lo
        if h > hi:
            h = hi
        best, best_h = _consider(d, v, n, h, best, best_h, npass, tol)
        for i in range(n):
            for k in range(i + 1, n):
                if d[i] == d[k]:
                    continue
                h = (v[i] - v[k]) / (d[i] - d[k])
                if lo <= h <= hi:
                    best, best_h = _consider(d, v, n, h, best, best_h, npass, tol)
    return best, best_h, ATTAINED


def grid_scan(deltas, values, double h0, double step, Py_ssize_t n):
    """Scan ``h = h0 + i * step`` for ``i < n``; return ``(min value, argmin i)``."""
    cdef double[::1] dv = np.ascontiguousarray(deltas, dtype=np.float64)
    cdef double[::1] vv = np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t m = dv.shape[0]
    cdef Py_ssize_t i, best_i = 0
    cdef double best = INFINITY, s
    with nogil:
        for i in range(n):
            s = _objective(&dv[0], &vv[0], m, h0 + i * step)
            if s < best:
                best = s
                best_i = i
    return best, best_i
