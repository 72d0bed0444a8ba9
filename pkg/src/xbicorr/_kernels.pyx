# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the BDS counting and windowed lag-product kernels."""
import numpy as np

cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()


def bds_counts(x, double eps, Py_ssize_t m):
    """Pair and triple counts behind the BDS statistic; see ``_pykernels``.

    Walks each diagonal of the indicator matrix once, tracking the run of
    consecutive hits so every embedding dimension costs the same O(n^2).
    """
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0]
    cdef cnp.int64_t[::1] deg = np.zeros(n, dtype=np.int64)
    cdef long long c1 = 0, cm = 0, triples = 0
    cdef Py_ssize_t d, i, run, hit
    with nogil:
        for d in range(1, n):
            run = 0
            for i in range(n - d):
                # branch-free: hits are close to a coin flip at eps ~ 1 sd
                hit = fabs(xv[i] - xv[i + d]) <= eps
                c1 += hit
                deg[i] += hit
                deg[i + d] += hit
                run = (run + 1) * hit
                cm += run >= m
        for i in range(n):
            triples += deg[i] * (deg[i] - 1)
    return int(c1), int(cm), int(triples)


def window_lag_stats(X, Y, Py_ssize_t L, pairs):
    """Lagged cross products of row-wise windows; see ``_pykernels``."""
    cdef const double[:, ::1] xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef const double[:, ::1] yv = np.ascontiguousarray(Y, dtype=np.float64)
    cdef const Py_ssize_t[:, ::1] pv = np.ascontiguousarray(
        np.asarray(pairs, dtype=np.intp).reshape(-1, 2)
    )
    cdef Py_ssize_t nwin = xv.shape[0], n = xv.shape[1], npairs = pv.shape[0]
    out_xy = np.empty((nwin, L))
    out_xxy = np.empty((nwin, npairs))
    cdef double[:, ::1] cxy = out_xy
    cdef double[:, ::1] cxxy = out_xxy
    cdef Py_ssize_t k, r, s, t, p, lo, hi, top
    cdef double acc
    with nogil:
        for k in range(nwin):
            for r in range(1, L + 1):
                acc = 0.0
                for t in range(n - r):
                    acc = acc + xv[k, t] * yv[k, t + r]
                cxy[k, r - 1] = acc / (n - r)
            for p in range(npairs):
                r = pv[p, 0]
                s = pv[p, 1]
                lo = -s if s < 0 else 0
                top = r if r > s else s
                if top < 0:
                    top = 0
                hi = n - top
                acc = 0.0
                for t in range(lo, hi):
                    acc = acc + xv[k, t] * xv[k, t + r] * yv[k, t + s]
                cxxy[k, p] = acc / (hi - lo)
    return out_xy, out_xxy
