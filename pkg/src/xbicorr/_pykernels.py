"""Pure numpy implementations of the hot kernels.

Same signatures and results as the compiled ``_kernels`` extension; used
when the extension is not built or ``XBICORR_BACKEND=python`` is set.
"""
import numpy as np


def bds_counts(x, eps, m):
    """Pair and triple counts behind the BDS statistic.

    Returns ``(c1, cm, triples)`` where ``c1`` counts pairs i < j of the
    whole series with |x_i - x_j| <= eps, ``cm`` counts pairs s < t of
    m-histories (s, t <= n - m) that are within eps coordinate-wise, and
    ``triples`` is sum_i d_i (d_i - 1) with d_i the number of j != i
    within eps of x_i.

    Builds the full n x n indicator matrix, so memory is O(n^2) bytes.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    n = x.shape[0]
    ind = np.abs(x[:, None] - x[None, :]) <= eps
    deg = ind.sum(axis=1, dtype=np.int64) - 1
    c1 = int(deg.sum()) // 2
    nm = n - m + 1
    if nm < 2:
        cm = 0
    else:
        hist = ind[:nm, :nm].copy()
        for j in range(1, m):
            hist &= ind[j : j + nm, j : j + nm]
        cm = (int(np.count_nonzero(hist)) - nm) // 2
    triples = int(np.dot(deg, deg - 1))
    return c1, cm, triples


def window_lag_stats(X, Y, L, pairs):
    """Lagged cross products of row-wise windows.

    ``X`` and ``Y`` are (windows, n) arrays. Returns ``(cxy, cxxy)``:
    ``cxy[k, r-1]`` is the mean of X[k, t] * Y[k, t+r] over valid t, and
    ``cxxy[k, i]`` the mean of X[k, t] * X[k, t+r] * Y[k, t+s] over valid t
    for ``(r, s) = pairs[i]``.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    Y = np.ascontiguousarray(Y, dtype=np.float64)
    n = X.shape[1]
    cxy = np.empty((X.shape[0], L))
    for r in range(1, L + 1):
        cxy[:, r - 1] = np.einsum("ij,ij->i", X[:, : n - r], Y[:, r:]) / (n - r)
    cxxy = np.empty((X.shape[0], len(pairs)))
    for i, (r, s) in enumerate(pairs):
        lo = max(0, -s)
        hi = n - max(r, s, 0)
        prod = X[:, lo:hi] * X[:, lo + r : hi + r] * Y[:, lo + s : hi + s]
        cxxy[:, i] = prod.sum(axis=1) / (hi - lo)
    return cxy, cxxy
