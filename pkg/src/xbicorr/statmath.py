"""Numerical substrate: OLS, log-gamma and the chi-square / normal tails.

Everything downstream (AR/VAR fits, ADF, the LM regressions and the
p-values of every test) goes through this module.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DomainError, RankDeficient

# Smallest accepted eigenvalue ratio of the column-scaled Gram matrix.
_GRAM_RCOND = 1e-12
_GAMMA_EPS = 1e-16
_GAMMA_MAXITER = 100_000
_TINY = 1e-300


@dataclass(frozen=True)
class OlsFit:
    """Least-squares fit of ``y`` on the columns of ``X``.

    ``sigma2`` is the unbiased residual variance e'e/(n-k); the BIC uses
    the maximum-likelihood variance e'e/n:

        bic = n * ln(e'e / n) + k * ln(n)
    """

    coefficients: np.ndarray
    residuals: np.ndarray
    std_errors: np.ndarray
    sigma2: float
    rsquared: float
    nobs: int
    nregressors: int
    llf: float
    bic: float

    @property
    def ssr(self) -> float:
        return float(self.residuals @ self.residuals)

    @property
    def sigma2_mle(self) -> float:
        return self.ssr / self.nobs

    @property
    def tvalues(self) -> np.ndarray:
        return self.coefficients / self.std_errors


def _cholesky_solve(chol, rhs):
    z = np.linalg.solve(chol, rhs)
    return np.linalg.solve(chol.T, z)


def ols(X, y) -> OlsFit:
    """Ordinary least squares via the normal equations.

    The columns are scaled to unit length before the Cholesky factorisation
    so the conditioning check is independent of the regressors' units, and
    one step of iterative refinement is applied to the solution.

    Raises
    ------
    DimensionMismatch
        ``X`` and ``y`` disagree in length, or ``n <= k``.
    RankDeficient
        A zero column or a (numerically) singular Gram matrix.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2 or y.ndim != 1:
        raise DimensionMismatch("X must be 2-d and y 1-d")
    n, k = X.shape
    if y.shape[0] != n:
        raise DimensionMismatch(f"X has {n} rows but y has {y.shape[0]} entries")
    if n <= k:
        raise DimensionMismatch(f"need more observations than regressors (n={n}, k={k})")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise DomainError("non-finite values in regression data")

    scale = np.sqrt(np.einsum("ij,ij->j", X, X))
    if np.any(scale == 0.0):
        raise RankDeficient("design matrix has an all-zero column")
    Z = X / scale
    gram = Z.T @ Z
    eig = np.linalg.eigvalsh(gram)
    if eig[0] <= _GRAM_RCOND * eig[-1]:
        raise RankDeficient(
            f"design matrix is singular or nearly so (eigenvalue ratio {eig[0] / eig[-1]:.3g})"
        )
    chol = np.linalg.cholesky(gram)
    beta = _cholesky_solve(chol, Z.T @ y)
    beta += _cholesky_solve(chol, Z.T @ (y - Z @ beta))

    coef = beta / scale
    resid = y - X @ coef
    ssr = float(resid @ resid)
    sigma2 = ssr / (n - k)
    gram_inv = _cholesky_solve(chol, np.eye(k))
    std_errors = np.sqrt(sigma2 * np.diag(gram_inv)) / scale

    centred = y - y.mean()
    sst = float(centred @ centred)
    rsquared = 0.0 if sst == 0.0 else min(max(1.0 - ssr / sst, 0.0), 1.0)

    sigma2_mle = ssr / n
    if sigma2_mle > 0.0:
        llf = -0.5 * n * (math.log(2.0 * math.pi * sigma2_mle) + 1.0)
        bic = n * math.log(sigma2_mle) + k * math.log(n)
    else:
        llf, bic = math.inf, -math.inf
    return OlsFit(coef, resid, std_errors, sigma2, rsquared, n, k, llf, bic)


def ln_gamma(x: float) -> float:
    """Natural log of the gamma function for ``x > 0``."""
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"ln_gamma requires a finite x > 0, got {x!r}")
    return math.lgamma(x)


def _gamma_p_series(a, x):
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_GAMMA_MAXITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _GAMMA_EPS:
            break
    return total * math.exp(-x + a * math.log(x) - ln_gamma(a))


def _gamma_q_contfrac(a, x):
    # modified Lentz evaluation of the Legendre continued fraction
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _GAMMA_MAXITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _GAMMA_EPS:
            break
    return math.exp(-x + a * math.log(x) - ln_gamma(a)) * h


def gamma_q(a: float, x: float) -> float:
    """Regularised upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a)."""
    if not a > 0:
        raise DomainError(f"gamma_q requires a > 0, got {a!r}")
    if not x >= 0:
        raise DomainError(f"gamma_q requires x >= 0, got {x!r}")
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return min(max(1.0 - _gamma_p_series(a, x), 0.0), 1.0)
    return min(max(_gamma_q_contfrac(a, x), 0.0), 1.0)


def chi2_sf(x: float, k: int) -> float:
    """P(chi2_k > x)."""
    if isinstance(k, float) and k.is_integer():
        k = int(k)
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise DomainError(f"degrees of freedom must be an integer >= 1, got {k!r}")
    x = float(x)
    if math.isnan(x) or x < 0:
        raise DomainError(f"chi2_sf requires x >= 0, got {x!r}")
    return gamma_q(0.5 * k, 0.5 * x)


def normal_sf(z: float) -> float:
    """P(Z > z) for a standard normal Z."""
    z = float(z)
    if math.isnan(z):
        raise DomainError("normal_sf of NaN")
    return 0.5 * math.erfc(z / math.sqrt(2.0))
