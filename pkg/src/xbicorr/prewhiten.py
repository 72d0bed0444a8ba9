"""AR(p) and bivariate VAR(p) fits by OLS with BIC order selection.

Residuals of these fits are the inputs to every nonlinearity test: once
linear serial and cross dependence has been filtered out, anything the
tests still detect is attributed to nonlinear structure.

BIC conventions (only differences between candidate orders matter):

* AR:  n * ln(sigma2_mle) + k * ln(n)
* VAR: ln det(Sigma_mle) + K * ln(n) / n, K = total coefficients in both
  equations (intercepts included)

Order selection fits every candidate on the same effective sample, the
last ``n - p_max`` observations, and breaks ties toward the smaller order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, SeriesTooShort
from .statmath import ols


@dataclass(frozen=True)
class ArFit:
    order: int
    intercept: float
    coefficients: np.ndarray
    residuals: np.ndarray
    bic: float
    std_errors: np.ndarray

    def to_dict(self):
        return {
            "order": self.order,
            "intercept": self.intercept,
            "coefficients": list(self.coefficients),
            "bic": self.bic,
        }


@dataclass(frozen=True)
class VarFit:
    """Bivariate VAR(p).

    ``coef_matrices[i][j, l]`` is the effect of variable ``l`` at lag
    ``i + 1`` in the equation for variable ``j`` (0 = x, 1 = y).
    """

    order: int
    intercepts: np.ndarray
    coef_matrices: np.ndarray
    residuals: tuple
    bic: float
    std_errors: np.ndarray

    def to_dict(self):
        return {
            "order": self.order,
            "intercepts": list(self.intercepts),
            "coef_matrices": [[list(row) for row in a] for a in self.coef_matrices],
            "bic": self.bic,
        }


def _lagged(y, p, start):
    """Rows t = start..n-1 of [1, y[t-1], ..., y[t-p]]."""
    n = len(y)
    cols = [np.ones(n - start)]
    cols += [y[start - i : n - i] for i in range(1, p + 1)]
    return np.column_stack(cols)


def _as_vector(y):
    return np.asarray(getattr(y, "values", y), dtype=float)


def _ar_ols(y, p, start):
    return ols(_lagged(y, p, start), y[start:])


def fit_ar(y, p: int) -> ArFit:
    """AR(p) with intercept, estimated on observations p..n-1."""
    y = _as_vector(y)
    if p < 0:
        raise ValueError("order must be non-negative")
    if len(y) <= p + 10:
        raise SeriesTooShort(f"AR({p}) needs more than {p + 10} observations, got {len(y)}")
    fit = _ar_ols(y, p, p)
    return ArFit(
        p,
        float(fit.coefficients[0]),
        fit.coefficients[1:].copy(),
        fit.residuals,
        fit.bic,
        fit.std_errors,
    )


def select_ar_order(y, p_max: int) -> int:
    y = _as_vector(y)
    if p_max < 0:
        raise ValueError("p_max must be non-negative")
    if len(y) <= p_max + 10:
        raise SeriesTooShort(f"need more than {p_max + 10} observations, got {len(y)}")
    bics = [_ar_ols(y, p, p_max).bic for p in range(p_max + 1)]
    return int(np.argmin(bics))


def _var_design(x, y, p, start):
    n = len(x)
    cols = [np.ones(n - start)]
    for i in range(1, p + 1):
        cols.append(x[start - i : n - i])
        cols.append(y[start - i : n - i])
    return np.column_stack(cols)


def _var_system(x, y, p, start):
    X = _var_design(x, y, p, start)
    fx = ols(X, x[start:])
    fy = ols(X, y[start:])
    n_eff = len(x) - start
    resid = np.vstack([fx.residuals, fy.residuals])
    sigma = resid @ resid.T / n_eff
    det = float(np.linalg.det(sigma))
    n_coef = 2 * X.shape[1]
    bic = (math.log(det) if det > 0 else -math.inf) + n_coef * math.log(n_eff) / n_eff
    return fx, fy, bic


def _check_pair(x, y, p):
    x = _as_vector(x)
    y = _as_vector(y)
    if x.shape != y.shape:
        raise DimensionMismatch("VAR inputs must be equally long")
    if p < 0:
        raise ValueError("order must be non-negative")
    if len(x) <= 2 * p + 10:
        raise SeriesTooShort(f"VAR({p}) needs more than {2 * p + 10} observations, got {len(x)}")
    return x, y


def fit_var(x, y, p: int) -> VarFit:
    """Equation-by-equation OLS of a bivariate VAR(p) with intercepts."""
    x, y = _check_pair(x, y, p)
    fx, fy, bic = _var_system(x, y, p, p)
    intercepts = np.array([fx.coefficients[0], fy.coefficients[0]])
    mats = np.zeros((p, 2, 2))
    for i in range(p):
        mats[i, 0] = fx.coefficients[1 + 2 * i : 3 + 2 * i]
        mats[i, 1] = fy.coefficients[1 + 2 * i : 3 + 2 * i]
    ses = np.vstack([fx.std_errors, fy.std_errors])
    return VarFit(p, intercepts, mats, (fx.residuals, fy.residuals), bic, ses)


def select_var_order(x, y, p_max: int) -> int:
    x, y = _check_pair(x, y, p_max)
    bics = [_var_system(x, y, p, p_max)[2] for p in range(p_max + 1)]
    return int(np.argmin(bics))
