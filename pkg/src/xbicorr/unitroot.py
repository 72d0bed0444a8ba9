"""Augmented Dickey-Fuller test.

Regression: dy_t = a + b*t + g*y_{t-1} + sum_i d_i * dy_{t-i} + e_t, with
the augmentation order chosen by BIC over 0..max_lags (all candidates on
a common sample) and the chosen model refitted on the longest available
sample. Rejection uses fixed large-sample Dickey-Fuller critical values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, SeriesTooShort
from .statmath import ols

CRITICAL_VALUES = {
    "ct": {0.01: -3.96, 0.05: -3.41, 0.10: -3.12},
    "c": {0.01: -3.43, 0.05: -2.86, 0.10: -2.57},
}


@dataclass(frozen=True)
class AdfResult:
    statistic: float
    lags_used: int
    spec: str
    critical_values: dict
    reject_at: dict
    nobs: int
    max_lags: int
    regression: object = None

    def to_dict(self):
        return {
            "statistic": self.statistic,
            "lags_used": self.lags_used,
            "max_lags": self.max_lags,
            "nobs": self.nobs,
            "spec": self.spec,
            "critical_values": {str(a): v for a, v in self.critical_values.items()},
            "reject_at": {str(a): r for a, r in self.reject_at.items()},
        }


def schwert_max_lags(n: int) -> int:
    return int(math.floor(12.0 * (n / 100.0) ** 0.25))


def _design(y, dy, p, start, spec):
    # rows correspond to dy[start:], i.e. levels y[start + 1:]
    n = len(dy)
    rows = n - start
    cols = [np.ones(rows)]
    if spec == "ct":
        cols.append(np.arange(start + 1, n + 1, dtype=float))
    cols.append(y[start : n])
    cols += [dy[start - i : n - i] for i in range(1, p + 1)]
    return np.column_stack(cols)


def adf(y, max_lags: int | None = None, spec: str = "ct") -> AdfResult:
    """ADF t-test on the lagged level.

    ``spec`` is ``"ct"`` (constant and trend, the default) or ``"c"``
    (constant only). ``max_lags`` defaults to floor(12 * (n/100)^(1/4)).

    A constant input raises ``RankDeficient`` because the lagged level is
    collinear with the intercept.
    """
    if spec not in CRITICAL_VALUES:
        raise ConfigError(f"unknown deterministic specification {spec!r}")
    y = np.asarray(getattr(y, "values", y), dtype=float)
    n = len(y)
    if max_lags is None:
        max_lags = schwert_max_lags(n)
    max_lags = int(max_lags)
    if n <= max_lags + 10:
        raise SeriesTooShort(f"ADF with max_lags={max_lags} needs more than {max_lags + 10} points")
    dy = np.diff(y)
    pos = 2 if spec == "ct" else 1

    bics = [ols(_design(y, dy, p, max_lags, spec), dy[max_lags:]).bic for p in range(max_lags + 1)]
    p = int(np.argmin(bics))
    fit = ols(_design(y, dy, p, p, spec), dy[p:])
    stat = float(fit.coefficients[pos] / fit.std_errors[pos])
    crit = dict(CRITICAL_VALUES[spec])
    return AdfResult(
        stat,
        p,
        spec,
        crit,
        {a: stat < c for a, c in crit.items()},
        fit.nobs,
        max_lags,
        fit,
    )
