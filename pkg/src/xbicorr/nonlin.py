"""McLeod-Li, Engle LM and BDS tests of nonlinear serial dependence.

All three are meant for residuals of a linear (AR) fit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError, DegenerateSeries, SeriesTooShort, VarianceCollapse
from .statmath import chi2_sf, normal_sf, ols
from .summary import TestResult

DEFAULT_LAGS = (5, 15, 20)


@dataclass(frozen=True)
class BdsConfig:
    m: int = 2
    eps_multiplier: float = 0.5

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 2:
            raise ConfigError(f"BDS embedding dimension must be an integer >= 2, got {self.m}")
        if not self.eps_multiplier > 0:
            raise ConfigError(f"BDS epsilon multiplier must be positive, got {self.eps_multiplier}")

    @property
    def label(self):
        return f"m={self.m},eps={self.eps_multiplier:g}s"


DEFAULT_BDS_GRID = (BdsConfig(2, 0.5), BdsConfig(3, 1.0), BdsConfig(4, 1.5))


def _vector(e):
    return np.asarray(getattr(e, "values", e), dtype=float)


def _check_lags(e, q):
    if int(q) != q or q < 1:
        raise ConfigError(f"lag count must be a positive integer, got {q!r}")
    if len(e) <= q + 10:
        raise SeriesTooShort(f"{len(e)} observations is too few for {q} lags")


def mcleod_li(e, q: int) -> TestResult:
    """Ljung-Box portmanteau statistic on the squared residuals."""
    e = _vector(e)
    _check_lags(e, q)
    n = len(e)
    sq = e * e
    d = sq - sq.mean()
    denom = float(d @ d)
    if denom == 0.0:
        raise DegenerateSeries("squared residuals have zero variance")
    acf = np.array([d[: n - k] @ d[k:] for k in range(1, q + 1)]) / denom
    stat = n * (n + 2) * float(np.sum(acf**2 / (n - np.arange(1, q + 1))))
    return TestResult.from_pvalue("McLeod-Li", stat, int(q), chi2_sf(stat, q))


def engle_lm(e, q: int) -> TestResult:
    """Engle's ARCH LM test: n_eff * R^2 from regressing e_t^2 on q own lags."""
    e = _vector(e)
    _check_lags(e, q)
    sq = e * e
    if np.ptp(sq) == 0.0:
        raise DegenerateSeries("squared residuals are constant")
    n = len(sq)
    X = np.column_stack([np.ones(n - q)] + [sq[q - i : n - i] for i in range(1, q + 1)])
    fit = ols(X, sq[q:])
    stat = fit.nobs * fit.rsquared
    return TestResult.from_pvalue("Engle LM", stat, int(q), chi2_sf(stat, q))


def correlation_integral(x, m: int, eps: float) -> float:
    """Fraction of pairs of m-histories that lie within ``eps`` in sup-norm."""
    x = _vector(x)
    n = len(x)
    if m < 1:
        raise ConfigError("embedding dimension must be >= 1")
    if n < m + 2:
        raise SeriesTooShort(f"need at least {m + 2} observations for m={m}")
    if not eps > 0:
        raise ConfigError("eps must be positive")
    nm = n - m + 1
    _, cm, _ = kernels.bds_counts(x, float(eps), int(m))
    return 2.0 * cm / (nm * (nm - 1))


@dataclass(frozen=True)
class BdsComponents:
    n: int
    eps: float
    c1: float
    cm: float
    k: float
    variance: float
    statistic: float


def bds_variance(c: float, k: float, m: int) -> float:
    """Asymptotic variance of sqrt(n) * (C_m - C_1^m) under iid."""
    inner = sum(k ** (m - j) * c ** (2 * j) for j in range(1, m))
    return 4.0 * (
        k**m + 2.0 * inner + (m - 1) ** 2 * c ** (2 * m) - m * m * k * c ** (2 * m - 2)
    )


def bds_components(e, cfg: BdsConfig) -> BdsComponents:
    e = _vector(e)
    n = len(e)
    if n < cfg.m + 2 or n < 3:
        raise SeriesTooShort(f"need at least {cfg.m + 2} observations")
    sd = float(np.std(e, ddof=1))
    if sd == 0.0:
        raise DegenerateSeries("series has zero variance")
    eps = cfg.eps_multiplier * sd
    c1_pairs, cm_pairs, triples = kernels.bds_counts(e, eps, int(cfg.m))
    nm = n - cfg.m + 1
    c1 = 2.0 * c1_pairs / (n * (n - 1))
    cm = 2.0 * cm_pairs / (nm * (nm - 1))
    k = triples / (n * (n - 1) * (n - 2))
    var = bds_variance(c1, k, cfg.m)
    if not var > 0:
        raise VarianceCollapse(
            f"BDS variance estimate {var:.3g} <= 0 at {cfg.label}; choose a different epsilon"
        )
    stat = math.sqrt(n) * (cm - c1**cfg.m) / math.sqrt(var)
    return BdsComponents(n, eps, c1, cm, k, var, stat)


def bds(e, cfg: BdsConfig = BdsConfig(), min_n: int = 200) -> TestResult:
    """BDS test of iid-ness with a two-sided normal p-value.

    ``eps`` is ``cfg.eps_multiplier`` times the sample standard deviation,
    so the statistic is invariant to positive affine rescaling of ``e``.
    Set ``min_n=0`` to run it on series too short for the asymptotics.
    """
    e = _vector(e)
    if len(e) < min_n:
        raise SeriesTooShort(f"BDS needs at least {min_n} observations, got {len(e)}")
    comp = bds_components(e, cfg)
    p = 2.0 * normal_sf(abs(comp.statistic))
    return TestResult.from_pvalue("BDS", comp.statistic, cfg.label, p)


def battery(e, lags=DEFAULT_LAGS, bds_grid=DEFAULT_BDS_GRID) -> list:
    """Every McLeod-Li, Engle LM and BDS row of the standard table."""
    out = [mcleod_li(e, q) for q in lags]
    out += [engle_lm(e, q) for q in lags]
    out += [bds(e, cfg) for cfg in bds_grid]
    return out
