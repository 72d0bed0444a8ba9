"""Descriptive statistics of return series and the common test-result record."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSeries, DimensionMismatch, SeriesTooShort
from .statmath import chi2_sf

LEVELS = (0.01, 0.05, 0.10)


@dataclass(frozen=True)
class TestResult:
    """Outcome of one hypothesis test.

    ``dof`` is the chi-square degrees of freedom where that applies, or a
    descriptor such as ``"m=2,eps=0.5s"`` for tests with a normal null.
    """

    __test__ = False  # keep pytest from collecting this class

    name: str
    statistic: float
    dof: object
    p_value: float
    reject_at: dict = field(default_factory=dict)

    @classmethod
    def from_pvalue(cls, name, statistic, dof, p_value):
        p = min(max(float(p_value), 0.0), 1.0)
        return cls(name, float(statistic), dof, p, {a: p < a for a in LEVELS})

    def to_dict(self):
        return {
            "name": self.name,
            "statistic": self.statistic,
            "dof": self.dof,
            "p_value": self.p_value,
            "reject_at": {str(a): r for a, r in self.reject_at.items()},
        }


@dataclass(frozen=True)
class SummaryStats:
    n: int
    mean: float
    sd: float
    skewness: float
    kurtosis: float
    jarque_bera: TestResult

    def to_dict(self):
        return {
            "n": self.n,
            "mean": self.mean,
            "sd": self.sd,
            "skewness": self.skewness,
            "kurtosis": self.kurtosis,
            "jarque_bera": self.jarque_bera.to_dict(),
        }


def jarque_bera_from_moments(n, skewness, kurtosis) -> TestResult:
    """JB = n/6 * (S^2 + (K - 3)^2 / 4) with K the raw kurtosis."""
    jb = n / 6.0 * (skewness**2 + (kurtosis - 3.0) ** 2 / 4.0)
    return TestResult.from_pvalue("Jarque-Bera", jb, 2, chi2_sf(jb, 2))


def describe(r) -> SummaryStats:
    """Mean, sample sd, skewness, raw kurtosis and Jarque-Bera of a sample.

    Skewness and kurtosis use central moments divided by n; the reported
    standard deviation uses n - 1.
    """
    x = np.asarray(getattr(r, "values", r), dtype=float)
    n = x.size
    if n < 4:
        raise SeriesTooShort(f"describe needs at least 4 observations, got {n}")
    mean = float(x.mean())
    d = x - mean
    m2 = float(np.mean(d**2))
    if m2 == 0.0:
        raise DegenerateSeries("series has zero variance")
    m3 = float(np.mean(d**3))
    m4 = float(np.mean(d**4))
    skew = m3 / m2**1.5
    kurt = m4 / m2**2
    sd = float(np.sqrt(m2 * n / (n - 1)))
    return SummaryStats(n, mean, sd, skew, kurt, jarque_bera_from_moments(n, skew, kurt))


def pearson_corr(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionMismatch("pearson_corr needs two equally long vectors")
    if x.size < 3:
        raise SeriesTooShort("pearson_corr needs at least 3 observations")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateSeries("zero variance in correlation input")
    return float(np.clip((dx @ dy) / np.sqrt(sxx * syy), -1.0, 1.0))
