import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from xbicorr.errors import DegenerateSeries, DimensionMismatch, SeriesTooShort
from xbicorr.summary import TestResult, describe, jarque_bera_from_moments, pearson_corr


def test_alternating_series():
    s = describe(np.array([-1.0, 1.0] * 6))
    assert s.skewness == pytest.approx(0.0, abs=1e-15)
    assert s.kurtosis == pytest.approx(1.0)
    assert s.jarque_bera.statistic == pytest.approx(2.0)
    assert s.jarque_bera.dof == 2
    assert s.mean == 0.0
    assert s.sd == pytest.approx(np.sqrt(12 / 11))


def test_moment_conventions(rng):
    x = rng.gamma(2.0, size=300)
    s = describe(x)
    d = x - x.mean()
    assert s.sd == pytest.approx(np.std(x, ddof=1))
    assert s.skewness == pytest.approx(np.mean(d**3) / np.mean(d**2) ** 1.5)
    assert s.kurtosis == pytest.approx(np.mean(d**4) / np.mean(d**2) ** 2)


@pytest.mark.parametrize(
    "skew, kurt, reported",
    [(-0.04, 6.09, 1699.89), (0.77, 13.91, 21639.46), (1.10, 22.55, 68938.14)],
)
def test_jarque_bera_from_published_moments(skew, kurt, reported):
    jb = jarque_bera_from_moments(4277, skew, kurt).statistic
    assert abs(jb - reported) / reported < 0.005


def test_oil_row_value():
    assert jarque_bera_from_moments(4277, -0.04, 6.09).statistic == pytest.approx(1702.6, rel=2e-4)


def test_jb_pvalue_roughly_uniform():
    p = np.sort([describe(np.random.default_rng(s).standard_normal(2000)).jarque_bera.p_value for s in range(1000)])
    ecdf_hi = np.arange(1, 1001) / 1000
    ecdf_lo = np.arange(0, 1000) / 1000
    ks = max(np.max(ecdf_hi - p), np.max(p - ecdf_lo))
    assert ks < 0.05


def test_describe_errors():
    with pytest.raises(DegenerateSeries):
        describe(np.ones(10))
    with pytest.raises(SeriesTooShort):
        describe([1.0, 2.0, 3.0])


finite = st.floats(-1e3, 1e3, allow_nan=False)


@given(arrays(float, st.integers(8, 60), elements=finite), st.floats(0.01, 100), finite)
def test_affine_invariance(x, a, b):
    if np.ptp(x) < 1e-3:
        return
    s0, s1 = describe(x), describe(a * x + b)
    assert s1.skewness == pytest.approx(s0.skewness, abs=1e-8)
    assert s1.kurtosis == pytest.approx(s0.kurtosis, rel=1e-8)
    assert s1.jarque_bera.statistic >= 0
    assert s0.kurtosis >= 1 - 1e-12


def test_jb_zero_only_at_normal_moments():
    assert jarque_bera_from_moments(100, 0.0, 3.0).statistic == 0.0
    assert jarque_bera_from_moments(100, 0.1, 3.0).statistic > 0
    assert jarque_bera_from_moments(100, 0.0, 2.9).statistic > 0


def test_pearson_examples():
    x = np.array([1.0, 2.0, 3.0, 4.0])
    assert pearson_corr(x, x) == pytest.approx(1.0)
    assert pearson_corr(x, -x) == pytest.approx(-1.0)
    assert pearson_corr(x, [1.0, 3.0, 2.0, 4.0]) == pytest.approx(0.8)
    with pytest.raises(DimensionMismatch):
        pearson_corr(x, x[:3])
    with pytest.raises(DegenerateSeries):
        pearson_corr(x, np.ones(4))


@given(arrays(float, 30, elements=finite), arrays(float, 30, elements=finite),
       st.floats(0.01, 100), finite)
def test_pearson_symmetry_and_affine(x, y, a, b):
    if np.ptp(x) < 1e-3 or np.ptp(y) < 1e-3:
        return
    r = pearson_corr(x, y)
    assert -1.0 <= r <= 1.0
    assert pearson_corr(y, x) == pytest.approx(r, abs=1e-12)
    assert pearson_corr(a * x + b, y) == pytest.approx(r, abs=1e-9)


def test_result_reject_flags():
    t = TestResult.from_pvalue("t", 1.0, 1, 0.03)
    assert t.reject_at == {0.01: False, 0.05: True, 0.10: True}
