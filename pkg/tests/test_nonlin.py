import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from xbicorr.errors import ConfigError, DegenerateSeries, SeriesTooShort, VarianceCollapse
from xbicorr.nonlin import (
    DEFAULT_BDS_GRID,
    BdsConfig,
    battery,
    bds,
    bds_components,
    bds_variance,
    correlation_integral,
    engle_lm,
    mcleod_li,
)
from xbicorr.simulate import arch1, logistic_map


def test_correlation_integral_examples(backend):
    assert correlation_integral(np.full(10, 2.5), 1, 0.1) == 1.0
    assert correlation_integral(np.full(10, 2.5), 3, 0.1) == 1.0
    assert correlation_integral([0.0, 10.0, 20.0, 30.0], 1, 10.0) == 0.5


def test_correlation_integral_matches_oracle(backend):
    r = np.random.default_rng(7)
    for _ in range(200):
        n = int(r.integers(5, 40))
        x = np.round(r.standard_normal(n), 1)  # ties exercise the <= boundary
        m = int(r.integers(1, 5))
        eps = float(r.choice([0.1, 0.3, 0.5, 1.0]))
        if n < m + 2:
            continue
        assert correlation_integral(x, m, eps) == pytest.approx(oracles.correlation_integral(list(x), m, eps), abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(arrays(float, st.integers(6, 40), elements=st.floats(-5, 5)), st.floats(0.01, 3), st.floats(0.01, 3))
def test_correlation_integral_monotone(x, e1, e2):
    lo, hi = sorted((e1, e2))
    for m in (1, 2, 3):
        c = correlation_integral(x, m, lo)
        assert 0.0 <= c <= correlation_integral(x, m, hi) <= 1.0
        if m > 1:
            assert c <= correlation_integral(x, m - 1, lo)


def test_correlation_integral_errors():
    with pytest.raises(SeriesTooShort):
        correlation_integral([1.0, 2.0, 3.0], 2, 1.0)
    with pytest.raises(ConfigError):
        correlation_integral(np.arange(10.0), 2, 0.0)


def test_bds_matches_oracle_on_tiny_series(backend):
    r = np.random.default_rng(3)
    for m, mult in [(2, 0.5), (3, 1.0), (4, 1.5), (2, 1.0)]:
        x = r.standard_normal(20)
        comp = bds_components(x, BdsConfig(m, mult))
        ref = oracles.bds_statistic(list(x), m, mult)
        for key in ("c1", "cm", "k", "variance", "statistic"):
            assert getattr(comp, key) == pytest.approx(ref[key], abs=1e-10), key
        assert bds(x, BdsConfig(m, mult), min_n=0).statistic == pytest.approx(ref["statistic"], abs=1e-10)


def test_bds_variance_m2_closed_form():
    c, k = 0.4, 0.2
    expected = 4 * (k**2 + 2 * k * c**2 + c**4 - 4 * k * c**2)
    assert bds_variance(c, k, 2) == pytest.approx(expected)


def test_bds_affine_invariance(rng):
    x = rng.standard_normal(400)
    a = bds(x, BdsConfig(2, 0.5))
    b = bds(3.7 * x - 12.0, BdsConfig(2, 0.5))
    assert b.statistic == pytest.approx(a.statistic, abs=1e-8)


def test_bds_guards(rng):
    with pytest.raises(SeriesTooShort):
        bds(rng.standard_normal(100))
    with pytest.raises(DegenerateSeries):
        bds(np.ones(300))
    with pytest.raises(ConfigError):
        BdsConfig(1, 0.5)
    with pytest.raises(ConfigError):
        BdsConfig(2, 0.0)


def test_bds_variance_collapse():
    # with eps far above the range every pair is close: c = k = 1, variance 0
    x = np.random.default_rng(0).uniform(size=300)
    with pytest.raises(VarianceCollapse):
        bds(x, BdsConfig(2, 100.0))


def _bds_keep_rate(draw, cfg, seeds):
    return sum(abs(bds(draw(np.random.default_rng(s)), cfg).statistic) < 1.96 for s in range(seeds)) / seeds


@pytest.mark.slow
@pytest.mark.xfail(
    strict=True,
    reason="uniform noise makes the m=2 variance nearly degenerate (k ~ c^2); "
    "observed 90.2% over 1000 seeds, statsmodels' bds gives 90.9%",
)
def test_bds_size_uniform_noise():
    assert 0.92 <= _bds_keep_rate(lambda r: r.uniform(size=1000), BdsConfig(2, 1.0), 1000) <= 0.98


def test_bds_size_gaussian_noise():
    assert 0.92 <= _bds_keep_rate(lambda r: r.standard_normal(1000), BdsConfig(2, 1.0), 500) <= 0.98


def test_bds_power_logistic_map():
    r = np.random.default_rng(11)
    hits = sum(bds(logistic_map(r.uniform(0.01, 0.99), 1000), BdsConfig(2, 0.5)).p_value < 0.001 for _ in range(100))
    assert hits >= 99


def test_portmanteau_size():
    rej_ml = rej_lm = 0
    for s in range(300):
        e = np.random.default_rng(s).standard_normal(2000)
        rej_ml += mcleod_li(e, 5).p_value < 0.05
        rej_lm += engle_lm(e, 5).p_value < 0.05
    assert 0.02 <= rej_ml / 300 <= 0.09
    assert 0.02 <= rej_lm / 300 <= 0.09


def test_portmanteau_power_arch():
    for s in range(50):
        e = arch1(np.random.default_rng(s), 2000)
        assert mcleod_li(e, 5).p_value < 0.01
        assert engle_lm(e, 5).p_value < 0.01


def test_engle_lm_matches_direct_regression(rng):
    e = rng.standard_normal(300)
    sq = e**2
    q = 3
    X = np.column_stack([np.ones(297)] + [sq[q - i : 300 - i] for i in range(1, q + 1)])
    beta, *_ = np.linalg.lstsq(X, sq[q:], rcond=None)
    resid = sq[q:] - X @ beta
    r2 = 1 - resid @ resid / np.sum((sq[q:] - sq[q:].mean()) ** 2)
    assert engle_lm(e, q).statistic == pytest.approx(297 * r2, rel=1e-9)


def test_mcleod_li_statistic(rng):
    e = rng.standard_normal(100)
    d = e**2 - np.mean(e**2)
    n = 100
    q = sum(((d[:-k] @ d[k:]) / (d @ d)) ** 2 / (n - k) for k in (1, 2))
    assert mcleod_li(e, 2).statistic == pytest.approx(n * (n + 2) * q, rel=1e-12)


def test_portmanteau_errors(rng):
    for test in (mcleod_li, engle_lm):
        with pytest.raises(ConfigError):
            test(rng.standard_normal(100), 0)
        with pytest.raises(SeriesTooShort):
            test(rng.standard_normal(15), 5)
        with pytest.raises(DegenerateSeries):
            test(np.ones(100), 5)


def test_battery_layout(rng):
    rows = battery(rng.standard_normal(500))
    assert [r.name for r in rows] == ["McLeod-Li"] * 3 + ["Engle LM"] * 3 + ["BDS"] * 3
    assert [r.dof for r in rows[-3:]] == [c.label for c in DEFAULT_BDS_GRID]
    assert all(0.0 <= r.p_value <= 1.0 for r in rows)
