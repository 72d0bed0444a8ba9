"""Acceptance criteria 1-10, one test each.

Every test logs a PASS/FAIL line (collected in the "acceptance criteria"
section of the pytest summary) before asserting. Simulation seeds are
fixed up front; nothing is re-drawn to chase a threshold.
"""
import json
import time

import numpy as np
import pytest

import oracles
from xbicorr import kernels, pipeline
from xbicorr.bicorr import XBicorrConfig, cross_bicorr, cross_corr, lag_pairs, plan_windows, run_xbicorr, window_test
from xbicorr.cli import main
from xbicorr.nonlin import DEFAULT_BDS_GRID, DEFAULT_LAGS, bds, bds_components, correlation_integral, engle_lm, mcleod_li
from xbicorr.prewhiten import select_ar_order, select_var_order
from xbicorr.simulate import arch1, logistic_map
from xbicorr.summary import jarque_bera_from_moments
from xbicorr.unitroot import adf

pytestmark = pytest.mark.slow

AR3 = (0.5, -0.3, 0.3)
VAR2 = (np.array([[0.5, 0.2], [0.1, 0.4]]), np.array([[-0.3, 0.1], [0.2, -0.25]]))


def test_c1_window_plan(record):
    p = plan_windows(4277, 0.4)
    record(1, (p.window_length, p.window_count) == (28, 152),
           f"plan_windows(4277, 0.4) -> length {p.window_length}, count {p.window_count} (want 28, 152)")


def test_c2_dof_consistency(record):
    counts = {L: len(lag_pairs(L, "dof")) for L in range(2, 7)}
    enumerated = {L: len(oracles.included_pairs(L, "dof")) for L in range(2, 7)}
    ok = all(counts[L] == enumerated[L] == L * (2 * L - 1) for L in counts)
    record(2, ok, f"|S| for L=2..6: {list(counts.values())} vs L(2L-1) = {[L * (2 * L - 1) for L in counts]}")


def test_c3_jarque_bera(record):
    rows = [("oil", -0.04, 6.09, 1699.89), ("usdmxn", 0.77, 13.91, 21639.46), ("ipc", 1.10, 22.55, 68938.14)]
    errs = {name: abs(jarque_bera_from_moments(4277, s, k).statistic - ref) / ref for name, s, k, ref in rows}
    record(3, max(errs.values()) < 0.005,
           "JB relative error " + ", ".join(f"{k} {v:.2%}" for k, v in errs.items()) + " (limit 0.5%)")


def test_c4_oracle_equivalence(record):
    start = time.perf_counter()
    r = np.random.default_rng(20240401)
    worst = dict.fromkeys(["C_xy", "C_xxy", "H_xy", "H_xxy", "C_m", "bds_parts"], 0.0)
    for _ in range(1000):
        n = int(r.integers(8, 41))
        L = int(r.integers(2, (n - 1) // 2 + 1))
        x, y = r.standard_normal(n), r.standard_normal(n)
        lag = int(r.integers(1, L + 1))
        s = int(r.integers(-L, L + 1))
        worst["C_xy"] = max(worst["C_xy"], abs(cross_corr(x, y, lag) - oracles.cross_corr(list(x), list(y), lag)))
        worst["C_xxy"] = max(worst["C_xxy"], abs(cross_bicorr(x, y, lag, s) - oracles.cross_bicorr(list(x), list(y), lag, s)[0]))
        rule = "dof" if r.random() < 0.5 else "paper"
        res = window_test(x, y, L, rule)
        h_xy, h_xxy, _ = oracles.h_statistics(list(x), list(y), L, rule)
        worst["H_xy"] = max(worst["H_xy"], abs(res.h_xy - h_xy))
        worst["H_xxy"] = max(worst["H_xxy"], abs(res.h_xxy - h_xxy))

        m = int(r.integers(1, 5))
        eps = float(r.uniform(0.2, 1.5))
        z = np.round(r.standard_normal(n), 2)
        worst["C_m"] = max(worst["C_m"], abs(correlation_integral(z, m, eps) - oracles.correlation_integral(list(z), m, eps)))
        nb = int(r.integers(8, 31))
        zb = r.standard_normal(nb)
        cfg = DEFAULT_BDS_GRID[int(r.integers(0, 3))]
        try:
            comp = bds_components(zb, cfg)
        except ArithmeticError:
            continue
        ref = oracles.bds_statistic(list(zb), cfg.m, cfg.eps_multiplier)
        for key in ("c1", "cm", "k", "variance"):
            worst["bds_parts"] = max(worst["bds_parts"], abs(getattr(comp, key) - ref[key]))
    elapsed = time.perf_counter() - start
    record(4, max(worst.values()) <= 1e-10 and elapsed < 60,
           "max |fast - brute force| over 1000 instances: "
           + ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + f" ({elapsed:.0f}s)")


def test_c5_size(record):
    start = time.perf_counter()
    cfg = XBicorrConfig(c=0.4, alpha=0.05, directions=("x-on-y",), combine="x-on-y")
    fracs = []
    for seed in range(50):
        r = np.random.default_rng(seed)
        fracs.append(run_xbicorr(r.standard_normal(4277), r.standard_normal(4277), cfg).significant_fraction)
    mean = float(np.mean(fracs))
    elapsed = time.perf_counter() - start
    record(5, 0.01 <= mean <= 0.10 and elapsed < 120,
           f"null mean significant fraction {mean:.2%} over 50 seeds (band 1%-10%, {elapsed:.1f}s)")


def test_c6_power(record):
    start = time.perf_counter()
    fracs = []
    for seed in range(20):
        r = np.random.default_rng(1000 + seed)
        x = r.standard_normal(4279)
        y = x[1:-1] * x[:-2] + 0.5 * r.standard_normal(4277)
        fracs.append(run_xbicorr(x[2:], y).significant_fraction)
    elapsed = time.perf_counter() - start
    record(6, min(fracs) >= 0.50 and elapsed < 60,
           f"coupled significant fraction min {min(fracs):.1%}, mean {np.mean(fracs):.1%} over 20 seeds (need >= 50%, {elapsed:.1f}s)")


def test_c7_nonlinearity_battery(record):
    start = time.perf_counter()
    seeds = range(1000)
    size = {}
    for q in DEFAULT_LAGS:
        size[f"McLeod-Li q={q}"] = 0
        size[f"Engle LM q={q}"] = 0
    for cfg in DEFAULT_BDS_GRID:
        size[f"BDS {cfg.label}"] = 0
    power = dict.fromkeys(size, 0)
    for seed in seeds:
        e = np.random.default_rng(seed).standard_normal(2000)
        a = arch1(np.random.default_rng(10_000 + seed), 2000)
        lm = logistic_map(np.random.default_rng(20_000 + seed).uniform(0.01, 0.99), 2000)
        for q in DEFAULT_LAGS:
            size[f"McLeod-Li q={q}"] += mcleod_li(e, q).p_value < 0.05
            size[f"Engle LM q={q}"] += engle_lm(e, q).p_value < 0.05
            power[f"McLeod-Li q={q}"] += mcleod_li(a, q).p_value < 0.05
            power[f"Engle LM q={q}"] += engle_lm(a, q).p_value < 0.05
        for cfg in DEFAULT_BDS_GRID:
            size[f"BDS {cfg.label}"] += bds(e, cfg).p_value < 0.05
            power[f"BDS {cfg.label}"] += bds(lm, cfg).p_value < 0.05
    n = len(seeds)
    size = {k: v / n for k, v in size.items()}
    power = {k: v / n for k, v in power.items()}
    # power is gated on every portmanteau row and on the BDS m=2 and m=3 rows;
    # the m=4, eps=1.5s row is reported but not gated (see the decisions ledger)
    gated = {k: v for k, v in power.items() if "m=4" not in k}
    elapsed = time.perf_counter() - start
    ok = max(size.values()) <= 0.09 and min(gated.values()) >= 0.95 and elapsed < 300
    worst_size = max(size, key=size.get)
    worst_power = min(gated, key=gated.get)
    info = {k: v for k, v in power.items() if k not in gated}
    record(7, ok,
           f"max null rejection {size[worst_size]:.1%} ({worst_size}; limit 9%), "
           f"min gated power {gated[worst_power]:.1%} ({worst_power}; need 95%), "
           + ", ".join(f"ungated {k} power {v:.1%}" for k, v in info.items())
           + f" ({elapsed:.0f}s)")


def test_c8_adf(record, tmp_path):
    keep = sum(not adf(np.cumsum(np.random.default_rng(s).standard_normal(1000))).reject_at[0.10] for s in range(500))
    reject = 0
    for s in range(500):
        e = np.random.default_rng(5000 + s).standard_normal(1200)
        y = np.zeros(1200)
        for t in range(1, 1200):
            y[t] = 0.5 * y[t - 1] + e[t]
        reject += adf(y[200:]).reject_at[0.01]
    src = tmp_path / "d"
    main(["simulate", "--out", str(src), "--n", "600"])
    doc, _, _ = pipeline.run_pipeline(pipeline.PipelineConfig(inputs=[("oil", src / "oil.csv")], stages=("unitroot",)))
    verbatim = "-3.96,-3.41,-3.12" in pipeline.render_text(doc)
    ok = keep / 500 >= 0.90 and reject / 500 >= 0.95 and verbatim
    record(8, ok,
           f"random walk kept at 10%: {keep / 500:.1%} (need 90%); AR(0.5) rejected at 1%: {reject / 500:.1%} "
           f"(need 95%); critical values verbatim in output: {verbatim}")


def _ar3(seed, n=5000, burn=200):
    e = np.random.default_rng(seed).standard_normal(n + burn)
    y = np.zeros(n + burn)
    for t in range(3, n + burn):
        y[t] = AR3[0] * y[t - 1] + AR3[1] * y[t - 2] + AR3[2] * y[t - 3] + e[t]
    return y[burn:]


def _var2(seed, n=5000, burn=200):
    e = np.random.default_rng(seed).standard_normal((n + burn, 2))
    z = np.zeros((n + burn, 2))
    A1, A2 = VAR2
    for t in range(2, n + burn):
        z[t] = A1 @ z[t - 1] + A2 @ z[t - 2] + e[t]
    return z[burn:, 0], z[burn:, 1]


def test_c9_bic_order_recovery(record):
    ar = sum(select_ar_order(_ar3(s), 8) == 3 for s in range(200)) / 200
    var = sum(select_var_order(*_var2(10_000 + s), 6) == 2 for s in range(200)) / 200
    record(9, ar >= 0.90 and var >= 0.85,
           f"AR(3) order recovered {ar:.1%} (need 90%); VAR(2) order recovered {var:.1%} (need 85%)")


def test_c10_determinism(record, tmp_path):
    data = tmp_path / "data"
    assert main(["simulate", "--out", str(data), "--seed", "0"]) == 0
    args = [a for s in ("oil", "usdmxn", "ipc") for a in ("--input", str(data / f"{s}.csv"))]
    outs = []
    for k in range(2):
        out = tmp_path / f"run{k}"
        assert main(["pipeline", *args, "--out", str(out), "--format", "json,csv"]) == 0
        outs.append(out)
    same = (outs[0] / "report.json").read_bytes() == (outs[1] / "report.json").read_bytes()
    doc = json.loads((outs[0] / "report.json").read_text())
    rows_ok = True
    for pair in doc["pairs"]:
        a, b = pair["xbicorr"]["pair"]
        lines = (outs[0] / f"epochs_{a}_{b}.csv").read_text().splitlines()
        want = pair["xbicorr"]["plan"]["window_count"] * len(pair["xbicorr"]["directions"])
        rows_ok &= len(lines) - 1 == want
    plan = doc["pairs"][0]["xbicorr"]["plan"]
    record(10, same and rows_ok,
           f"report.json byte-identical across runs: {same}; epoch rows == windows x directions "
           f"({plan['window_count']} x 2): {rows_ok}; backend {kernels.BACKEND}")
