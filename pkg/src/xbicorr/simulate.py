"""Synthetic price panels and simple processes used by tests and the demo run."""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

SERIES = ("oil", "usdmxn", "ipc")
START_DATE = "1998-02-02"


def business_dates(n, start=START_DATE):
    """``n`` consecutive weekdays starting at ``start``."""
    first = np.busday_offset(np.datetime64(start, "D"), 0, roll="forward")
    return np.busday_offset(first, np.arange(n), roll="forward")


def garch(rng, n, omega=0.05, alpha=0.10, beta=0.85, df=6, burn=500):
    """GARCH(1,1) with unit-variance Student-t innovations."""
    z = rng.standard_t(df, n + burn) / np.sqrt(df / (df - 2.0))
    e = np.empty(n + burn)
    var = omega / (1.0 - alpha - beta)
    prev = 0.0
    for t in range(n + burn):
        var = omega + alpha * prev * prev + beta * var
        prev = np.sqrt(var) * z[t]
        e[t] = prev
    return e[burn:]


def arch1(rng, n, omega=0.1, alpha=0.8, burn=200):
    z = rng.standard_normal(n + burn)
    e = np.zeros(n + burn)
    for t in range(1, n + burn):
        e[t] = np.sqrt(omega + alpha * e[t - 1] ** 2) * z[t]
    return e[burn:]


def logistic_map(x0, n, r=4.0):
    x = np.empty(n)
    x[0] = x0
    for t in range(n - 1):
        x[t + 1] = r * x[t] * (1.0 - x[t])
    return x


def _regimes(rng, n, block=28, share=0.4):
    on = rng.random(n // block + 1) < share
    return np.repeat(on, block)[:n].astype(float)


def synthetic_returns(seed=0, n_prices=4278):
    """Three coupled percentage-return series.

    The oil series drives the other two through lagged products in
    randomly switched-on blocks, on top of a common linear factor and
    GARCH volatility, so both linear correlation and episodic
    cross-bicorrelation are present.
    """
    rng = np.random.default_rng(seed)
    n = n_prices - 1
    lead = 2
    f = rng.standard_normal(n + lead)
    oil = garch(rng, n + lead)
    oil = 0.8 * oil + 0.6 * f
    u = garch(rng, n + lead)
    i = garch(rng, n + lead)
    prod = np.zeros(n + lead)
    prod[lead:] = oil[lead - 1 : -1] * oil[: -lead]
    prod /= prod.std()
    reg_u = _regimes(rng, n + lead, share=0.35)
    reg_i = _regimes(rng, n + lead, share=0.6)
    usd = 0.4 * f + 0.8 * u + 0.9 * reg_u * prod
    ipc = 0.6 * f + 0.7 * i + 1.2 * reg_i * prod
    usd[1:] += 0.1 * usd[:-1]
    out = {
        "oil": 2.45 * oil[lead:] / oil.std(),
        "usdmxn": 0.63 * usd[lead:] / usd.std(),
        "ipc": 1.51 * ipc[lead:] / ipc.std(),
    }
    return business_dates(n_prices), out


def synthetic_prices(seed=0, n_prices=4278):
    dates, rets = synthetic_returns(seed, n_prices)
    start = {"oil": 10.0, "usdmxn": 8.5, "ipc": 4500.0}
    prices = {}
    for name, r in rets.items():
        p = np.empty(n_prices)
        p[0] = start[name]
        p[1:] = start[name] * np.exp(np.cumsum(r) / 100.0)
        prices[name] = p
    return dates, prices


def write_dataset(out_dir, seed=0, n_prices=4278):
    """Write one ``date,price`` CSV per synthetic series; returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    dates, prices = synthetic_prices(seed, n_prices)
    paths = []
    for name in SERIES:
        path = out_dir / f"{name}.csv"
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["date", "price"])
            for d, p in zip(dates, prices[name]):
                w.writerow([str(d), f"{p:.10g}"])
        paths.append(path)
    return paths
