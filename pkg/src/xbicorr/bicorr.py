"""Windowed cross-correlation and cross-bicorrelation tests.

A pair of (pre-whitened) series is cut into non-overlapping windows of
length ``n_w = floor(N**c)``. Inside each window both series are
standardised and two portmanteau statistics are formed for lags up to L:

    H_xy  = sum_{r=1..L} (n_w - r) * C_xy(r)^2                  ~ chi2(L)
    H_xxy = sum_{(r, s) in S} n(r, s) * C_xxy(r, s)^2           ~ chi2(|S|)

with C_xy(r) the mean of x(t) y(t+r) and C_xxy(r, s) the mean of
x(t) x(t+r) y(t+s), each over the n(r, s) values of t for which every
index falls inside the window. The lag set S has r in 1..L and s in
-L..L minus an exclusion band (see ``lag_pairs``). Windows whose H_xxy
p-value falls below alpha are the detected epochs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import (
    BadExponent,
    ConfigError,
    DegenerateWindow,
    DimensionMismatch,
    LagTooLarge,
    SeriesTooShort,
)
from .statmath import chi2_sf
from .summary import pearson_corr

RULES = ("dof", "paper")
DIRECTIONS = ("x-on-y", "y-on-x")
COMBINE = ("either", "both") + DIRECTIONS
MIN_TOTAL_N = 64


def _floor_pow(n, c):
    v = float(n) ** c
    k = math.floor(v)
    if math.isclose(v, k + 1, rel_tol=0.0, abs_tol=1e-9):
        k += 1
    return int(k)


def lag_pairs(L: int, rule: str = "dof") -> list:
    """The (r, s) grid summed in H_xxy.

    ``"dof"`` drops s = 0 and s = r, leaving exactly L(2L - 1) pairs.
    ``"paper"`` drops every pair with r - s in {-1, 0, 1}, which leaves
    2L^2 - 2L + 1 pairs.
    """
    if rule not in RULES:
        raise ConfigError(f"unknown exclusion rule {rule!r}; expected one of {RULES}")
    out = []
    for r in range(1, L + 1):
        for s in range(-L, L + 1):
            if rule == "dof" and (s == 0 or s == r):
                continue
            if rule == "paper" and abs(r - s) <= 1:
                continue
            out.append((r, s))
    return out


def n_terms(n: int, r: int, s: int) -> int:
    """Number of t with t, t + r and t + s all inside a window of length n."""
    return n - (max(r, s, 0) - min(0, s))


@dataclass(frozen=True)
class WindowPlan:
    total_n: int
    c: float
    window_length: int
    window_count: int
    lag_depth: int
    exclusion_rule: str = "dof"

    def bounds(self, k):
        start = k * self.window_length
        return start, start + self.window_length

    def to_dict(self):
        return {
            "total_n": self.total_n,
            "c": self.c,
            "window_length": self.window_length,
            "window_count": self.window_count,
            "lag_depth": self.lag_depth,
            "exclusion_rule": self.exclusion_rule,
            "dof_xy": self.lag_depth,
            "dof_xxy": len(lag_pairs(self.lag_depth, self.exclusion_rule)),
        }


def plan_windows(total_n: int, c: float, lag_depth: int | None = None, rule: str = "dof") -> WindowPlan:
    """Partition ``total_n`` points into floor(total_n / n_w) windows of n_w = floor(total_n**c).

    The trailing partial window is dropped. The lag depth defaults to
    max(2, floor(n_w**c)).
    """
    if not (0.0 < c < 0.5):
        raise BadExponent(f"exponent c must lie in the open interval (0, 0.5), got {c}")
    if rule not in RULES:
        raise ConfigError(f"unknown exclusion rule {rule!r}")
    total_n = int(total_n)
    if total_n < MIN_TOTAL_N:
        raise SeriesTooShort(f"need at least {MIN_TOTAL_N} observations, got {total_n}")
    n_w = _floor_pow(total_n, c)
    if lag_depth is None:
        lag_depth = max(2, _floor_pow(n_w, c))
    if lag_depth < 2 or not lag_depth < n_w / 2:
        raise LagTooLarge(f"lag depth {lag_depth} must satisfy 2 <= L < n_w/2 = {n_w / 2}")
    return WindowPlan(total_n, float(c), n_w, total_n // n_w, int(lag_depth), rule)


def standardize_window(w) -> np.ndarray:
    """Centre to mean 0 and scale to sample (n - 1) standard deviation 1."""
    w = np.asarray(w, dtype=float)
    if w.size < 4:
        raise SeriesTooShort("a window needs at least 4 observations")
    sd = float(np.std(w, ddof=1))
    if not sd > 0:
        raise DegenerateWindow("window has zero variance")
    return (w - w.mean()) / sd


def _standardize_rows(W):
    mu = W.mean(axis=1, keepdims=True)
    sd = W.std(axis=1, ddof=1, keepdims=True)
    ok = sd[:, 0] > 0
    Z = np.zeros_like(W)
    Z[ok] = (W[ok] - mu[ok]) / sd[ok]
    return Z, ok


def cross_corr(x_w, y_w, r: int) -> float:
    """Mean of x(t) * y(t + r) over the window."""
    x_w = np.asarray(x_w, dtype=float)
    y_w = np.asarray(y_w, dtype=float)
    n = len(x_w)
    if len(y_w) != n:
        raise DimensionMismatch("windows differ in length")
    if not 1 <= r < n:
        raise LagTooLarge(f"lag {r} outside 1..{n - 1}")
    return float(x_w[: n - r] @ y_w[r:]) / (n - r)


def cross_bicorr(x_w, y_w, r: int, s: int) -> float:
    """Mean of x(t) * x(t + r) * y(t + s) over every t keeping all indices in range."""
    x_w = np.asarray(x_w, dtype=float)
    y_w = np.asarray(y_w, dtype=float)
    n = len(x_w)
    if len(y_w) != n:
        raise DimensionMismatch("windows differ in length")
    if r < 1:
        raise LagTooLarge("r must be at least 1")
    count = n_terms(n, r, s)
    if count <= 0:
        raise LagTooLarge(f"no valid t for r={r}, s={s} in a window of length {n}")
    lo = max(0, -s)
    hi = lo + count
    return float(np.sum(x_w[lo:hi] * x_w[lo + r : hi + r] * y_w[lo + s : hi + s])) / count


def _h_stats(Xs, Ys, L, pairs):
    """H_xy and H_xxy for every row of pre-standardised window matrices."""
    n = Xs.shape[1]
    cxy, cxxy = kernels.window_lag_stats(Xs, Ys, L, np.asarray(pairs, dtype=np.intp))
    w_xy = n - np.arange(1, L + 1)
    w_xxy = np.array([n_terms(n, r, s) for r, s in pairs], dtype=float)
    return (cxy**2) @ w_xy, (cxxy**2) @ w_xxy


@dataclass(frozen=True)
class WindowTestResult:
    window_index: int
    start_date: object
    end_date: object
    h_xy: float
    h_xy_dof: int
    h_xy_pvalue: float
    h_xxy: float
    h_xxy_dof: int
    h_xxy_pvalue: float
    direction: str = "x-on-y"
    degenerate: bool = False

    def to_dict(self):
        return {
            "window": self.window_index,
            "start": str(self.start_date),
            "end": str(self.end_date),
            "direction": self.direction,
            "degenerate": self.degenerate,
            "h_xy": self.h_xy,
            "h_xy_dof": self.h_xy_dof,
            "h_xy_pvalue": self.h_xy_pvalue,
            "h_xxy": self.h_xxy,
            "h_xxy_dof": self.h_xxy_dof,
            "h_xxy_pvalue": self.h_xxy_pvalue,
        }


def _check_direction(direction):
    if direction not in DIRECTIONS:
        raise ConfigError(f"direction must be one of {DIRECTIONS}, got {direction!r}")


def window_test(
    x_w, y_w, L: int, rule: str = "dof", direction: str = "x-on-y", index: int = 0,
    start_date=None, end_date=None,
) -> WindowTestResult:
    """Second- and third-order tests on one window.

    ``direction="x-on-y"`` uses C_xy and C_xxy; ``"y-on-x"`` swaps the roles.
    Raises ``DegenerateWindow`` when either window is constant.
    """
    _check_direction(direction)
    x_w = np.asarray(x_w, dtype=float)
    y_w = np.asarray(y_w, dtype=float)
    n = len(x_w)
    if len(y_w) != n:
        raise DimensionMismatch("windows differ in length")
    if L < 2 or not L < n / 2:
        raise LagTooLarge(f"lag depth {L} must satisfy 2 <= L < {n / 2}")
    xs, ys = standardize_window(x_w), standardize_window(y_w)
    if direction == "y-on-x":
        xs, ys = ys, xs
    pairs = lag_pairs(L, rule)
    h_xy, h_xxy = _h_stats(xs[None, :], ys[None, :], L, pairs)
    h_xy, h_xxy = float(h_xy[0]), float(h_xxy[0])
    dof = len(pairs)
    return WindowTestResult(
        index, start_date, end_date,
        h_xy, L, chi2_sf(h_xy, L),
        h_xxy, dof, chi2_sf(h_xxy, dof),
        direction,
    )


@dataclass(frozen=True)
class XBicorrConfig:
    c: float = 0.4
    alpha: float = 0.05
    rule: str = "dof"
    directions: tuple = DIRECTIONS
    combine: str = "either"
    lag_depth: int | None = None

    def __post_init__(self):
        if not (0.0 < self.c < 0.5):
            raise BadExponent(f"exponent c must lie in the open interval (0, 0.5), got {self.c}")
        if not (0.0 < self.alpha < 1.0):
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.rule not in RULES:
            raise ConfigError(f"unknown exclusion rule {self.rule!r}")
        dirs = tuple(self.directions)
        if not dirs or any(d not in DIRECTIONS for d in dirs) or len(set(dirs)) != len(dirs):
            raise ConfigError(f"directions must be a non-empty subset of {DIRECTIONS}")
        object.__setattr__(self, "directions", dirs)
        if self.combine not in COMBINE:
            raise ConfigError(f"combine must be one of {COMBINE}")
        if self.combine in DIRECTIONS and self.combine not in dirs:
            raise ConfigError(f"combine={self.combine!r} but that direction is not run")


@dataclass(frozen=True)
class XBicorrReport:
    pair: tuple
    plan: WindowPlan
    config: XBicorrConfig
    per_window: list
    significant_count: int
    significant_fraction: float
    pearson: float
    epochs: list
    degenerate_windows: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    xy_counts: dict = field(default_factory=dict)
    pearson_returns: float | None = None

    @property
    def tested_windows(self):
        return self.plan.window_count - len(self.degenerate_windows)

    def window_results(self, direction):
        return [w for w in self.per_window if w.direction == direction]

    def to_dict(self):
        return {
            "pair": list(self.pair),
            "plan": self.plan.to_dict(),
            "alpha": self.config.alpha,
            "directions": list(self.config.directions),
            "combine": self.config.combine,
            "significant_count": self.significant_count,
            "significant_fraction": self.significant_fraction,
            "significant_percent": 100.0 * self.significant_fraction,
            "counts_by_rule": dict(self.counts),
            "second_order_counts": dict(self.xy_counts),
            "pearson_residuals": self.pearson,
            "pearson_returns": self.pearson_returns,
            "degenerate_windows": list(self.degenerate_windows),
            "epochs": [{"start": str(d), "one_minus_p": v} for d, v in self.epochs],
            "windows": [w.to_dict() for w in self.per_window],
        }


def _combined_pvalues(pvals, rule, run_idx):
    """Per-window p-values under a combination rule; rows of ``pvals`` follow DIRECTIONS."""
    if rule in DIRECTIONS:
        return pvals[DIRECTIONS.index(rule)]
    reduce = np.min if rule == "either" else np.max
    return reduce(pvals[run_idx], axis=0)


def run_xbicorr(
    x_res, y_res, config: XBicorrConfig | None = None, dates=None, names=("x", "y"),
    pearson_returns=None,
) -> XBicorrReport:
    """Run the windowed tests over two equally long residual series.

    A window is significant when its H_xxy p-value is below ``alpha``,
    combined over directions by ``config.combine``: ``"either"`` (minimum
    p), ``"both"`` (maximum p) or a single direction. Counts under every
    applicable combination rule are kept in ``report.counts``. Windows in
    which either series is constant are skipped and left out of the
    significant fraction's denominator.
    """
    config = config or XBicorrConfig()
    x = np.asarray(getattr(x_res, "values", x_res), dtype=float)
    y = np.asarray(getattr(y_res, "values", y_res), dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionMismatch("residual series must be 1-d and equally long")
    if dates is None:
        dates = getattr(x_res, "dates", None)
    if dates is None:
        dates = np.arange(len(x))
    dates = np.asarray(dates)
    if len(dates) != len(x):
        raise DimensionMismatch("dates do not match the series length")

    plan = plan_windows(len(x), config.c, config.lag_depth, config.rule)
    n_w, K, L = plan.window_length, plan.window_count, plan.lag_depth
    used = n_w * K
    Xw = x[:used].reshape(K, n_w)
    Yw = y[:used].reshape(K, n_w)
    Xs, okx = _standardize_rows(Xw)
    Ys, oky = _standardize_rows(Yw)
    ok = okx & oky
    degenerate = [int(k) for k in np.flatnonzero(~ok)]

    pairs = lag_pairs(L, config.rule)
    dof = len(pairs)
    starts = dates[:used:n_w]
    ends = dates[n_w - 1 : used : n_w]

    pxxy = np.full((len(DIRECTIONS), K), np.nan)
    pxy = np.full((len(DIRECTIONS), K), np.nan)
    per_window = []
    for direction in config.directions:
        a, b = (Xs, Ys) if direction == "x-on-y" else (Ys, Xs)
        h_xy, h_xxy = _h_stats(a[ok], b[ok], L, pairs)
        h_xy_full = np.full(K, np.nan)
        h_xxy_full = np.full(K, np.nan)
        h_xy_full[ok] = h_xy
        h_xxy_full[ok] = h_xxy
        d = DIRECTIONS.index(direction)
        for k in range(K):
            if ok[k]:
                pxy[d, k] = chi2_sf(h_xy_full[k], L)
                pxxy[d, k] = chi2_sf(h_xxy_full[k], dof)
            per_window.append(
                WindowTestResult(
                    k, starts[k], ends[k],
                    float(h_xy_full[k]), L, float(pxy[d, k]),
                    float(h_xxy_full[k]), dof, float(pxxy[d, k]),
                    direction, not bool(ok[k]),
                )
            )

    run_idx = [DIRECTIONS.index(d) for d in config.directions]
    rules = list(config.directions) + (["either", "both"] if len(run_idx) == 2 else [])
    counts, xy_counts = {}, {}
    for rule in rules:
        counts[rule] = int(np.sum(_combined_pvalues(pxxy, rule, run_idx)[ok] < config.alpha))
        xy_counts[rule] = int(np.sum(_combined_pvalues(pxy, rule, run_idx)[ok] < config.alpha))

    # with a single direction "either" and "both" reduce to that direction
    combine = config.combine if config.combine in rules else config.directions[0]
    pcomb = _combined_pvalues(pxxy, combine, run_idx)
    sig = ok & (np.nan_to_num(pcomb, nan=1.0) < config.alpha)
    epochs = [(starts[k], float(1.0 - pcomb[k])) for k in np.flatnonzero(sig)]
    tested = int(ok.sum())
    count = int(sig.sum())
    return XBicorrReport(
        tuple(names),
        plan,
        config,
        per_window,
        count,
        count / tested if tested else 0.0,
        pearson_corr(x, y),
        epochs,
        degenerate,
        counts,
        xy_counts,
        pearson_returns,
    )
