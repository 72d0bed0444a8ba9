"""Detect epochs of nonlinear co-movement between pairs of return series."""

__version__ = "0.1.0"

from .bicorr import (
    WindowPlan,
    WindowTestResult,
    XBicorrConfig,
    XBicorrReport,
    cross_bicorr,
    cross_corr,
    lag_pairs,
    plan_windows,
    run_xbicorr,
    standardize_window,
    window_test,
)
from .ingest import AlignedPanel, CsvSchema, PriceSeries, ReturnSeries, align, load_price_csv, to_returns
from .kernels import BACKEND
from .nonlin import BdsConfig, bds, correlation_integral, engle_lm, mcleod_li
from .prewhiten import ArFit, VarFit, fit_ar, fit_var, select_ar_order, select_var_order
from .statmath import OlsFit, chi2_sf, ln_gamma, normal_sf, ols
from .summary import SummaryStats, TestResult, describe, pearson_corr
from .unitroot import AdfResult, adf
