"""End-to-end run: load, describe, unit-root and nonlinearity tests, VAR
pre-whitening and the windowed cross-bicorrelation scan, plus the writers
for the JSON report, per-table CSVs, text tables and plot data.

All floats written anywhere are rounded to 6 significant digits first, so
the text tables and the JSON report carry identical numbers and repeated
runs are byte-identical.
"""
from __future__ import annotations

import csv
import itertools
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bicorr, ingest, nonlin, prewhiten, summary, unitroot
from .errors import ConfigError, DataError

logger = logging.getLogger(__name__)

STAGES = ("describe", "unitroot", "nonlin", "xbicorr")
FORMATS = ("json", "csv", "table")
PLOT_HEADER = ["window_start", "window_end", "direction", "one_minus_p", "significant"]


@dataclass
class PipelineConfig:
    inputs: list
    schema: ingest.CsvSchema = field(default_factory=ingest.CsvSchema)
    pairs: list | None = None
    c: float = 0.4
    alpha: float = 0.05
    lags: tuple = nonlin.DEFAULT_LAGS
    bds_grid: tuple = nonlin.DEFAULT_BDS_GRID
    pmax: int = 10
    exclusion: str = "dof"
    directions: tuple = bicorr.DIRECTIONS
    combine: str = "either"
    lag_depth: int | None = None
    out_dir: Path | None = None
    formats: tuple = FORMATS
    svg: bool = False
    stages: tuple = STAGES

    def validate(self):
        """Check everything that can be checked before touching the data."""
        if not self.inputs:
            raise ConfigError("at least one --input is required")
        names = [n for n, _ in self.inputs]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate input names: {names}")
        if any(s not in STAGES for s in self.stages):
            raise ConfigError(f"unknown stage in {self.stages}")
        bad = [f for f in self.formats if f not in FORMATS]
        if bad:
            raise ConfigError(f"unknown output format(s) {bad}; choose from {FORMATS}")
        if self.pmax < 0:
            raise ConfigError("--pmax must be non-negative")
        for q in self.lags:
            if int(q) != q or q < 1:
                raise ConfigError(f"lags must be positive integers, got {q!r}")
        # raises on a bad c, alpha, rule, direction or combine setting
        self.xbicorr_config()
        if "xbicorr" in self.stages:
            if len(self.inputs) < 2:
                raise ConfigError("the cross-bicorrelation stage needs at least two inputs")
            for a, b in self.resolved_pairs():
                for n in (a, b):
                    if n not in names:
                        raise ConfigError(f"pair refers to unknown series {n!r}")
                if a == b:
                    raise ConfigError(f"pair {a},{b} repeats a series")
        return self

    def resolved_pairs(self):
        if self.pairs:
            return [tuple(p) for p in self.pairs]
        return list(itertools.combinations([n for n, _ in self.inputs], 2))

    def xbicorr_config(self):
        return bicorr.XBicorrConfig(
            self.c, self.alpha, self.exclusion, tuple(self.directions), self.combine, self.lag_depth
        )

    def to_dict(self):
        return {
            "inputs": [{"name": n, "file": Path(p).name} for n, p in self.inputs],
            "c": self.c,
            "alpha": self.alpha,
            "lags": list(self.lags),
            "bds_grid": [{"m": g.m, "eps_multiplier": g.eps_multiplier} for g in self.bds_grid],
            "pmax": self.pmax,
            "exclusion": self.exclusion,
            "directions": list(self.directions),
            "combine": self.combine,
            "lag_depth": self.lag_depth,
            "stages": list(self.stages),
        }


def round6(obj):
    """Round every float in a nested structure to 6 significant digits; NaN becomes None."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not math.isfinite(v):
            return None
        return float(f"{v:.6g}")
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): round6(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round6(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [round6(v) for v in obj.tolist()]
    return obj


def fmt(v):
    if v is None:
        return "NA"
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _load(config):
    out = []
    for name, path in config.inputs:
        try:
            out.append(ingest.load_price_csv(path, config.schema, name=name))
        except FileNotFoundError as exc:
            raise DataError(str(exc)) from None
        except DataError as exc:
            if str(path) in str(exc):
                raise
            raise DataError(f"{path}: {exc}") from exc
    return out


def _series_block(name, prices, rets, config):
    block = {"name": name, "n_prices": len(prices), "n_returns": len(rets)}
    if "describe" in config.stages:
        block["summary"] = summary.describe(rets).to_dict()
    if "unitroot" in config.stages:
        block["adf"] = unitroot.adf(rets).to_dict()
    if "nonlin" in config.stages:
        p = prewhiten.select_ar_order(rets, config.pmax)
        ar = prewhiten.fit_ar(rets, p)
        block["ar"] = ar.to_dict()
        block["nonlin"] = [t.to_dict() for t in nonlin.battery(ar.residuals, config.lags, config.bds_grid)]
    return block


def _pair_block(a, b, rets, config):
    ra, rb = rets[a], rets[b]
    p = prewhiten.select_var_order(ra, rb, config.pmax)
    var = prewhiten.fit_var(ra, rb, p)
    xres, yres = var.residuals
    report = bicorr.run_xbicorr(
        xres, yres, config.xbicorr_config(), dates=ra.dates[p:], names=(a, b),
        pearson_returns=summary.pearson_corr(ra.values, rb.values),
    )
    return {"var": var.to_dict(), "xbicorr": report.to_dict()}, report


def run_pipeline(config: PipelineConfig):
    """Run the configured stages; returns ``(report_dict, xbicorr_reports, series)``.

    ``report_dict`` is already rounded for output. Nothing is written to
    disk here; see ``write_outputs``.
    """
    config.validate()
    loaded = _load(config)
    if len(loaded) >= 2:
        panel = ingest.align(loaded)
        prices = {n: panel.series(n) for n in panel.names}
        dropped = panel.dropped
    else:
        prices = {loaded[0].name: loaded[0]}
        dropped = {loaded[0].name: 0}
    rets = {n: ingest.to_returns(p) for n, p in prices.items()}

    series = [_series_block(n, prices[n], rets[n], config) for n in prices]
    for blk in series:
        blk["dropped_by_alignment"] = dropped[blk["name"]]
        blk["dropped_rows"] = next(s.dropped for s in loaded if s.name == blk["name"])
    pairs, reports = [], []
    if "xbicorr" in config.stages:
        for a, b in config.resolved_pairs():
            blk, rep = _pair_block(a, b, rets, config)
            pairs.append(blk)
            reports.append(rep)
    first = next(iter(rets.values()))
    doc = {
        "config": config.to_dict(),
        "sample": {
            "first_date": str(first.dates[0]) if len(first) else None,
            "last_date": str(first.dates[-1]) if len(first) else None,
            "n_returns": len(first),
        },
        "series": series,
        "pairs": pairs,
    }
    return round6(doc), reports, (prices, rets)


# --------------------------------------------------------------------- text

def _table(headers, rows):
    cells = [[fmt(c) for c in r] for r in rows]
    widths = [max(len(h), *(len(r[i]) for r in cells)) if cells else len(h) for i, h in enumerate(headers)]
    line = "| " + " | ".join(h.ljust(w) for h, w in zip(headers, widths)) + " |"
    sep = "|-" + "-|-".join("-" * w for w in widths) + "-|"
    body = ["| " + " | ".join(c.rjust(w) for c, w in zip(r, widths)) + " |" for r in cells]
    return "\n".join([line, sep, *body])


def table1_rows(doc):
    rows = []
    for s in doc["series"]:
        if "summary" not in s:
            continue
        m = s["summary"]
        jb = m["jarque_bera"]
        rows.append([s["name"], m["n"], m["mean"], m["sd"], m["skewness"], m["kurtosis"], jb["statistic"], jb["p_value"]])
    return ["series", "observations", "mean", "sd", "skewness", "kurtosis", "jarque_bera", "jb_p_value"], rows


def table2_rows(doc):
    rows = []
    for s in doc["series"]:
        if "adf" not in s:
            continue
        a = s["adf"]
        rows.append([s["name"], a["statistic"], a["lags_used"], a["reject_at"]["0.01"], a["reject_at"]["0.05"], a["reject_at"]["0.1"]])
    return ["series", "adf_statistic", "lags", "reject_1pct", "reject_5pct", "reject_10pct"], rows


def table3_rows(doc):
    rows = []
    for s in doc["series"]:
        if "nonlin" not in s:
            continue
        for t in s["nonlin"]:
            param = f"lag {t['dof']}" if t["name"] != "BDS" else t["dof"]
            rows.append([s["name"], s["ar"]["order"], t["name"], param, t["statistic"], t["p_value"]])
    return ["series", "ar_order", "test", "parameter", "statistic", "p_value"], rows


def table4_rows(doc):
    rows = []
    for p in doc["pairs"]:
        x = p["xbicorr"]
        rows.append([
            x["plan"]["window_count"], x["plan"]["window_length"], "-".join(x["pair"]),
            p["var"]["order"], x["significant_count"], x["significant_percent"],
            x["pearson_returns"], x["pearson_residuals"],
        ])
    return ["windows_total", "window_length", "pair", "var_order", "significant_windows",
            "significant_percent", "corr_returns", "corr_residuals"], rows


def render_text(doc):
    out = []
    h, rows = table1_rows(doc)
    if rows:
        out += ["Summary statistics of returns", _table(h, rows), ""]
    h, rows = table2_rows(doc)
    if rows:
        crit = doc["series"][0]["adf"]["critical_values"]
        out += ["ADF unit-root test (constant + trend)", _table(h, rows),
                "critical values 1%/5%/10%: " + ",".join(f"{crit[k]:.2f}" for k in ("0.01", "0.05", "0.1")), ""]
    h, rows = table3_rows(doc)
    if rows:
        out += ["Nonlinearity tests on AR residuals", _table(h, rows), ""]
    h, rows = table4_rows(doc)
    if rows:
        alpha = doc["config"]["alpha"]
        out += [f"Cross-bicorrelation windows (alpha {fmt(alpha)}, combine {doc['config']['combine']})",
                _table(h, rows), ""]
    return "\n".join(out)


# ---------------------------------------------------------------- writers

def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(c) for c in r])


def plot_rows(report: bicorr.XBicorrReport):
    rows = []
    alpha = report.config.alpha
    for w in report.per_window:
        if w.degenerate:
            rows.append([str(w.start_date), str(w.end_date), w.direction, "", "false"])
            continue
        one_minus_p = round6(1.0 - w.h_xxy_pvalue)
        rows.append([str(w.start_date), str(w.end_date), w.direction, fmt(one_minus_p),
                     "true" if w.h_xxy_pvalue < alpha else "false"])
    return rows


def _svg_stem(report, path):
    wins = report.plan.window_count
    width, height, pad = 900, 300, 40
    xs = lambda k: pad + (width - 2 * pad) * (k + 0.5) / wins
    ys = lambda v: height - pad - (height - 2 * pad) * v
    sig = {str(d): v for d, v in report.epochs}
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<text x="{pad}" y="20" font-size="13">{"-".join(report.pair)}: 1 - p of significant windows</text>',
        f'<line x1="{pad}" y1="{ys(0):.1f}" x2="{width - pad}" y2="{ys(0):.1f}" stroke="black"/>',
        f'<line x1="{pad}" y1="{ys(0):.1f}" x2="{pad}" y2="{ys(1):.1f}" stroke="black"/>',
    ]
    seen = [w for w in report.per_window if w.direction == report.config.directions[0]]
    for w in seen:
        v = sig.get(str(w.start_date))
        if v is None:
            continue
        x = xs(w.window_index)
        parts.append(f'<line x1="{x:.1f}" y1="{ys(0):.1f}" x2="{x:.1f}" y2="{ys(v):.1f}" stroke="steelblue"/>')
        parts.append(f'<circle cx="{x:.1f}" cy="{ys(v):.1f}" r="2.5" fill="steelblue">'
                     f'<title>{w.start_date}: {v:.4f}</title></circle>')
    if seen:
        parts.append(f'<text x="{pad}" y="{height - 10}" font-size="11">{seen[0].start_date}</text>')
        parts.append(f'<text x="{width - pad}" y="{height - 10}" font-size="11" text-anchor="end">'
                     f'{seen[-1].start_date}</text>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")


def emit_plot_data(report: bicorr.XBicorrReport, out, svg: bool = False):
    """Write the per-window (1 - p) CSV, and optionally an SVG stem plot next to it."""
    out = Path(out)
    _write_csv(out, PLOT_HEADER, plot_rows(report))
    files = [out]
    if svg:
        svg_path = out.with_suffix(".svg")
        _svg_stem(report, svg_path)
        files.append(svg_path)
    return files


def write_outputs(doc, reports, series, config: PipelineConfig):
    """Write the requested formats into ``config.out_dir``; returns the written paths."""
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if "json" in config.formats:
        path = out / "report.json"
        path.write_text(json.dumps(doc, indent=2) + "\n")
        written.append(path)
    if "table" in config.formats:
        path = out / "report.txt"
        path.write_text(render_text(doc))
        written.append(path)
    if "csv" in config.formats:
        for name, (h, rows) in {
            "table1_summary.csv": table1_rows(doc),
            "table2_adf.csv": table2_rows(doc),
            "table3_nonlin.csv": table3_rows(doc),
            "table4_xbicorr.csv": table4_rows(doc),
        }.items():
            if rows:
                _write_csv(out / name, h, rows)
                written.append(out / name)
        prices, rets = series
        for name, p in prices.items():
            r = np.concatenate([[np.nan], rets[name].values])
            path = out / f"series_{name}.csv"
            _write_csv(path, ["date", "price", "return"],
                       [[str(d), round6(v), round6(x)] for d, v, x in zip(p.dates, p.values, r)])
            written.append(path)
        for rep in reports:
            written += emit_plot_data(rep, out / f"epochs_{rep.pair[0]}_{rep.pair[1]}.csv", config.svg)
    return written
