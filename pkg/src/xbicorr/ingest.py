"""Load dated price series from CSV, align them and convert to log returns."""
from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

import numpy as np

from .errors import (
    DataError,
    DimensionMismatch,
    EmptyIntersection,
    MalformedRow,
    NonPositivePrice,
    SeriesTooShort,
    UnsortedDates,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CsvSchema:
    date_col: str = "date"
    price_col: str = "price"
    date_format: str = "%Y-%m-%d"
    delimiter: str = ","
    strict: bool = True


def _check_dates(dates):
    if len(dates) > 1 and not np.all(dates[1:] > dates[:-1]):
        raise UnsortedDates("dates must be strictly increasing with no duplicates")


@dataclass(frozen=True)
class PriceSeries:
    name: str
    dates: np.ndarray
    values: np.ndarray
    dropped: int = 0

    def __post_init__(self):
        dates = np.asarray(self.dates, dtype="datetime64[D]")
        values = np.asarray(self.values, dtype=float)
        if dates.shape != values.shape or dates.ndim != 1:
            raise DimensionMismatch("dates and values must be 1-d and equally long")
        _check_dates(dates)
        if not np.all(np.isfinite(values) & (values > 0)):
            bad = int(np.flatnonzero(~(np.isfinite(values) & (values > 0)))[0])
            raise NonPositivePrice(bad + 1, float(values[bad]))
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class ReturnSeries:
    name: str
    dates: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dates", np.asarray(self.dates, dtype="datetime64[D]"))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.dates.shape != self.values.shape:
            raise DimensionMismatch("dates and values must be equally long")

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class AlignedPanel:
    dates: np.ndarray
    columns: dict
    dropped: dict = field(default_factory=dict)

    def __post_init__(self):
        _check_dates(self.dates)
        for name, col in self.columns.items():
            if len(col) != len(self.dates):
                raise DimensionMismatch(f"column {name!r} does not match the date vector")

    def series(self, name) -> PriceSeries:
        return PriceSeries(name, self.dates, self.columns[name])

    @property
    def names(self):
        return list(self.columns)


def load_price_csv(path, schema: CsvSchema | None = None, name: str | None = None) -> PriceSeries:
    """Read a two-column (date, price) series from a CSV file with a header.

    In strict mode any unparseable row raises; in lenient mode rows with a
    missing or unparseable price are dropped and counted in
    ``PriceSeries.dropped``. Non-positive prices and unparseable dates
    always raise.
    """
    schema = schema or CsvSchema()
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    name = name or path.stem

    dates, values = [], []
    dropped = 0
    with path.open(newline="") as fh:
        reader = csv.reader(fh, delimiter=schema.delimiter)
        header = next(reader, None)
        if header is None:
            raise DataError(f"{path}: file is empty")
        header = [h.strip() for h in header]
        try:
            di = header.index(schema.date_col)
            pi = header.index(schema.price_col)
        except ValueError:
            raise DataError(
                f"{path}: header {header} lacks columns {schema.date_col!r}/{schema.price_col!r}"
            ) from None
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) <= max(di, pi):
                if schema.strict:
                    raise MalformedRow(line, "too few fields")
                dropped += 1
                continue
            try:
                d = datetime.strptime(row[di].strip(), schema.date_format).date()
            except ValueError:
                raise MalformedRow(line, f"unparseable date {row[di]!r}") from None
            raw = row[pi].strip()
            try:
                v = float(raw)
            except ValueError:
                if schema.strict:
                    raise MalformedRow(line, f"unparseable price {raw!r}") from None
                dropped += 1
                continue
            if not (math.isfinite(v) and v > 0):
                raise NonPositivePrice(line, raw)
            dates.append(d)
            values.append(v)

    if not values:
        raise DataError(f"{path}: no price rows")
    if dropped:
        logger.warning("%s: dropped %d rows with missing or unparseable prices", path, dropped)
    d = np.array(dates, dtype="datetime64[D]")
    _check_dates(d)
    return PriceSeries(name, d, np.array(values), dropped=dropped)


def align(series) -> AlignedPanel:
    """Restrict several price series to the dates they all share."""
    series = list(series)
    if len(series) < 2:
        raise DataError("align needs at least two series")
    names = [s.name for s in series]
    if len(set(names)) != len(names):
        raise DataError(f"duplicate series names: {names}")
    common = series[0].dates
    for s in series[1:]:
        common = np.intersect1d(common, s.dates, assume_unique=True)
    if common.size == 0:
        raise EmptyIntersection("the series share no dates")
    columns, dropped = {}, {}
    for s in series:
        mask = np.isin(s.dates, common, assume_unique=True)
        columns[s.name] = s.values[mask]
        dropped[s.name] = int(len(s) - mask.sum())
    return AlignedPanel(common, columns, dropped)


def to_returns(p: PriceSeries) -> ReturnSeries:
    """Continuously compounded percentage returns, 100 * diff(ln p)."""
    if len(p) < 2:
        raise SeriesTooShort("need at least two prices to form a return")
    r = 100.0 * np.diff(np.log(p.values))
    return ReturnSeries(p.name, p.dates[1:], r)
