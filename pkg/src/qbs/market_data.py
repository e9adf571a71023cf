"""CSV ingestion, calendar alignment and run configuration."""
from __future__ import annotations

import csv
import datetime as dt
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence

from .errors import InputError, NegativeVolatilityError
from .paths import TRADING_DAYS_PER_YEAR, VolatilityPath
from .paths import accumulated_variance  # noqa: F401  (re-exported)
from .pricing import KMode
from .volatility import BetaTable, sigma_from_beta_vix

SERIES_SCHEMA = ("date", "value")
BETA_SCHEMA = ("ticker", "beta")
DEFAULT_RATE = 0.0008


def bundled_path(*parts: str) -> Path:
    """Filesystem path of a file shipped in the package's data directory."""
    return Path(str(resources.files("qbs").joinpath("data", *parts)))


def _check_date(text: str, where: str) -> str:
    try:
        dt.date.fromisoformat(text)
    except ValueError:
        raise InputError(f"{where}: not an ISO-8601 date: {text!r}") from None
    return text


@dataclass(frozen=True)
class OptionSpec:
    ticker: str
    strike: float
    issuance_date: str
    maturity_date: str

    def __post_init__(self):
        if not (math.isfinite(self.strike) and self.strike > 0.0):
            raise InputError(f"strike must be > 0, got {self.strike!r}")
        _check_date(self.issuance_date, "issuance date")
        _check_date(self.maturity_date, "maturity date")
        if not self.issuance_date < self.maturity_date:
            raise InputError(
                f"maturity {self.maturity_date} is not after issuance {self.issuance_date}")


@dataclass(frozen=True)
class DatedSeries:
    points: tuple[tuple[str, float], ...]
    name: str = "series"

    def __post_init__(self):
        object.__setattr__(self, "points", tuple((d, float(v)) for d, v in self.points))
        for i, (d, v) in enumerate(self.points):
            if not math.isfinite(v):
                raise InputError(f"{self.name}: non-finite value on {d}")
            if i and not self.points[i - 1][0] < d:
                raise InputError(f"{self.name}: dates not strictly ascending at {d}")

    def __len__(self):
        return len(self.points)

    @property
    def dates(self) -> tuple[str, ...]:
        return tuple(d for d, _ in self.points)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(v for _, v in self.points)

    def as_dict(self) -> dict[str, float]:
        return dict(self.points)


def _read_rows(path: Path, schema: Sequence[str]):
    if not path.is_file():
        raise InputError(f"file not found: {path}")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != list(schema):
            raise InputError(f"{path}: expected header {','.join(schema)}, got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(schema):
                raise InputError(
                    f"{path}: row {lineno}: expected {len(schema)} fields, got {len(row)}")
            yield lineno, [c.strip() for c in row]


def _parse_value(text: str, path: Path, lineno: int, column: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise InputError(f"{path}: row {lineno}, column {column}: not a number: {text!r}") from None
    if not math.isfinite(v):
        raise InputError(f"{path}: row {lineno}, column {column}: non-finite value {text!r}")
    return v


def load_series(path, schema: Sequence[str] = SERIES_SCHEMA) -> DatedSeries:
    """Read a ``date,value`` CSV into a strictly ascending DatedSeries.

    Row numbers in errors count the header as row 1.
    """
    path = Path(path)
    points = []
    for lineno, (date, value) in _read_rows(path, schema):
        _check_date(date, f"{path}: row {lineno}, column {schema[0]}")
        v = _parse_value(value, path, lineno, schema[1])
        if points:
            prev = points[-1][0]
            if date == prev:
                raise InputError(f"{path}: row {lineno}: duplicate date {date}")
            if date < prev:
                raise InputError(f"{path}: row {lineno}: date {date} precedes {prev}")
        points.append((date, v))
    return DatedSeries(tuple(points), name=path.stem)


def format_value(v: float) -> str:
    return format(v, ".12g")


def write_series(series: DatedSeries, path, schema: Sequence[str] = SERIES_SCHEMA) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(schema)
        for d, v in series.points:
            w.writerow((d, format_value(v)))


@dataclass(frozen=True)
class AlignedTable:
    dates: tuple[str, ...]
    names: tuple[str, ...]
    columns: tuple[tuple[float, ...], ...]

    def __len__(self):
        return len(self.dates)

    def column(self, name: str) -> tuple[float, ...]:
        return self.columns[self.names.index(name)]

    def rows(self):
        for i, d in enumerate(self.dates):
            yield (d,) + tuple(c[i] for c in self.columns)


def align(*series: DatedSeries, window: tuple[str, str],
          names: Sequence[str] | None = None) -> AlignedTable:
    """Inner-join series on the trading dates inside ``window`` (inclusive).

    Missing dates are an error, never filled. Both window ends must be
    trading dates present in every series.
    """
    if not series:
        raise InputError("nothing to align")
    names = tuple(names) if names is not None else tuple(s.name for s in series)
    if len(names) != len(series):
        raise InputError("one name per series required")
    start, end = window
    if not start <= end:
        raise InputError(f"window start {start} after end {end}")
    in_window = [{d: v for d, v in s.points if start <= d <= end} for s in series]
    all_dates = sorted(set().union(*in_window))
    problems = []
    for name, s, got in zip(names, series, in_window):
        if not s.points or s.points[0][0] > start or s.points[-1][0] < end:
            span = f"{s.points[0][0]}..{s.points[-1][0]}" if s.points else "empty"
            problems.append(f"{name}: covers {span}, window is {start}..{end}")
            continue
        missing = [d for d in all_dates if d not in got]
        for edge in (start, end):
            if edge not in got and edge not in missing:
                missing.append(edge)
        if missing:
            problems.append(f"{name}: missing {', '.join(sorted(missing))}")
    if problems:
        raise InputError("series do not align: " + "; ".join(problems))
    columns = tuple(tuple(got[d] for d in all_dates) for got in in_window)
    return AlignedTable(tuple(all_dates), names, columns)


def build_vol_path(vix_series: DatedSeries, beta: float) -> VolatilityPath:
    """Daily sigma = beta * VIX / 100, one sample per trading day."""
    sigmas = []
    for d, vix in vix_series.points:
        try:
            sigmas.append(sigma_from_beta_vix(beta, vix))
        except NegativeVolatilityError:
            raise NegativeVolatilityError(beta, vix, where=d) from None
    return VolatilityPath(tuple(sigmas), TRADING_DAYS_PER_YEAR, vix_series.dates)


def load_beta_table(path) -> BetaTable:
    path = Path(path)
    entries = {}
    for lineno, (ticker, beta) in _read_rows(path, BETA_SCHEMA):
        if not ticker:
            raise InputError(f"{path}: row {lineno}: empty ticker")
        if ticker in entries:
            raise InputError(f"{path}: row {lineno}: duplicate ticker {ticker}")
        entries[ticker] = _parse_value(beta, path, lineno, "beta")
    return BetaTable(entries)


@dataclass(frozen=True)
class RunConfig:
    rate: float = DEFAULT_RATE
    beta_table: BetaTable = field(default_factory=BetaTable)
    day_count: int = TRADING_DAYS_PER_YEAR
    gamma: float = 1.0
    k_mode: KMode = KMode.WIENER

    def __post_init__(self):
        object.__setattr__(self, "k_mode", KMode.parse(self.k_mode))
        if not math.isfinite(self.rate):
            raise InputError(f"rate must be finite, got {self.rate!r}")
        if not (math.isfinite(self.gamma) and self.gamma >= 1.0):
            raise InputError(f"gamma must be >= 1, got {self.gamma!r}")
        if self.day_count != TRADING_DAYS_PER_YEAR:
            raise InputError(f"day_count is fixed at {TRADING_DAYS_PER_YEAR}, got {self.day_count}")


_CONFIG_KEYS = ("rate", "gamma", "k_mode", "beta_table", "day_count")


def read_config_file(path) -> dict[str, str]:
    """Raw ``key=value`` pairs; blank lines and ``#`` comments are skipped."""
    path = Path(path)
    if not path.is_file():
        raise InputError(f"config file not found: {path}")
    out = {}
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}: line {lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _CONFIG_KEYS:
            raise InputError(f"{path}: line {lineno}: unknown key {key!r}")
        out[key] = value
    return out


def load_config(path=None, **overrides) -> RunConfig:
    """Build a RunConfig from a config file (default: the bundled one) plus overrides.

    A relative ``beta_table`` path resolves against the config file's directory.
    Overrides whose value is None are ignored.
    """
    path = Path(path) if path is not None else bundled_path("default.cfg")
    raw = read_config_file(path)
    raw.update({k: v for k, v in overrides.items() if v is not None})
    kwargs = {}
    try:
        if "rate" in raw:
            kwargs["rate"] = float(raw["rate"])
        if "gamma" in raw:
            kwargs["gamma"] = float(raw["gamma"])
        if "day_count" in raw:
            kwargs["day_count"] = int(raw["day_count"])
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None
    if "k_mode" in raw:
        try:
            kwargs["k_mode"] = KMode.parse(raw["k_mode"])
        except ValueError as exc:
            raise InputError(str(exc)) from None
    if "beta_table" in raw:
        table = raw["beta_table"]
        if isinstance(table, BetaTable):
            kwargs["beta_table"] = table
        else:
            table_path = Path(table)
            if not table_path.is_absolute():
                table_path = path.parent / table_path
            kwargs["beta_table"] = load_beta_table(table_path)
    return RunConfig(**kwargs)
