"""Command-line front end: ``qbs price|calibrate|compare|vix``.

Exit codes: 0 ok, 1 input error, 2 numerical error. CSV goes to stdout or
``--out``; diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from .calibration import MarketDay, calibrate_series
from .errors import DomainError, InputError, QbsError
from .market_data import (AlignedTable, DatedSeries, OptionSpec, RunConfig, align,
                          build_vol_path, load_config, load_series)
from .paths import VolatilityPath, accumulated_variance, trading_years
from .pricing import (PricingInputs, QuantumVolParams, bs_call_price, bs_call_price_td,
                      qbs_call_price, qbs_call_price_td)
from .volatility import VixInputs, compute_vix, read_chain_csv

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2
MODELS = ("bs", "bs-td", "qbs", "qbs-td")
_SPEC_KEYS = {"ticker", "strike", "issue", "expiry"}


def fmt(v: float) -> str:
    return format(v, ".10g")


@dataclass
class Pipeline:
    spec: OptionSpec
    config: RunConfig
    table: AlignedTable
    vol_path: VolatilityPath

    @property
    def n_days(self) -> int:
        return len(self.table)

    def inputs(self, j: int) -> PricingInputs:
        T = trading_years(self.n_days - 1 - j)
        return PricingInputs(self.table.column("stock")[j], self.spec.strike, T, self.config.rate)

    def classical_price(self, j: int) -> float:
        return bs_call_price_td(self.inputs(j), self.vol_path.from_index(j))

    def effective_sigma(self, j: int) -> float:
        """Constant volatility carrying the same integrated variance as the remaining path."""
        T = trading_years(self.n_days - 1 - j)
        if T == 0.0:
            return self.vol_path.values[j]
        return math.sqrt(accumulated_variance(self.vol_path.from_index(j), T) / T)


def _read_spec_file(path) -> dict[str, str]:
    path = Path(path)
    if not path.is_file():
        raise InputError(f"spec file not found: {path}")
    out = {}
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or key not in _SPEC_KEYS:
            raise InputError(f"{path}: line {lineno}: expected one of "
                             f"{', '.join(sorted(_SPEC_KEYS))} as key=value")
        out[key] = value.strip()
    return out


def _option_spec(args) -> OptionSpec:
    raw = _read_spec_file(args.spec) if args.spec else {}
    for key in _SPEC_KEYS:
        val = getattr(args, key)
        if val is not None:
            raw[key] = str(val)
    missing = sorted(_SPEC_KEYS - raw.keys())
    if missing:
        raise InputError(f"missing option terms: {', '.join('--' + m for m in missing)}")
    try:
        strike = float(raw["strike"])
    except ValueError:
        raise InputError(f"strike is not a number: {raw['strike']!r}") from None
    return OptionSpec(raw["ticker"], strike, raw["issue"], raw["expiry"])


def _run_config(args) -> RunConfig:
    beta = str(Path(args.beta_table).resolve()) if args.beta_table else None
    return load_config(args.config, rate=args.rate, gamma=args.gamma, k_mode=args.k_mode,
                       beta_table=beta)


def _pipeline(args, with_option: bool) -> Pipeline:
    spec = _option_spec(args)
    config = _run_config(args)
    beta = config.beta_table[spec.ticker]
    for flag in ("stock", "vix") + (("option",) if with_option else ()):
        if getattr(args, flag) is None:
            raise InputError(f"--{flag} is required")
    series = [load_series(args.stock), load_series(args.vix)]
    names = ["stock", "vix"]
    if with_option:
        series.append(load_series(args.option))
        names.append("option")
    table = align(*series, window=(spec.issuance_date, spec.maturity_date), names=names)
    vix = DatedSeries(tuple(zip(table.dates, table.column("vix"))), "vix")
    return Pipeline(spec, config, table, build_vol_path(vix, beta))


def _emit(args, header, rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    if args.out:
        Path(args.out).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())


def _model_price(p: Pipeline, model: str, j: int, s_const: float | None) -> float:
    inputs = p.inputs(j)
    cfg = p.config
    if model == "bs":
        return bs_call_price(inputs, p.vol_path.values[j])
    if model == "bs-td":
        return bs_call_price_td(inputs, p.vol_path.from_index(j))
    if model == "qbs":
        s = p.vol_path.values[j] if s_const is None else s_const
        return qbs_call_price(inputs, QuantumVolParams(s, cfg.gamma, cfg.k_mode))
    s_path = p.vol_path.from_index(j)
    if s_const is not None:
        s_path = VolatilityPath.constant(s_const, len(s_path))
    return qbs_call_price_td(inputs, cfg.gamma, s_path, cfg.k_mode)


def cmd_price(args) -> int:
    p = _pipeline(args, with_option=False)
    rows = [(d, fmt(_model_price(p, args.model, j, args.s)))
            for j, d in enumerate(p.table.dates)]
    _emit(args, ("date", "model_price"), rows)
    return EXIT_OK


def _calibrated(args):
    p = _pipeline(args, with_option=True)
    days = [MarketDay(d, p.table.column("stock")[j], p.table.column("option")[j],
                      p.effective_sigma(j))
            for j, d in enumerate(p.table.dates)]
    points = calibrate_series(p.spec, days, p.config.gamma, p.config.k_mode, p.config.rate)
    for pt in points:
        if not pt.ok:
            print(f"{pt.day.date}: no calibration: {pt.error}", file=sys.stderr)
    return p, points


def cmd_calibrate(args) -> int:
    p, points = _calibrated(args)
    rows = []
    for j, pt in enumerate(points):
        base = (pt.day.date, fmt(pt.day.option_price), fmt(p.classical_price(j)))
        if pt.ok:
            r = pt.result
            rows.append(base + (fmt(r.s_star), fmt(r.im_f), r.regime.value))
        else:
            rows.append(base + ("", "", "none"))
    _emit(args, ("date", "market_price", "model_price", "s_star", "im_f", "regime"), rows)
    return EXIT_OK if any(pt.ok for pt in points) else EXIT_NUMERIC


def gap_summary(market, model) -> dict[str, float]:
    """Mean/max absolute and relative gaps of ``model`` against ``market``.

    Relative gaps skip days with a zero market price.
    """
    abs_gaps = [abs(b - a) for a, b in zip(market, model)]
    rel_gaps = [abs(b - a) / a for a, b in zip(market, model) if a != 0.0]
    out = {"days": float(len(abs_gaps)),
           "mean_abs_gap": math.fsum(abs_gaps) / len(abs_gaps),
           "max_abs_gap": max(abs_gaps)}
    if rel_gaps:
        out["mean_rel_gap"] = math.fsum(rel_gaps) / len(rel_gaps)
        out["max_rel_gap"] = max(rel_gaps)
    return out


def cmd_compare(args) -> int:
    p, points = _calibrated(args)
    rows, market, classical = [], [], []
    for j, pt in enumerate(points):
        bs_td = p.classical_price(j)
        market.append(pt.day.option_price)
        classical.append(bs_td)
        qbs = ""
        if pt.ok:
            q = QuantumVolParams(pt.result.s_star, p.config.gamma, p.config.k_mode)
            qbs = fmt(qbs_call_price(p.inputs(j), q))
        rows.append((pt.day.date, fmt(pt.day.option_price), fmt(bs_td), qbs))
    _emit(args, ("date", "market", "bs_td", "qbs_at_calibrated_s"), rows)
    summary = gap_summary(market, classical)
    lines = "".join(f"{k}={fmt(v)}\n" for k, v in summary.items())
    if args.summary:
        Path(args.summary).write_text(lines)
    sys.stderr.write(lines)
    return EXIT_OK if any(pt.ok for pt in points) else EXIT_NUMERIC


def cmd_vix(args) -> int:
    chain = read_chain_csv(args.chain)
    rate = args.rate if args.rate is not None else load_config(args.config).rate
    value = compute_vix(VixInputs(tuple(chain), args.t, rate))
    line = f"vix={fmt(value)}\n"
    if args.out:
        Path(args.out).write_text(line)
    else:
        sys.stdout.write(line)
    return EXIT_OK


def _common(p: argparse.ArgumentParser, option_data: bool) -> None:
    p.add_argument("--config", help="key=value config file (default: bundled)")
    p.add_argument("--spec", help="option terms file: ticker, strike, issue, expiry")
    p.add_argument("--ticker")
    p.add_argument("--strike", type=float)
    p.add_argument("--issue", help="issuance date, YYYY-MM-DD")
    p.add_argument("--expiry", help="maturity date, YYYY-MM-DD")
    p.add_argument("--stock", help="stock closes CSV (date,value)")
    p.add_argument("--vix", help="VIX closes CSV (date,value)")
    if option_data:
        p.add_argument("--option", help="option closes CSV (date,value)")
    p.add_argument("--beta-table", help="beta CSV (ticker,beta)")
    p.add_argument("--gamma", type=float)
    p.add_argument("--k-mode", choices=("wiener", "serial"))
    p.add_argument("--rate", type=float)
    p.add_argument("--out", help="write CSV here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qbs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("price", help="daily model prices from issuance to maturity")
    _common(p, option_data=False)
    p.add_argument("--model", choices=MODELS, default="bs-td")
    p.add_argument("--s", type=float, help="constant generalized volatility for qbs models "
                                           "(default: the beta*VIX path)")
    p.set_defaults(func=cmd_price)

    p = sub.add_parser("calibrate", help="daily implied s* and Im f(T) against market closes")
    _common(p, option_data=True)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("compare", help="market vs classical vs calibrated expanded prices")
    _common(p, option_data=True)
    p.add_argument("--summary", help="also write the gap summary (key=value) here")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("vix", help="single-expiry VIX from an option chain CSV")
    p.add_argument("--chain", required=True, help="CSV: strike,call_mid,put_mid,q_mid")
    p.add_argument("--t", type=float, required=True, help="time to expiration in years")
    p.add_argument("--rate", type=float)
    p.add_argument("--config")
    p.add_argument("--out")
    p.set_defaults(func=cmd_vix)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"qbs: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DomainError as exc:
        print(f"qbs: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except QbsError as exc:
        print(f"qbs: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
