"""Regenerate the bundled synthetic dataset (AAL-like stock, VIX, option closes, SPX chain).

Run from the repository root:  python scripts/make_synthetic_data.py
Outputs are deterministic for the fixed seed.
"""
import csv
import math

import numpy as np

from qbs.market_data import DatedSeries, bundled_path, build_vol_path, write_series
from qbs.pricing import PricingInputs, bs_call_price, bs_call_price_td
from qbs.volatility import ChainQuote, with_otm_q

SEED = 20201008
ISSUE, MATURITY = "2020-10-08", "2020-11-20"
BETA_AAL = 1.71
STRIKE = 13.0
RATE = 0.0008


def trading_dates():
    days = np.arange(np.datetime64(ISSUE), np.datetime64(MATURITY) + 1)
    return [str(d) for d in days if np.is_busday(d)]


def main():
    rng = np.random.default_rng(SEED)
    dates = trading_dates()
    n = len(dates)

    # VIX: rise into late October, ease after the election
    t = np.linspace(0.0, 1.0, n)
    vix = 26.0 + 13.0 * np.exp(-((t - 0.45) / 0.18) ** 2) - 4.0 * t + rng.normal(0.0, 0.9, n)
    vix = np.round(vix, 2)

    # late-October dip, then a November rally through the strike
    trend = 12.6 - 1.3 * np.sin(np.pi * np.clip(t / 0.6, 0.0, 1.0)) + 1.0 * np.clip((t - 0.55) / 0.45, 0.0, 1.0)
    spot = trend * np.exp(np.cumsum(rng.normal(0.0, 0.012, n)))
    spot = np.round(spot, 2)

    vix_series = DatedSeries(tuple(zip(dates, vix.tolist())), "vix")
    path = build_vol_path(vix_series, BETA_AAL)
    option = []
    for j in range(n):
        T = (n - 1 - j) / 252
        inputs = PricingInputs(float(spot[j]), STRIKE, T, RATE)
        model = bs_call_price_td(inputs, path.from_index(j))
        # market disagrees with the model by up to about +/-25%, skewed upward
        noisy = model * (1.0 + rng.normal(0.06, 0.12))
        option.append(max(round(noisy, 2), 0.0))

    out = bundled_path("aal")
    out.mkdir(exist_ok=True)
    write_series(DatedSeries(tuple(zip(dates, spot.tolist()))), out / "stock.csv")
    write_series(vix_series, out / "vix.csv")
    write_series(DatedSeries(tuple(zip(dates, option))), out / "option.csv")

    # single-expiry SPX-like chain with a mild skew
    T, fwd = 30 / 365, 3487.5
    spot_index = fwd * math.exp(-RATE * T)
    chain = []
    for k in np.arange(3200.0, 3801.0, 25.0):
        vol = 0.24 - 0.35 * math.log(k / fwd) + 0.8 * math.log(k / fwd) ** 2
        c = bs_call_price(PricingInputs(spot_index, float(k), T, RATE), vol)
        p = c - spot_index + k * math.exp(-RATE * T)
        chain.append(ChainQuote(float(k), round(c, 2), round(max(p, 0.0), 2), 0.0))
    chain = with_otm_q(chain, RATE, T)
    with (bundled_path() / "spx_chain.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("strike", "call_mid", "put_mid", "q_mid"))
        for q in chain:
            w.writerow(tuple(format(v, ".12g") for v in (q.strike, q.call_mid, q.put_mid, q.q_mid)))


if __name__ == "__main__":
    main()
