"""Implied generalized volatility and its split into public and non-public parts."""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from scipy.optimize import brentq

from .errors import DivergenceError, DomainError, InputError, NoSolutionError
from .paths import trading_years
from .pricing import KMode, PricingInputs, QuantumVolParams, qbs_call_price

PRICE_RTOL = 1e-9
IM_EPS = 1e-7
S_LOW = 1e-8
S_HIGH = 10.0
S_CEILING = 1e4
MAX_ITER = 200


class Regime(str, enum.Enum):
    REAL = "real"
    IMAGINARY = "imaginary"
    ZERO = "zero"


@dataclass(frozen=True)
class CalibrationResult:
    s_star: float
    sigma_public: float
    im_f: float
    regime: Regime
    residual: float


def implied_s(inputs: PricingInputs, market_price: float, gamma: float = 1.0,
              k_mode=KMode.WIENER) -> float:
    """Generalized volatility s* at which the expanded price equals ``market_price``.

    The root is bracketed from ``[1e-8, 10]``, doubling the upper end up to
    1e4, then refined with Brent's method to floating-point resolution.
    """
    k_mode = KMode.parse(k_mode)
    S, T = inputs.spot, inputs.time_to_maturity
    if not math.isfinite(market_price):
        raise DomainError(f"market price must be finite, got {market_price!r}")
    if T <= 0.0:
        raise NoSolutionError("no implied volatility at expiry (T = 0)", "expiry")
    lower = inputs.lower_bound()
    if market_price <= lower:
        raise NoSolutionError(
            f"market price {market_price:.10g} at or below the no-arbitrage lower bound {lower:.10g}",
            "lower")
    if market_price >= S:
        raise NoSolutionError(
            f"market price {market_price:.10g} at or above the spot upper bound {S:.10g}", "upper")

    def gap(s):
        return qbs_call_price(inputs, QuantumVolParams(s, gamma, k_mode)) - market_price

    lo = S_LOW
    f_lo = gap(lo)
    if f_lo > 0.0:
        lo, f_lo = 0.0, gap(0.0)
    if f_lo == 0.0:
        return lo
    hi = S_HIGH
    f_hi = gap(hi)
    while f_hi < 0.0:
        hi *= 2.0
        if hi > S_CEILING:
            raise DivergenceError(f"no sign change for s up to {S_CEILING:g}")
        f_hi = gap(hi)
    if f_hi == 0.0:
        return hi
    s_star = brentq(gap, lo, hi, xtol=1e-300, rtol=4 * 2.220446049250313e-16, maxiter=MAX_ITER)
    if abs(gap(s_star)) > PRICE_RTOL * max(1.0, market_price):
        raise DivergenceError(f"solver stopped at s={s_star!r} with residual {gap(s_star)!r}")
    return s_star


def classify(s_star: float, sigma_public: float, eps: float = IM_EPS) -> tuple[float, Regime]:
    """Split s*^2 = sigma^2 +/- im^2 and report im as a modulus with its regime."""
    d = s_star * s_star - sigma_public * sigma_public
    if d > eps * eps:
        return math.sqrt(d), Regime.REAL
    if d < -eps * eps:
        return math.sqrt(-d), Regime.IMAGINARY
    return 0.0, Regime.ZERO


def calibrate_im_f(inputs: PricingInputs, market_price: float, sigma_public: float,
                   gamma: float = 1.0, k_mode=KMode.WIENER) -> CalibrationResult:
    if not (math.isfinite(sigma_public) and sigma_public >= 0.0):
        raise DomainError(f"public volatility must be >= 0, got {sigma_public!r}")
    k_mode = KMode.parse(k_mode)
    s_star = implied_s(inputs, market_price, gamma, k_mode)
    im_f, regime = classify(s_star, sigma_public)
    residual = qbs_call_price(inputs, QuantumVolParams(s_star, gamma, k_mode)) - market_price
    return CalibrationResult(s_star, sigma_public, im_f, regime, residual)


@dataclass(frozen=True)
class MarketDay:
    date: str
    spot: float
    option_price: float
    sigma_public: float


@dataclass(frozen=True)
class SeriesPoint:
    """One day of a calibrated series; ``result`` is None when the day had no solution."""

    day: MarketDay
    time_to_maturity: float
    result: CalibrationResult | None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.result is not None


def _calibrate_day(day, T, strike, rate, gamma, k_mode):
    try:
        inputs = PricingInputs(day.spot, strike, T, rate)
        return SeriesPoint(day, T, calibrate_im_f(inputs, day.option_price, day.sigma_public,
                                                  gamma, k_mode))
    except DomainError as exc:
        return SeriesPoint(day, T, None, str(exc))


def calibrate_series(spec, market: Sequence[MarketDay], gamma: float = 1.0,
                     k_mode=KMode.WIENER, rate: float = 0.0008,
                     max_workers: int | None = None) -> list[SeriesPoint]:
    """Calibrate each trading day from issuance to maturity.

    ``market`` is the aligned daily table, last row on the maturity date, so
    day ``j`` of ``n`` has ``T = (n - 1 - j) / 252``. Days without a solution
    carry an error message instead of aborting the series.
    """
    if not market:
        raise InputError("empty market series")
    k_mode = KMode.parse(k_mode)
    n = len(market)
    jobs = [(day, trading_years(n - 1 - j), spec.strike, rate, gamma, k_mode)
            for j, day in enumerate(market)]
    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(lambda a: _calibrate_day(*a), jobs))
    return [_calibrate_day(*a) for a in jobs]
