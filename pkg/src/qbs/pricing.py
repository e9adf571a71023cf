"""Closed-form European call prices.

Three families share this module:

* the classical Black-Scholes price with constant volatility,
* its time-dependent-volatility form, where ``sigma**2 * T`` is replaced by the
  integrated variance of a daily volatility path,
* the Segal-Segal expanded price driven by a generalized volatility ``s``,
  a scale ``gamma >= 1`` and a correlation selector ``k`` (``s**2`` for a
  Wiener process, ``0`` for a serially correlated one), again in constant
  and path forms.

With ``gamma = 1`` and the Wiener selector the expanded price collapses
to the classical one; the arithmetic below is ordered so that collapse is
exact in floating point, not just algebraically.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from numbers import Real

from .errors import DomainError
from .paths import (SamplePath, VolatilityPath, accumulated_variance, level_integral,
                    riemann_weights)
from .special import normal_cdf


class KMode(str, enum.Enum):
    WIENER = "wiener"
    SERIAL = "serial"

    @classmethod
    def parse(cls, value) -> "KMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise DomainError(f"k_mode must be 'wiener' or 'serial', got {value!r}") from None


@dataclass(frozen=True)
class PricingInputs:
    spot: float
    strike: float
    time_to_maturity: float
    rate: float

    def __post_init__(self):
        for name in ("spot", "strike", "time_to_maturity"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise DomainError(f"{name} must be finite and >= 0, got {v!r}")
        if not math.isfinite(self.rate):
            raise DomainError(f"rate must be finite, got {self.rate!r}")

    @property
    def discounted_strike(self) -> float:
        return self.strike * math.exp(-self.rate * self.time_to_maturity)

    def lower_bound(self) -> float:
        return max(self.spot - self.discounted_strike, 0.0)


@dataclass(frozen=True)
class QuantumVolParams:
    s: float
    gamma: float = 1.0
    k_mode: KMode = KMode.WIENER

    def __post_init__(self):
        object.__setattr__(self, "k_mode", KMode.parse(self.k_mode))
        if not (math.isfinite(self.gamma) and self.gamma >= 1.0):
            raise DomainError(f"gamma must be >= 1, got {self.gamma!r}")
        if not (math.isfinite(self.s) and self.s >= 0.0):
            raise DomainError(f"s must be finite and >= 0, got {self.s!r}")

    @property
    def k(self) -> float:
        return self.s * self.s if self.k_mode is KMode.WIENER else 0.0


@dataclass(frozen=True)
class ComplexVol:
    """f(T) = re + i*im; ``re`` is the classical (public) volatility."""

    re: float
    im: float

    def __post_init__(self):
        if not (math.isfinite(self.re) and self.re >= 0.0):
            raise DomainError(f"real part must be >= 0, got {self.re!r}")
        if not math.isfinite(self.im):
            raise DomainError(f"imaginary part must be finite, got {self.im!r}")

    def modulus(self) -> float:
        return math.hypot(self.re, self.im)


def _boundary_price(inputs: PricingInputs, growth: float = 1.0):
    """Price at a boundary of the domain, or None when the formula applies."""
    S, K, T = inputs.spot, inputs.strike, inputs.time_to_maturity
    if T == 0.0:
        return max(S - K, 0.0)
    if S == 0.0:
        return 0.0
    if K == 0.0:
        return S * growth
    return None


def _price_from_integrals(inputs: PricingInputs, scaled_var: float, k_integral: float) -> float:
    """Expanded call price from the integrals of gamma^2 s^2 and of k over [0, T].

    Every pricer funnels through here; the classical price is the case
    ``scaled_var == k_integral == sigma^2 T``, where the growth factor is
    exactly 1 and ``scaled_var - k_integral / 2`` is exactly half the variance.
    """
    S, K, T, r = inputs.spot, inputs.strike, inputs.time_to_maturity, inputs.rate
    growth = math.exp(0.5 * (scaled_var - k_integral))
    edge = _boundary_price(inputs, growth)
    if edge is not None:
        return edge
    if scaled_var == 0.0:
        return inputs.lower_bound()
    root = math.sqrt(scaled_var)
    log_moneyness = math.log(S / K)
    d1 = (log_moneyness + r * T + (scaled_var - 0.5 * k_integral)) / root
    d2 = (log_moneyness + r * T - 0.5 * k_integral) / root
    price = S * growth * normal_cdf(d1) - K * math.exp(-r * T) * normal_cdf(d2)
    return max(price, 0.0)


def bs_call_price(inputs: PricingInputs, sigma: float) -> float:
    """Black-Scholes price of a European call with constant volatility."""
    if not (math.isfinite(sigma) and sigma >= 0.0):
        raise DomainError(f"sigma must be finite and >= 0, got {sigma!r}")
    var = (sigma * sigma) * inputs.time_to_maturity
    return _price_from_integrals(inputs, var, var)


def qbs_call_price(inputs: PricingInputs, q: QuantumVolParams) -> float:
    """Segal-Segal expanded call price with constant (gamma, s, k)."""
    T = inputs.time_to_maturity
    gs = q.gamma * q.s
    return _price_from_integrals(inputs, (gs * gs) * T, q.k * T)


def _as_vol_path(path) -> VolatilityPath:
    if isinstance(path, VolatilityPath):
        return path
    return VolatilityPath(path.values, path.steps_per_year, path.dates)


def bs_call_price_td(inputs: PricingInputs, vol_path: VolatilityPath) -> float:
    """Black-Scholes price with the variance integral of ``vol_path`` over [0, T]."""
    vol_path = _as_vol_path(vol_path)
    var = accumulated_variance(vol_path, inputs.time_to_maturity)
    return _price_from_integrals(inputs, var, var)


def qbs_call_price_td(inputs: PricingInputs, gamma_path, s_path: VolatilityPath,
                      k_mode=KMode.WIENER) -> float:
    """Expanded price with time-dependent gamma(t) and s(t).

    ``gamma_path`` may be a plain number for a constant scale. Both paths
    are sampled on the same daily grid as ``s_path``.
    """
    k_mode = KMode.parse(k_mode)
    s_path = _as_vol_path(s_path)
    if isinstance(gamma_path, Real):
        gamma_path = SamplePath.constant(float(gamma_path), len(s_path), s_path.steps_per_year)
    if gamma_path.steps_per_year != s_path.steps_per_year:
        raise DomainError("gamma and s paths must share a step")
    per_year = s_path.steps_per_year
    pairs = riemann_weights(min(len(gamma_path), len(s_path)), per_year,
                            inputs.time_to_maturity)
    weights = [w for _, w in pairs]
    gs2_levels, k_levels = [], []
    for i, _ in pairs:
        g = gamma_path.values[i]
        if g < 1.0:
            raise DomainError(f"gamma must be >= 1, got {g!r} at {gamma_path._label(i)}")
        s = s_path.values[i]
        gs = g * s
        gs2_levels.append(gs * gs)
        k_levels.append(s * s if k_mode is KMode.WIENER else 0.0)
    scaled_var = level_integral(gs2_levels, weights, per_year)
    k_integral = level_integral(k_levels, weights, per_year)
    return _price_from_integrals(inputs, scaled_var, k_integral)
