"""Annualized volatility inputs: beta-scaled VIX and single-expiry VIX from a chain."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .errors import DomainError, InputError, NegativeVolatilityError

CHAIN_HEADER = ("strike", "call_mid", "put_mid", "q_mid")


@dataclass(frozen=True)
class BetaTable:
    """Ticker -> beta. Negative betas are legal here and only rejected at pricing time."""

    entries: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for ticker, beta in self.entries.items():
            if not math.isfinite(beta):
                raise InputError(f"beta for {ticker!r} is not finite: {beta!r}")

    def __getitem__(self, ticker: str) -> float:
        try:
            return self.entries[ticker]
        except KeyError:
            raise InputError(f"ticker {ticker!r} not in beta table") from None

    def __contains__(self, ticker) -> bool:
        return ticker in self.entries

    def __len__(self) -> int:
        return len(self.entries)


def sigma_from_beta_vix(beta: float, vix_level: float) -> float:
    """Per-stock annualized volatility ``beta * VIX / 100``.

    Raises NegativeVolatilityError when beta < 0 makes the result negative.
    """
    if not math.isfinite(beta):
        raise DomainError(f"beta must be finite, got {beta!r}")
    if not (math.isfinite(vix_level) and vix_level >= 0.0):
        raise DomainError(f"VIX level must be finite and >= 0, got {vix_level!r}")
    sigma = beta * vix_level / 100.0
    if sigma < 0.0:
        raise NegativeVolatilityError(beta, vix_level)
    return sigma


@dataclass(frozen=True)
class ChainQuote:
    strike: float
    call_mid: float
    put_mid: float
    q_mid: float

    def __post_init__(self):
        if not (math.isfinite(self.strike) and self.strike > 0.0):
            raise InputError(f"strike must be > 0, got {self.strike!r}")
        for name in ("call_mid", "put_mid", "q_mid"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise InputError(f"{name} at strike {self.strike} must be >= 0, got {v!r}")


@dataclass(frozen=True)
class VixInputs:
    chain: tuple[ChainQuote, ...]
    time_to_expiration: float
    rate: float

    def __post_init__(self):
        object.__setattr__(self, "chain", tuple(self.chain))
        if len(self.chain) < 3:
            raise InputError(f"VIX needs at least 3 strikes, got {len(self.chain)}")
        strikes = [q.strike for q in self.chain]
        for a, b in zip(strikes, strikes[1:]):
            if not b > a:
                raise InputError(f"strikes must be strictly increasing ({a} then {b})")
        if not (math.isfinite(self.time_to_expiration) and self.time_to_expiration > 0.0):
            raise InputError(f"time to expiration must be > 0, got {self.time_to_expiration!r}")
        if not math.isfinite(self.rate):
            raise InputError(f"rate must be finite, got {self.rate!r}")


def select_forward_quote(chain: Sequence[ChainQuote]) -> ChainQuote:
    """Quote whose call and put mids are closest (first one on ties)."""
    if not chain:
        raise InputError("empty chain")
    return min(chain, key=lambda q: abs(q.call_mid - q.put_mid))


def forward_index_level(k0_candidate: ChainQuote, rate: float, T: float) -> float:
    return k0_candidate.strike + math.exp(rate * T) * (k0_candidate.call_mid - k0_candidate.put_mid)


def reference_strike(chain: Sequence[ChainQuote], forward: float) -> float:
    """K0: the highest listed strike at or below the forward level."""
    below = [q.strike for q in chain if q.strike <= forward]
    if not below:
        raise InputError(f"no strike at or below forward level {forward}")
    return below[-1]


def strike_intervals(strikes: Sequence[float]) -> list[float]:
    """Central half-differences; one-sided at the two ends of the chain."""
    n = len(strikes)
    if n < 2:
        raise InputError("need at least two strikes for strike intervals")
    out = [strikes[1] - strikes[0]]
    out += [0.5 * (strikes[i + 1] - strikes[i - 1]) for i in range(1, n - 1)]
    out.append(strikes[-1] - strikes[-2])
    return out


def otm_midpoints(chain: Sequence[ChainQuote], k0: float) -> list[float]:
    """Out-of-the-money quote per strike: put below K0, call above, their average at K0."""
    out = []
    for q in chain:
        if q.strike < k0:
            out.append(q.put_mid)
        elif q.strike > k0:
            out.append(q.call_mid)
        else:
            out.append(0.5 * (q.call_mid + q.put_mid))
    return out


def with_otm_q(chain: Sequence[ChainQuote], rate: float, T: float) -> list[ChainQuote]:
    """Copy of ``chain`` with ``q_mid`` filled from the out-of-the-money rule."""
    fwd = forward_index_level(select_forward_quote(chain), rate, T)
    k0 = reference_strike(chain, fwd)
    qs = otm_midpoints(chain, k0)
    return [ChainQuote(c.strike, c.call_mid, c.put_mid, q) for c, q in zip(chain, qs)]


def vix_contributions(inputs: VixInputs) -> list[float]:
    """Per-strike terms (2/T) * dK/K^2 * e^{RT} * Q(K) of the variance sum."""
    T, R = inputs.time_to_expiration, inputs.rate
    growth = math.exp(R * T)
    dks = strike_intervals([q.strike for q in inputs.chain])
    return [(2.0 / T) * dk / (q.strike * q.strike) * growth * q.q_mid
            for q, dk in zip(inputs.chain, dks)]


def vix_variance(inputs: VixInputs) -> float:
    T = inputs.time_to_expiration
    fwd = forward_index_level(select_forward_quote(inputs.chain), inputs.rate, T)
    k0 = reference_strike(inputs.chain, fwd)
    return math.fsum(vix_contributions(inputs)) - (fwd / k0 - 1.0) ** 2 / T


def compute_vix(inputs: VixInputs) -> float:
    var = vix_variance(inputs)
    if var < 0.0:
        raise DomainError(f"chain implies negative variance {var!r}")
    return 100.0 * math.sqrt(var)


def read_chain_csv(path) -> list[ChainQuote]:
    path = Path(path)
    if not path.is_file():
        raise InputError(f"chain file not found: {path}")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != CHAIN_HEADER:
            raise InputError(f"{path}: expected header {','.join(CHAIN_HEADER)}, got {header}")
        quotes = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(CHAIN_HEADER):
                raise InputError(f"{path}:{lineno}: expected 4 fields, got {len(row)}")
            try:
                vals = [float(c) for c in row]
            except ValueError as exc:
                raise InputError(f"{path}:{lineno}: {exc}") from None
            try:
                quotes.append(ChainQuote(*vals))
            except InputError as exc:
                raise InputError(f"{path}:{lineno}: {exc}") from None
    return quotes
