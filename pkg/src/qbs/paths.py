"""Daily sample paths and their left-endpoint Riemann integrals.

A path holds one sample per trading day; sample ``i`` is the value on
``[i*step, (i+1)*step)`` measured from the pricing date. Integrals over
``[t_start, t_end]`` weight each touched sample by its overlap with the
interval, which is the plain left-Riemann sum whenever both ends sit on
the daily grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import CoverageError, DomainError

TRADING_DAYS_PER_YEAR = 252
DAY_STEP = 1.0 / TRADING_DAYS_PER_YEAR

# ends within this many steps of a grid point are treated as on the grid
_GRID_SNAP = 1e-9


@dataclass(frozen=True)
class SamplePath:
    values: tuple[float, ...]
    steps_per_year: int = TRADING_DAYS_PER_YEAR
    dates: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if self.dates is not None:
            object.__setattr__(self, "dates", tuple(self.dates))
            if len(self.dates) != len(self.values):
                raise DomainError("dates and values differ in length")
        if not (isinstance(self.steps_per_year, int) and self.steps_per_year > 0):
            raise DomainError(f"steps per year must be a positive int, got {self.steps_per_year!r}")
        for i, v in enumerate(self.values):
            if not math.isfinite(v):
                raise DomainError(f"non-finite sample at {self._label(i)}: {v!r}")
        self._check_samples()

    def _check_samples(self):
        pass

    def _label(self, i):
        return self.dates[i] if self.dates is not None else f"index {i}"

    def __len__(self):
        return len(self.values)

    @property
    def step_years(self) -> float:
        return 1.0 / self.steps_per_year

    @property
    def horizon(self) -> float:
        """Length of time covered by the samples, in years."""
        return len(self.values) / self.steps_per_year

    def from_index(self, start: int):
        """The same path re-based so that sample ``start`` sits at time zero."""
        dates = self.dates[start:] if self.dates is not None else None
        return type(self)(self.values[start:], self.steps_per_year, dates)

    @classmethod
    def constant(cls, value: float, n: int, steps_per_year: int = TRADING_DAYS_PER_YEAR):
        return cls((value,) * n, steps_per_year)


@dataclass(frozen=True)
class VolatilityPath(SamplePath):
    """Annualized volatility samples; every sample must be >= 0."""

    def _check_samples(self):
        for i, v in enumerate(self.values):
            if v < 0.0:
                raise DomainError(f"negative volatility {v!r} at {self._label(i)}")


def _grid_index(x: float, rounding: Callable[[float], float]) -> tuple[int, bool]:
    nearest = round(x)
    if abs(x - nearest) <= _GRID_SNAP:
        return int(nearest), True
    return int(rounding(x)), False


def riemann_weights(n_samples: int, steps_per_year: int, t_end: float,
                    t_start: float = 0.0) -> list[tuple[int, float]]:
    """(sample index, weight in steps) pairs for integrating over [t_start, t_end].

    Full steps weigh exactly 1.0; only a step cut by an off-grid end is fractional.
    """
    if not (math.isfinite(t_start) and math.isfinite(t_end)):
        raise DomainError("integration limits must be finite")
    if t_start < 0.0 or t_end < t_start:
        raise DomainError(f"bad integration interval [{t_start}, {t_end}]")
    if t_end == t_start:
        return []
    a = t_start * steps_per_year
    b = t_end * steps_per_year
    ia, a_grid = _grid_index(a, math.floor)
    ib, b_grid = _grid_index(b, math.ceil)
    if ib > n_samples:
        raise CoverageError(
            f"path of {n_samples} samples covers {n_samples / steps_per_year:.6g} y, "
            f"integral needs {t_end:.6g} y ({ib} samples)")
    out = []
    for i in range(ia, ib):
        lo = float(i) if (a_grid or i > ia) else a
        hi = float(i + 1) if (b_grid or i < ib - 1) else b
        out.append((i, hi - lo))
    return out


def level_integral(levels, weights, steps_per_year: int) -> float:
    """Sum of level * weight / steps_per_year, accumulated per distinct level.

    Grouping equal levels first makes a constant integrand integrate to
    exactly ``level * (n / steps_per_year)``, the same float as ``level * T``.
    """
    spans: dict[float, list[float]] = {}
    for level, w in zip(levels, weights):
        spans.setdefault(level, []).append(w)
    return math.fsum(level * (math.fsum(ws) / steps_per_year) for level, ws in spans.items())


def riemann_integral(values: Sequence[float], steps_per_year: int, t_end: float,
                     t_start: float = 0.0) -> float:
    pairs = riemann_weights(len(values), steps_per_year, t_end, t_start)
    return level_integral([values[i] for i, _ in pairs], [w for _, w in pairs], steps_per_year)


def accumulated_variance(path: SamplePath, T: float, t_start: float = 0.0) -> float:
    """Integral of sigma^2 over [t_start, T], in variance * years."""
    squares = [v * v for v in path.values]
    return riemann_integral(squares, path.steps_per_year, T, t_start)


def trading_years(days: int) -> float:
    """Year fraction for a count of trading days."""
    return days / TRADING_DAYS_PER_YEAR
