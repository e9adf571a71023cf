"""Exception hierarchy shared by the pricing, calibration and data layers."""


class QbsError(Exception):
    """Base class for all package errors."""


class InputError(QbsError, ValueError):
    """Malformed or inconsistent input data (files, rows, windows, chains)."""


class DomainError(QbsError, ValueError):
    """A numerical argument lies outside the domain of a formula."""


class NegativeVolatilityError(DomainError):
    def __init__(self, beta, vix_level, where=None):
        self.beta = beta
        self.vix_level = vix_level
        self.where = where
        msg = f"negative volatility from beta={beta!r} and VIX={vix_level!r}"
        if where is not None:
            msg += f" on {where}"
        super().__init__(msg)


class CoverageError(InputError):
    """A path or series does not cover the requested interval."""


class NoSolutionError(DomainError):
    """Market price lies outside the no-arbitrage interior; no implied volatility exists."""

    def __init__(self, message, bound):
        super().__init__(message)
        self.bound = bound


class DivergenceError(DomainError):
    """Root bracketing failed to find a sign change below the volatility ceiling."""
