"""Standard normal distribution function."""
import math

from .errors import DomainError

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def normal_cdf(x):
    """Standard normal CDF N(x), accurate in both tails.

    Evaluated through ``erfc`` on the side that keeps the argument of
    ``erfc`` positive, so small left-tail probabilities are not lost to
    cancellation against 1.
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"normal_cdf requires a finite argument, got {x!r}")
    if x < 0.0:
        return 0.5 * math.erfc(-x * _INV_SQRT2)
    return 1.0 - 0.5 * math.erfc(x * _INV_SQRT2)
