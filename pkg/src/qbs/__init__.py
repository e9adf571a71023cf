"""European call pricing under classical and Segal-Segal expanded Black-Scholes models.

Also calibrates the non-classical volatility component Im f(T) against market prices.
"""
from .calibration import (CalibrationResult, MarketDay, Regime, SeriesPoint, calibrate_im_f,
                          calibrate_series, implied_s)
from .errors import (CoverageError, DivergenceError, DomainError, InputError,
                     NegativeVolatilityError, NoSolutionError, QbsError)
from .market_data import (AlignedTable, DatedSeries, OptionSpec, RunConfig, align,
                          build_vol_path, load_beta_table, load_config, load_series,
                          write_series)
from .paths import SamplePath, VolatilityPath, accumulated_variance
from .pricing import (ComplexVol, KMode, PricingInputs, QuantumVolParams, bs_call_price,
                      bs_call_price_td, qbs_call_price, qbs_call_price_td)
from .special import normal_cdf
from .volatility import (BetaTable, ChainQuote, VixInputs, compute_vix, forward_index_level,
                         sigma_from_beta_vix)

__version__ = "0.1.0"
