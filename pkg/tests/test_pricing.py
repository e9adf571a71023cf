import math
import random

import pytest
from hypothesis import assume, given, settings, strategies as st

from oracles import lognormal_call, qbs_call_mp
from qbs.errors import CoverageError, DomainError
from qbs.paths import DAY_STEP, SamplePath, VolatilityPath, accumulated_variance
from qbs.pricing import (ComplexVol, KMode, PricingInputs, QuantumVolParams, bs_call_price,
                         bs_call_price_td, qbs_call_price, qbs_call_price_td)

T30 = 30 / 252
ATM = PricingInputs(100.0, 100.0, T30, 0.0008)

# frozen from tests/oracles.py
BS_ATM_QUAD = 4.132169036697141          # lognormal_call(100, 100, 30/252, 0.0008, 0.3)
QBS_SERIAL_MP = 4.417563913029579        # qbs_call_mp(..., gamma=1, s=0.3, k=0)
QBS_GAMMA2_MP = 4.3450347457257905       # qbs_call_mp(..., gamma=2, s=0.15, k=0.15**2)

spots = st.floats(min_value=1.0, max_value=500.0)
strikes = st.floats(min_value=1.0, max_value=500.0)
times = st.floats(min_value=1 / 252, max_value=3.0)
rates = st.floats(min_value=-0.02, max_value=0.1)
vols = st.floats(min_value=0.01, max_value=1.5)


class TestTypes:
    def test_inputs_validation(self):
        with pytest.raises(DomainError):
            PricingInputs(-1.0, 100.0, 1.0, 0.0)
        with pytest.raises(DomainError):
            PricingInputs(100.0, 100.0, -0.1, 0.0)
        with pytest.raises(DomainError):
            PricingInputs(100.0, 100.0, 1.0, math.inf)
        PricingInputs(100.0, 100.0, 1.0, -0.01)

    def test_k_derived_from_mode(self):
        assert QuantumVolParams(0.3).k == 0.3 * 0.3
        assert QuantumVolParams(0.3, k_mode="serial").k == 0.0
        assert QuantumVolParams(0.3, k_mode="WIENER").k_mode is KMode.WIENER

    def test_gamma_below_one(self):
        with pytest.raises(DomainError):
            QuantumVolParams(0.3, gamma=0.99)

    def test_bad_k_mode(self):
        with pytest.raises(DomainError):
            QuantumVolParams(0.3, k_mode="brownian")

    def test_complex_vol_modulus(self):
        assert ComplexVol(0.3, 0.4).modulus() == pytest.approx(0.5, abs=1e-15)
        with pytest.raises(DomainError):
            ComplexVol(-0.1, 0.0)


class TestClassical:
    def test_zero_strike_gives_spot(self):
        assert bs_call_price(PricingInputs(100.0, 0.0, 0.25, 0.0008), 0.3) == 100.0

    def test_expiry_gives_payoff(self):
        assert bs_call_price(PricingInputs(120.0, 100.0, 0.0, 0.0008), 0.3) == 20.0

    def test_lognormal_quadrature(self):
        assert bs_call_price(ATM, 0.3) == pytest.approx(BS_ATM_QUAD, abs=1e-10)

    def test_quadrature_oracle_off_the_money(self):
        for S, K, T, sig in [(80, 100, 0.5, 0.25), (150, 100, 1.5, 0.6), (100, 130, 2 / 252, 0.9)]:
            expect = lognormal_call(S, K, T, 0.0008, sig)
            assert bs_call_price(PricingInputs(S, K, T, 0.0008), sig) == pytest.approx(expect, rel=1e-8)

    def test_zero_vol_is_discounted_intrinsic(self):
        i = PricingInputs(105.0, 100.0, 0.5, 0.05)
        assert bs_call_price(i, 0.0) == pytest.approx(105.0 - 100.0 * math.exp(-0.025), abs=1e-12)
        assert bs_call_price(PricingInputs(90.0, 100.0, 0.5, 0.05), 0.0) == 0.0

    def test_negative_sigma(self):
        with pytest.raises(DomainError):
            bs_call_price(ATM, -0.1)

    @given(spots, strikes, times, rates, vols)
    def test_no_arbitrage_bounds(self, S, K, T, r, sig):
        i = PricingInputs(S, K, T, r)
        c = bs_call_price(i, sig)
        assert i.lower_bound() - 1e-12 * S <= c <= S * (1 + 1e-15)

    @given(strikes, times, rates, vols)
    def test_zero_spot(self, K, T, r, sig):
        assert bs_call_price(PricingInputs(0.0, K, T, r), sig) == 0.0

    @given(spots, strikes, times, rates, vols, vols)
    def test_monotone_in_sigma(self, S, K, T, r, a, b):
        lo, hi = sorted((a, b))
        i = PricingInputs(S, K, T, r)
        assert bs_call_price(i, lo) <= bs_call_price(i, hi) + 1e-13 * S

    def test_strictly_increasing_where_vega_is_visible(self):
        prices = [bs_call_price(ATM, s) for s in (0.1, 0.2, 0.3, 0.4)]
        assert all(a < b for a, b in zip(prices, prices[1:]))

    def test_limit_small_strike(self):
        i = PricingInputs(100.0, 1e-12, 1.0, 0.01)
        assert bs_call_price(i, 0.3) == pytest.approx(100.0, abs=1e-10)


class TestExpanded:
    def test_reduces_to_classical(self):
        assert abs(qbs_call_price(ATM, QuantumVolParams(0.3)) - bs_call_price(ATM, 0.3)) <= 1e-12

    def test_serial_against_extended_precision(self):
        got = qbs_call_price(ATM, QuantumVolParams(0.3, 1.0, KMode.SERIAL))
        assert got == pytest.approx(QBS_SERIAL_MP, rel=1e-12)

    def test_gamma_two_against_extended_precision(self):
        got = qbs_call_price(ATM, QuantumVolParams(0.15, 2.0, KMode.WIENER))
        assert got == pytest.approx(QBS_GAMMA2_MP, rel=1e-12)

    @given(spots, strikes, times, rates, vols,
           st.floats(min_value=1.0, max_value=3.0), st.sampled_from(list(KMode)))
    @settings(max_examples=60)
    def test_matches_extended_precision(self, S, K, T, r, s, g, mode):
        q = QuantumVolParams(s, g, mode)
        ref = qbs_call_mp(S, K, T, r, g, s, q.k)
        assume(ref > 1e-6 * S)
        assert qbs_call_price(PricingInputs(S, K, T, r), q) == pytest.approx(ref, rel=1e-9)

    def test_reduction_grid(self):
        rng = random.Random(7)
        for _ in range(1000):
            S, K = rng.uniform(1, 300), rng.uniform(1, 300)
            i = PricingInputs(S, K, rng.uniform(1 / 252, 3), rng.uniform(-0.02, 0.1))
            sig = rng.uniform(0.01, 1.5)
            assert abs(qbs_call_price(i, QuantumVolParams(sig)) - bs_call_price(i, sig)) <= 1e-12

    def test_boundaries(self):
        q = QuantumVolParams(0.3)
        assert qbs_call_price(PricingInputs(120.0, 100.0, 0.0, 0.0008), q) == 20.0
        assert qbs_call_price(PricingInputs(0.0, 100.0, 0.5, 0.0008), q) == 0.0
        assert qbs_call_price(PricingInputs(100.0, 0.0, 0.5, 0.0008), q) == 100.0

    def test_zero_s_is_discounted_intrinsic(self):
        i = PricingInputs(105.0, 100.0, 0.5, 0.05)
        for mode in KMode:
            got = qbs_call_price(i, QuantumVolParams(0.0, 1.5, mode))
            assert got == pytest.approx(i.lower_bound(), abs=1e-12)

    @given(spots, strikes, times, rates, vols, vols)
    def test_monotone_in_s(self, S, K, T, r, a, b):
        lo, hi = sorted((a, b))
        i = PricingInputs(S, K, T, r)
        assert (qbs_call_price(i, QuantumVolParams(lo))
                <= qbs_call_price(i, QuantumVolParams(hi)) + 1e-13 * S)


def two_segment(lo, hi, n):
    return VolatilityPath((lo,) * (n // 2) + (hi,) * (n - n // 2))


class TestTimeDependent:
    def test_constant_path(self):
        path = VolatilityPath.constant(0.3, 30)
        assert abs(bs_call_price_td(ATM, path) - bs_call_price(ATM, 0.3)) <= 1e-14

    def test_two_segment_path(self):
        T = 126 / 252
        path = two_segment(0.2, 0.4, 126)
        i = PricingInputs(100.0, 95.0, T, 0.0008)
        explicit = 0.0
        for k in range(126):
            explicit += path.values[k] ** 2 * DAY_STEP
        assert accumulated_variance(path, T) == pytest.approx(explicit, rel=1e-14)
        sigma_eff = math.sqrt((0.2 ** 2 + 0.4 ** 2) / 2)
        assert bs_call_price_td(i, path) == pytest.approx(bs_call_price(i, sigma_eff), abs=1e-13)

    def test_empty_path_at_expiry(self):
        i = PricingInputs(120.0, 100.0, 0.0, 0.0008)
        assert bs_call_price_td(i, VolatilityPath(())) == 20.0

    def test_short_path(self):
        with pytest.raises(CoverageError):
            bs_call_price_td(ATM, VolatilityPath.constant(0.3, 29))

    def test_negative_sample(self):
        with pytest.raises(DomainError):
            VolatilityPath((0.3, -0.1))

    def test_off_grid_maturity_constant(self):
        i = PricingInputs(100.0, 100.0, 0.1234, 0.0008)
        path = VolatilityPath.constant(0.35, 40)
        assert abs(bs_call_price_td(i, path) - bs_call_price(i, 0.35)) <= 1e-14


class TestExpandedTimeDependent:
    def test_double_reduction(self):
        path = VolatilityPath.constant(0.3, 30)
        assert (qbs_call_price_td(ATM, 1.0, path, KMode.WIENER)
                == bs_call_price_td(ATM, path))

    def test_two_segment_matches_classical(self):
        i = PricingInputs(100.0, 95.0, 0.5, 0.0008)
        path = two_segment(0.2, 0.4, 126)
        assert abs(qbs_call_price_td(i, 1.0, path) - bs_call_price_td(i, path)) <= 1e-14

    def test_serial_constant_reduction(self):
        path = VolatilityPath.constant(0.3, 30)
        got = qbs_call_price_td(ATM, SamplePath.constant(1.0, 30), path, KMode.SERIAL)
        assert abs(got - qbs_call_price(ATM, QuantumVolParams(0.3, 1.0, KMode.SERIAL))) <= 1e-14

    def test_gamma_path_constant_reduction(self):
        path = VolatilityPath.constant(0.2, 30)
        got = qbs_call_price_td(ATM, SamplePath.constant(1.7, 30), path, KMode.WIENER)
        want = qbs_call_price(ATM, QuantumVolParams(0.2, 1.7, KMode.WIENER))
        assert got == pytest.approx(want, abs=1e-13)

    def test_gamma_path_below_one(self):
        with pytest.raises(DomainError):
            qbs_call_price_td(ATM, SamplePath((1.0,) * 29 + (0.5,)),
                              VolatilityPath.constant(0.3, 30))

    def test_integrals_term_by_term(self):
        # gamma varies: d1 numerator and the growth factor use int gamma^2 s^2, d2 only int k
        g = SamplePath((1.0,) * 15 + (2.0,) * 15)
        s = VolatilityPath((0.2,) * 10 + (0.3,) * 20)
        G = sum((gv * sv) ** 2 * DAY_STEP for gv, sv in zip(g.values, s.values))
        Kint = sum(sv ** 2 * DAY_STEP for sv in s.values)
        S, K, T, r = ATM.spot, ATM.strike, ATM.time_to_maturity, ATM.rate
        d1 = (math.log(S / K) + r * T + G - Kint / 2) / math.sqrt(G)
        d2 = (math.log(S / K) + r * T - Kint / 2) / math.sqrt(G)
        N = lambda x: 0.5 * math.erfc(-x / math.sqrt(2))
        want = S * math.exp((G - Kint) / 2) * N(d1) - K * math.exp(-r * T) * N(d2)
        assert qbs_call_price_td(ATM, g, s) == pytest.approx(want, rel=1e-13)


@given(spots, strikes, st.integers(min_value=1, max_value=500), rates, vols)
def test_riemann_exactness(S, K, days, r, sig):
    i = PricingInputs(S, K, days / 252, r)
    path = VolatilityPath.constant(sig, days)
    assert abs(bs_call_price_td(i, path) - bs_call_price(i, sig)) <= 1e-14 * max(1.0, S)
