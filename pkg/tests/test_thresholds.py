import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from thermalqkd.exceptions import BracketError, DomainError
from thermalqkd.oneway import rate_dr_oneway_asym, rate_rr_oneway_asym
from thermalqkd.rates import Direction, asymptotic_breakdown, numeric_breakdown, rate_function
from thermalqkd.thresholds import (
    SPEED_OF_LIGHT,
    AttenuationModel,
    ThermalEnvironment,
    distance_from_transmission,
    max_secure_distance,
    planck_v0,
    solve_oneway_crossing,
    solve_threshold_excess_noise,
    solve_threshold_frequency,
    solve_threshold_transmission,
    solve_threshold_w,
    threshold_transmission_at,
    transmission_from_distance,
    v0_from_environment,
)
from thermalqkd.twoway import rate_rr_twoway_asym

PER_METRE = AttenuationModel(9.7)
PER_KM = AttenuationModel(0.53, 1000.0)


class TestEnvironment:
    def test_planck_values(self):
        # mpmath with CODATA constants at 288.15 K
        assert v0_from_environment(ThermalEnvironment(frequency_hz=1.2e13)) == pytest.approx(
            1.3135267622565912, rel=1e-12
        )
        assert ThermalEnvironment(wavelength_m=12e-6).v0() == pytest.approx(1.031679111048784, rel=1e-12)

    def test_optical_limit(self):
        assert planck_v0(1e16, 288.15) == 1.0
        assert planck_v0(1e20, 288.15) == 1.0

    def test_monotone(self):
        # v0 rounds to exactly 1.0 above ~2e14 Hz at room temperature
        f = np.geomspace(1e9, 1e14, 200)
        assert np.all(np.diff(planck_v0(f, 288.15)) < 0)
        assert np.all(np.diff(planck_v0(np.geomspace(1e14, 1e16, 50), 288.15)) <= 0)
        temps = np.linspace(10, 1000, 200)
        assert np.all(np.diff(planck_v0(1e13, temps)) > 0)

    def test_wavelength_frequency(self):
        env = ThermalEnvironment(wavelength_m=24e-6)
        assert env.frequency_hz == pytest.approx(SPEED_OF_LIGHT / 24e-6)
        assert env.mean_photons == pytest.approx((env.v0() - 1) / 2)

    def test_from_celsius(self):
        assert ThermalEnvironment.from_celsius(15, frequency_hz=1e13).temperature_k == pytest.approx(288.15)

    @pytest.mark.parametrize(
        "kwargs",
        [dict(), dict(frequency_hz=1e13, wavelength_m=1e-5), dict(frequency_hz=-1), dict(temperature_k=0, frequency_hz=1)],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(DomainError):
            ThermalEnvironment(**kwargs)


class TestDistance:
    def test_values(self):
        assert distance_from_transmission(1.0, PER_METRE) == 0.0
        # -10 log10(T) / 9.7, evaluated with mpmath
        assert distance_from_transmission(0.4, PER_METRE) == pytest.approx(0.41024743162065733, rel=1e-12)
        assert distance_from_transmission(0.6, PER_METRE) == pytest.approx(0.22871005115088289, rel=1e-12)

    @given(st.floats(1e-6, 1.0), st.floats(1e-3, 100))
    def test_round_trip(self, t, alpha):
        att = AttenuationModel(alpha)
        assert transmission_from_distance(distance_from_transmission(t, att), att) == pytest.approx(t, rel=1e-12)

    def test_units(self):
        assert distance_from_transmission(0.1, PER_KM) == pytest.approx(10 / 0.53 * 1000)

    def test_invalid(self):
        with pytest.raises(DomainError):
            AttenuationModel(0)
        with pytest.raises(DomainError):
            distance_from_transmission(0, PER_METRE)
        with pytest.raises(DomainError):
            transmission_from_distance(-1, PER_METRE)


class TestNoiseThresholds:
    @pytest.mark.parametrize("protocol,direction", [("oneway", "dr"), ("oneway", "rr"), ("twoway", "rr"), ("twoway", "dr")])
    @pytest.mark.parametrize("v0,t", [(1, 0.3), (1, 0.7), (10, 0.6), (1e3, 0.9)])
    def test_root_contract(self, protocol, direction, v0, t):
        fn = rate_function(protocol, direction)
        w_star = solve_threshold_w(fn, v0, t)
        if w_star == 1.0:
            assert fn(v0, t, 1.0) <= 0
            return
        assert abs(fn(v0, t, w_star)) <= 1e-9
        assert fn(v0, t, w_star * (1 - 1e-6)) > 0 > fn(v0, t, w_star * (1 + 1e-6))

    def test_oneway_rr_pure_states(self):
        # brute-force scan on a fine w grid
        w = np.linspace(1.0, 2.0, 1_000_001)
        r = rate_rr_oneway_asym(1.0, 0.5, w)
        scan = w[np.argmax(r < 0)]
        assert solve_threshold_w(rate_rr_oneway_asym, 1.0, 0.5) == pytest.approx(scan, abs=2e-6)
        assert solve_threshold_excess_noise(rate_rr_oneway_asym, 1.0, 0.5) > 0

    def test_insecure_everywhere(self):
        assert solve_threshold_w(rate_dr_oneway_asym, 1.0, 0.4) == 1.0
        assert solve_threshold_excess_noise(rate_dr_oneway_asym, 1.0, 0.4) == 0.0

    def test_unbounded(self):
        with pytest.raises(BracketError):
            solve_threshold_w(lambda v0, t, w: 1.0, 1.0, 0.5)

    def test_twoway_dominates_oneway_dr(self):
        r2, r1 = rate_function("twoway", "rr"), rate_function("oneway", "dr")
        for v0 in (1, 10, 1e3, 1e6):
            for t in np.arange(1, 10) / 10:
                assert solve_threshold_excess_noise(r2, v0, t) >= solve_threshold_excess_noise(r1, v0, t)

    def test_twoway_rr_robust_in_v0(self):
        r2 = rate_function("twoway", "rr")
        n = [solve_threshold_excess_noise(r2, v0, 0.5) for v0 in (1, 10, 1e3, 1e6)]
        assert all(a <= b for a, b in zip(n, n[1:]))


class TestTransmissionThresholds:
    def test_sentinels(self):
        assert solve_threshold_transmission(rate_rr_twoway_asym, 1.0, 1.0) == 0.0
        assert solve_threshold_transmission(lambda v0, t, w: -1.0, 1.0) == 1.0

    def test_w_defaults_to_v0(self):
        a = solve_threshold_transmission(rate_rr_oneway_asym, 1.3)
        b = solve_threshold_transmission(rate_rr_oneway_asym, 1.3, 1.3)
        assert a == b


class TestFrequencyThresholds:
    def test_high_transmission_tolerates_low_frequency(self):
        lo = solve_threshold_frequency("twoway", "rr", 0.999)
        hi = solve_threshold_frequency("twoway", "rr", 0.5)
        assert lo.frequency_hz < hi.frequency_hz / 10

    def test_root_contract(self):
        ft = solve_threshold_frequency("oneway", "rr", 0.4)
        v0 = planck_v0(ft.frequency_hz, 288.15)
        assert abs(rate_rr_oneway_asym(v0, 0.4, v0)) <= 1e-9
        assert ft.wavelength_m == pytest.approx(SPEED_OF_LIGHT / ft.frequency_hz)

    def test_sentinels(self):
        assert solve_threshold_frequency("oneway", "dr", 0.3).status == "insecure_all"
        assert solve_threshold_frequency("oneway", "dr", 0.3).frequency_hz is None
        assert solve_threshold_frequency("twoway", "rr", 1 - 1e-7).status == "secure_all"

    @pytest.mark.parametrize("protocol,direction", [("twoway", "rr"), ("oneway", "dr"), ("oneway", "rr")])
    def test_non_increasing_in_t(self, protocol, direction):
        freqs = []
        for t in np.linspace(0.55, 0.95, 9):
            ft = solve_threshold_frequency(protocol, direction, t)
            freqs.append(ft.frequency_hz)
        assert all(a >= b for a, b in zip(freqs, freqs[1:]))

    def test_twoway_lowest_in_mid_range(self):
        for t in np.linspace(0.2, 0.8, 13):
            two = solve_threshold_frequency("twoway", "rr", t).frequency_hz
            for d in ("dr", "rr"):
                one = solve_threshold_frequency("oneway", d, t)
                assert one.status == "insecure_all" or two < one.frequency_hz

    def test_crossing(self):
        t, f = solve_oneway_crossing()
        assert 0.55 <= t <= 0.65
        assert 1.0e13 <= f <= 1.4e13
        assert solve_threshold_frequency("oneway", "rr", t).frequency_hz == pytest.approx(f, rel=1e-8)


class TestDistances:
    def test_twelve_micron_window(self):
        env = ThermalEnvironment(wavelength_m=12e-6)
        one = max_secure_distance("oneway", "best", env, PER_KM)
        two = max_secure_distance("twoway", "rr", env, PER_KM)
        assert 1.05 <= two / one <= 1.10

    def test_unbounded(self):
        env = ThermalEnvironment(frequency_hz=1e16)
        assert max_secure_distance("twoway", "rr", env, PER_KM) == math.inf

    def test_threshold_at_crossing_frequency(self):
        t = threshold_transmission_at("twoway", "rr", ThermalEnvironment(frequency_hz=1.2e13))
        assert 0.38 <= t <= 0.48


class TestDispatch:
    def test_best_is_max(self):
        fn = rate_function("oneway", Direction.BEST)
        for t in (0.3, 0.55, 0.8):
            assert fn(2, t, 1.1) == max(rate_dr_oneway_asym(2, t, 1.1), rate_rr_oneway_asym(2, t, 1.1))

    def test_unknown(self):
        with pytest.raises(DomainError):
            rate_function("threeway", "dr")
        with pytest.raises(ValueError):
            rate_function("oneway", "sideways")

    def test_asymptotic_breakdown_rate_exact(self):
        rb = asymptotic_breakdown("twoway", "rr", 1, 0.5, 1, 1e6)
        assert rb.rate == pytest.approx(rate_rr_twoway_asym(1, 0.5, 1), abs=1e-12)
        assert rb.mutual_info == pytest.approx(0.5 * math.log2(0.5e6), abs=1e-12)

    def test_numeric_breakdown(self):
        for protocol in ("oneway", "twoway"):
            for d in ("dr", "rr", "best"):
                rb = numeric_breakdown(protocol, d, 1.2, 0.7, 1.1, 1e5)
                assert rb.rate == pytest.approx(asymptotic_breakdown(protocol, d, 1.2, 0.7, 1.1, 1e5).rate, abs=1e-2)
