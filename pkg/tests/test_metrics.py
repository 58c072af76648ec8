"""SINR and secrecy-rate forms: trivial cases, loop oracles, equivalences."""

import numpy as np
import pytest

from masec import (AntennaLayout, BeamformingState, SystemConfig,
                   downlink_sinr, eve_downlink_sinr, eve_uplink_sinr,
                   half_duplex_report, secrecy_report, uplink_sinr)
from masec.metrics import build_channels

from conftest import make_scenario, make_state


def toy_config(**overrides):
    """Single-antenna, single-path config with unit-ish powers."""
    base = dict(n_t=1, n_r=1, paths=1, p_ul=0.1, p_bs=0.1,
                noise_bs=1e-12, noise_dl=1e-12, noise_eve=1e-12)
    base.update(overrides)
    return SystemConfig(**base)


def origin_layout(n_t=1, n_r=1):
    return AntennaLayout(transmit=np.zeros(2 * n_t), receive=np.zeros(2 * n_r))


def zero_state(n_t=1, n_r=1):
    w_r = np.zeros(n_r, dtype=complex)
    w_r[0] = 1.0
    return BeamformingState(w_r=w_r, W=np.zeros((n_t, n_t), dtype=complex),
                            V=np.zeros((n_t, n_t), dtype=complex))


class TestUplinkSinr:
    def test_scalar_no_interference(self, rng):
        scenario = make_scenario(rng, paths=1, ul_bs=[1.0])
        value = uplink_sinr(scenario, origin_layout(), zero_state(), 0.1, 1e-10, 1e-12)
        assert value == pytest.approx(1e11)

    def test_zero_uplink_power(self, rng):
        scenario = make_scenario(rng, paths=1)
        assert uplink_sinr(scenario, origin_layout(), zero_state(), 0.0, 1e-10, 1e-12) == 0.0

    def test_index_loop_oracle(self, rng):
        scenario = make_scenario(rng, paths=2)
        layout = AntennaLayout(transmit=rng.uniform(-0.05, 0.05, 4),
                               receive=rng.uniform(-0.05, 0.05, 4))
        state = make_state(rng, 2, 2)
        p_ul, rho, noise = 0.7, 0.3, 0.05
        value = uplink_sinr(scenario, layout, state, p_ul, rho, noise)

        ch = build_channels(scenario, layout)
        wv = state.W + state.V
        signal = p_ul * abs(sum(np.conj(state.w_r[i]) * ch.ul_bs[i] for i in range(2))) ** 2
        interference = 0.0
        for i in range(2):
            for j in range(2):
                for k in range(2):
                    for l in range(2):
                        interference += (np.conj(state.w_r[i]) * ch.si[i, k]
                                         * wv[k, l] * np.conj(ch.si[j, l])
                                         * state.w_r[j])
        denom = rho * interference.real + np.linalg.norm(state.w_r) ** 2 * noise
        assert value == pytest.approx(signal / denom, rel=1e-12)

    def test_monotone_in_power_and_noise(self, rng):
        scenario = make_scenario(rng, paths=2)
        layout = AntennaLayout(transmit=rng.uniform(-0.05, 0.05, 4),
                               receive=rng.uniform(-0.05, 0.05, 4))
        state = make_state(rng, 2, 2)
        low = uplink_sinr(scenario, layout, state, 0.5, 0.3, 0.05)
        high = uplink_sinr(scenario, layout, state, 1.0, 0.3, 0.05)
        assert high >= low
        noisy = uplink_sinr(scenario, layout, state, 0.5, 0.3, 0.5)
        assert noisy <= low

    def test_receive_phase_invariance(self, rng):
        scenario = make_scenario(rng, paths=2)
        layout = AntennaLayout(transmit=rng.uniform(-0.05, 0.05, 4),
                               receive=rng.uniform(-0.05, 0.05, 4))
        state = make_state(rng, 2, 2)
        rotated = BeamformingState(w_r=state.w_r * np.exp(1j * 0.77),
                                   W=state.W, V=state.V)
        args = (0.7, 0.3, 0.05)
        assert uplink_sinr(scenario, layout, state, *args) == pytest.approx(
            uplink_sinr(scenario, layout, rotated, *args), rel=1e-12)


class TestDownlinkSinr:
    def test_zero_information_covariance(self, rng):
        scenario = make_scenario(rng, paths=2)
        layout = AntennaLayout(transmit=rng.uniform(-0.05, 0.05, 4),
                               receive=rng.uniform(-0.05, 0.05, 4))
        assert downlink_sinr(scenario, layout, zero_state(2, 2), 0.5, 1e-3) == 0.0

    def test_scalar_case(self, rng):
        scenario = make_scenario(rng, paths=1, bs_dl=[2.0], ul_dl=0.0)
        state = zero_state()
        state.W = np.array([[0.25]], dtype=complex)  # |w|^2 = 0.25
        value = downlink_sinr(scenario, origin_layout(), state, 0.9, 1e-3)
        assert value == pytest.approx(abs(2.0) ** 2 * 0.25 / 1e-3, rel=1e-12)

    def test_rank_one_matches_vector_form(self, rng):
        for _ in range(10):
            scenario = make_scenario(rng, paths=3)
            layout = AntennaLayout(transmit=rng.uniform(-0.05, 0.05, 6),
                                   receive=rng.uniform(-0.05, 0.05, 6))
            state = make_state(rng, 3, 3)
            p_ul, noise = 0.4, 0.02
            value = downlink_sinr(scenario, layout, state, p_ul, noise)
            h = build_channels(scenario, layout).bs_dl
            expected = abs(np.vdot(h, state.w)) ** 2 / (
                abs(np.vdot(h, state.v)) ** 2
                + p_ul * abs(scenario.gains.ul_dl) ** 2 + noise)
            assert value == pytest.approx(expected, rel=1e-12)


class TestEveSinrs:
    def test_zero_leak_channels(self, rng):
        scenario = make_scenario(rng, paths=2, ul_eve=0.0)
        layout = AntennaLayout(transmit=rng.uniform(-0.05, 0.05, 4),
                               receive=rng.uniform(-0.05, 0.05, 4))
        state = make_state(rng, 2, 2)
        assert eve_uplink_sinr(scenario, layout, state, 0.5, 1e-3) == 0.0
        assert eve_downlink_sinr(scenario, layout, zero_state(2, 2), 0.5, 1e-3) == 0.0

    def test_scalar_cases(self, rng):
        scenario = make_scenario(rng, paths=1, bs_eve=[1.5], ul_eve=2.0)
        value = eve_uplink_sinr(scenario, origin_layout(), zero_state(), 0.5, 1e-3)
        assert value == pytest.approx(abs(2.0) ** 2 * 0.5 / 1e-3, rel=1e-12)

        scenario = make_scenario(rng, paths=1, bs_eve=[1.5], ul_eve=0.0)
        state = zero_state()
        state.W = np.array([[0.3]], dtype=complex)
        value = eve_downlink_sinr(scenario, origin_layout(), state, 0.5, 1e-3)
        assert value == pytest.approx(abs(1.5) ** 2 * 0.3 / 1e-3, rel=1e-12)

    def test_rank_one_matches_vector_form(self, rng):
        for _ in range(10):
            scenario = make_scenario(rng, paths=3)
            layout = AntennaLayout(transmit=rng.uniform(-0.05, 0.05, 6),
                                   receive=rng.uniform(-0.05, 0.05, 6))
            state = make_state(rng, 3, 3)
            p_ul, noise = 0.4, 0.02
            h = build_channels(scenario, layout).bs_eve
            leak = p_ul * abs(scenario.gains.ul_eve) ** 2

            up = eve_uplink_sinr(scenario, layout, state, p_ul, noise)
            expected_up = leak / (abs(np.vdot(h, state.w)) ** 2
                                  + abs(np.vdot(h, state.v)) ** 2 + noise)
            assert up == pytest.approx(expected_up, rel=1e-12)

            down = eve_downlink_sinr(scenario, layout, state, p_ul, noise)
            expected_down = abs(np.vdot(h, state.w)) ** 2 / (
                abs(np.vdot(h, state.v)) ** 2 + leak + noise)
            assert down == pytest.approx(expected_down, rel=1e-12)


class TestSecrecyReport:
    def test_balanced_sinrs_give_zero_rate(self, rng):
        # uplink and eavesdropper see the same SINR: secrecy rate clamps to 0
        cfg = toy_config(p_ul=1.0, noise_bs=1.0, noise_eve=1.0)
        scenario = make_scenario(rng, paths=1, ul_bs=[1.0], ul_eve=1.0,
                                 bs_dl=[0.0], bs_eve=[0.0])
        report = secrecy_report(scenario, origin_layout(), zero_state(), cfg)
        assert report.uplink_sinr == pytest.approx(report.eve_uplink_sinr)
        assert report.uplink_secrecy == 0.0

    def test_exact_one_bit(self, rng):
        # uplink SINR 3 vs eavesdropper SINR 1 -> log2(4/2) = 1 bit/s/Hz
        cfg = toy_config(p_ul=1.0, noise_bs=1.0, noise_eve=1.0)
        scenario = make_scenario(rng, paths=1, ul_bs=[np.sqrt(3.0)], ul_eve=1.0,
                                 bs_dl=[0.0], bs_eve=[0.0])
        report = secrecy_report(scenario, origin_layout(), zero_state(), cfg)
        assert report.uplink_sinr == pytest.approx(3.0)
        assert report.eve_uplink_sinr == pytest.approx(1.0)
        assert report.sum_secrecy == pytest.approx(1.0)

    def test_stronger_eavesdropper_clamps_to_zero(self, rng):
        cfg = toy_config(p_ul=1.0, noise_bs=1.0, noise_eve=1.0)
        scenario = make_scenario(rng, paths=1, ul_bs=[0.5], ul_eve=3.0,
                                 bs_dl=[0.0], bs_eve=[0.0])
        report = secrecy_report(scenario, origin_layout(), zero_state(), cfg)
        assert report.uplink_secrecy == 0.0
        assert report.sum_secrecy == 0.0

    def test_sum_is_component_sum_and_finite(self, rng):
        cfg = SystemConfig(n_t=3, n_r=3, paths=3)
        scenario = make_scenario(rng, paths=3)
        layout = AntennaLayout(transmit=rng.uniform(-0.05, 0.05, 6),
                               receive=rng.uniform(-0.05, 0.05, 6))
        report = secrecy_report(scenario, layout, make_state(rng, 3, 3), cfg)
        assert report.sum_secrecy == pytest.approx(
            report.uplink_secrecy + report.downlink_secrecy)
        assert np.isfinite(report.sum_secrecy)
        assert report.uplink_secrecy >= 0 and report.downlink_secrecy >= 0


class TestHalfDuplex:
    def test_half_rate_scaling_and_no_interference_terms(self, rng):
        cfg = toy_config(p_ul=1.0, noise_bs=1.0, noise_eve=1.0, noise_dl=1.0)
        scenario = make_scenario(rng, paths=1, ul_bs=[np.sqrt(3.0)], ul_eve=1.0,
                                 bs_dl=[0.0], bs_eve=[0.0])
        report = half_duplex_report(scenario, origin_layout(), zero_state(), cfg)
        # same SINRs as the full-duplex toy but per-user rates halved
        assert report.uplink_sinr == pytest.approx(3.0)
        assert report.sum_secrecy == pytest.approx(0.5)

    def test_time_division_beats_full_duplex_under_crushing_interference(self, rng):
        """With overwhelming residual self-interference the full-duplex
        uplink rate collapses; the time-division uplink keeps half rate."""
        cfg = SystemConfig(n_t=2, n_r=2, paths=2, rho=1e6,
                           noise_bs=1e-3, noise_dl=1e-3, noise_eve=1e-3,
                           p_ul=1.0, p_bs=1.0)
        scenario = make_scenario(rng, paths=2, ul_eve=1e-3)
        layout = AntennaLayout(transmit=rng.uniform(-0.05, 0.05, 4),
                               receive=rng.uniform(-0.05, 0.05, 4))
        state = make_state(rng, 2, 2)
        fd = secrecy_report(scenario, layout, state, cfg)
        hd = half_duplex_report(scenario, layout, state, cfg)
        assert fd.uplink_sinr < 1e-3
        assert hd.uplink_secrecy > fd.uplink_secrecy
