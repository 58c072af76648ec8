"""Link SINRs, secrecy rates, and the sum secrecy rate in covariance form.

All SINRs are computed from the transmit covariances ``W`` (information)
and ``V`` (artificial noise) via trace/quadratic forms, so relaxed
covariances of any rank are evaluable; for rank-1 covariances these agree
with the vector beamforming forms. Helper quadratic forms broadcast over
leading batch dimensions, which the swarm placement search relies on.
"""

from dataclasses import dataclass

import numpy as np

from .channel import AntennaLayout, Scenario, link_channel, si_channel
from .config import SystemConfig


@dataclass
class BeamformingState:
    """Receive beamformer plus transmit covariances (and extracted vectors).

    Invariants: ``w_r`` has unit norm, ``W``/``V`` are Hermitian PSD with
    ``Tr(W + V)`` within the transmit power budget.
    """

    w_r: np.ndarray
    W: np.ndarray
    V: np.ndarray
    w: np.ndarray | None = None
    v: np.ndarray | None = None


@dataclass(frozen=True)
class RateReport:
    """Linear SINRs plus clamped secrecy rates (bits/s/Hz)."""

    uplink_sinr: float
    downlink_sinr: float
    eve_uplink_sinr: float
    eve_downlink_sinr: float
    uplink_secrecy: float
    downlink_secrecy: float
    sum_secrecy: float


@dataclass(frozen=True)
class ChannelSet:
    """All position-dependent channels for one layout (or a batch of layouts)."""

    si: np.ndarray       # (..., N_r, N_t)
    ul_bs: np.ndarray    # (..., N_r)
    bs_dl: np.ndarray    # (..., N_t)
    bs_eve: np.ndarray   # (..., N_t)
    ul_dl: complex
    ul_eve: complex


def build_channels(scenario: Scenario, layout: AntennaLayout) -> ChannelSet:
    lam = scenario.wavelength
    return ChannelSet(
        si=si_channel(layout.transmit_xy, layout.receive_xy, scenario),
        ul_bs=link_channel(layout.receive_xy, scenario.gains.ul_bs, scenario.ul_rx, lam),
        bs_dl=link_channel(layout.transmit_xy, scenario.gains.bs_dl, scenario.dl_tx, lam),
        bs_eve=link_channel(layout.transmit_xy, scenario.gains.bs_eve, scenario.eve_tx, lam),
        ul_dl=scenario.gains.ul_dl,
        ul_eve=scenario.gains.ul_eve,
    )


def quad_form(h, M):
    """Real quadratic form h^H M h, broadcasting over leading dims of h."""
    return np.einsum("...i,ij,...j->...", np.conj(h), M, h).real


def _sinr_values(ch: ChannelSet, state: BeamformingState, p_ul, rho,
                 noise_bs, noise_dl, noise_eve, duplex="fd"):
    """The four SINRs (uplink, downlink, eve-uplink, eve-downlink).

    ``duplex='hd'`` evaluates the time-division variant: no self-interference
    or cross-user interference, and no masking of the eavesdropper by the
    opposite slot's transmission.
    """
    w_r = state.w_r
    wv = state.W + state.V
    full = duplex == "fd"

    signal = p_ul * np.abs(np.einsum("i,...i->...", np.conj(w_r), ch.ul_bs)) ** 2
    noise = float(np.vdot(w_r, w_r).real) * noise_bs
    if full:
        si_eff = np.einsum("...nk,n->...k", np.conj(ch.si), w_r)
        up = signal / (rho * quad_form(si_eff, wv) + noise)
    else:
        up = signal / noise

    dl_interf = quad_form(ch.bs_dl, state.V) + noise_dl
    if full:
        dl_interf = dl_interf + p_ul * abs(ch.ul_dl) ** 2
    down = quad_form(ch.bs_dl, state.W) / dl_interf

    eve_ul_gain = p_ul * abs(ch.ul_eve) ** 2
    if full:
        eve_up = eve_ul_gain / (quad_form(ch.bs_eve, wv) + noise_eve)
    else:
        eve_up = eve_ul_gain / noise_eve
        eve_up = eve_up * np.ones_like(np.asarray(up, dtype=float))

    eve_dl_interf = quad_form(ch.bs_eve, state.V) + noise_eve
    if full:
        eve_dl_interf = eve_dl_interf + eve_ul_gain
    eve_down = quad_form(ch.bs_eve, state.W) / eve_dl_interf

    return up, down, eve_up, eve_down


def clamped_ssr(ch: ChannelSet, state: BeamformingState, config: SystemConfig,
                duplex="fd"):
    """Sum of per-user secrecy rates, each clamped at zero; broadcasts."""
    up, down, eve_up, eve_down = _sinr_values(
        ch, state, config.p_ul, config.rho,
        config.noise_bs, config.noise_dl, config.noise_eve, duplex,
    )
    r_up = np.maximum(np.log2(1.0 + up) - np.log2(1.0 + eve_up), 0.0)
    r_down = np.maximum(np.log2(1.0 + down) - np.log2(1.0 + eve_down), 0.0)
    scale = 1.0 if duplex == "fd" else 0.5
    return scale * (r_up + r_down)


def report_from_channels(ch: ChannelSet, state: BeamformingState,
                         config: SystemConfig, duplex="fd") -> RateReport:
    up, down, eve_up, eve_down = _sinr_values(
        ch, state, config.p_ul, config.rho,
        config.noise_bs, config.noise_dl, config.noise_eve, duplex,
    )
    scale = 1.0 if duplex == "fd" else 0.5
    r_up = scale * max(np.log2(1.0 + up) - np.log2(1.0 + eve_up), 0.0)
    r_down = scale * max(np.log2(1.0 + down) - np.log2(1.0 + eve_down), 0.0)
    return RateReport(
        uplink_sinr=float(up), downlink_sinr=float(down),
        eve_uplink_sinr=float(eve_up), eve_downlink_sinr=float(eve_down),
        uplink_secrecy=float(r_up), downlink_secrecy=float(r_down),
        sum_secrecy=float(r_up + r_down),
    )


def uplink_sinr(scenario, layout, state, p_ul, rho, noise_bs) -> float:
    """Uplink SINR at the BS combiner output.

    Numerator is the combined uplink signal power; the denominator adds the
    residual self-interference power (covariance form) and thermal noise.
    """
    ch = build_channels(scenario, layout)
    up, _, _, _ = _sinr_values(ch, state, p_ul, rho, noise_bs, 1.0, 1.0)
    return float(up)


def downlink_sinr(scenario, layout, state, p_ul, noise_dl) -> float:
    """Downlink user SINR: information power over AN leakage, uplink
    co-channel interference, and noise."""
    ch = build_channels(scenario, layout)
    _, down, _, _ = _sinr_values(ch, state, p_ul, 0.0, 1.0, noise_dl, 1.0)
    return float(down)


def eve_uplink_sinr(scenario, layout, state, p_ul, noise_eve) -> float:
    """Eavesdropper SINR when intercepting the uplink transmission."""
    ch = build_channels(scenario, layout)
    _, _, eve_up, _ = _sinr_values(ch, state, p_ul, 0.0, 1.0, 1.0, noise_eve)
    return float(eve_up)


def eve_downlink_sinr(scenario, layout, state, p_ul, noise_eve) -> float:
    """Eavesdropper SINR when intercepting the downlink transmission."""
    ch = build_channels(scenario, layout)
    _, _, _, eve_down = _sinr_values(ch, state, p_ul, 0.0, 1.0, 1.0, noise_eve)
    return float(eve_down)


def secrecy_report(scenario, layout, state, config: SystemConfig) -> RateReport:
    """Full-duplex rate report; per-user secrecy rates are clamped at zero."""
    return report_from_channels(build_channels(scenario, layout), state, config, "fd")


def half_duplex_report(scenario, layout, state, config: SystemConfig) -> RateReport:
    """Time-division rate report: per-slot metrics, half-rate per user."""
    return report_from_channels(build_channels(scenario, layout), state, config, "hd")
