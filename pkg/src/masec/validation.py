"""Input and solution validation helpers.

These back the estimator's ``fit`` argument checks and the exact
post-checks applied to every stage output of the alternating optimizer:
unit-norm receive beamformer (1e-12), PSD covariances (eigenvalue floor
-1e-9), transmit power within budget (relative 1e-9), coordinates inside
the region, and pairwise spacing at least the configured minimum.
"""

import numpy as np

from .channel import MIN_NODE_DISTANCE_M, AntennaLayout, Scenario
from .config import SystemConfig
from .positioning import violation_count

NORM_TOL = 1e-12
EIG_FLOOR = -1e-9
TRACE_SLACK = 1e-9


def check_scenario(scenario: Scenario, config: SystemConfig) -> Scenario:
    """Validate dimensions, angle ranges, finiteness, and geometry."""
    L = config.paths
    sides = {
        "si_tx": scenario.si_tx, "si_rx": scenario.si_rx,
        "ul_rx": scenario.ul_rx, "dl_tx": scenario.dl_tx,
        "eve_tx": scenario.eve_tx,
    }
    for name, angles in sides.items():
        if len(angles) != L:
            raise ValueError(f"{name}: expected {L} paths, got {len(angles)}")
        for arr in (angles.elevation, angles.azimuth):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name}: non-finite angle")
            if np.any(arr < 0) or np.any(arr > np.pi):
                raise ValueError(f"{name}: angle outside [0, pi]")
    gains = scenario.gains
    if gains.si.shape != (L, L):
        raise ValueError(f"origin path response must be {L}x{L}, got {gains.si.shape}")
    for name, arr in (("ul_bs", gains.ul_bs), ("bs_dl", gains.bs_dl),
                      ("bs_eve", gains.bs_eve)):
        if np.asarray(arr).size != L:
            raise ValueError(f"{name}: expected {L} path gains")
    for name, arr in (("si", gains.si), ("ul_bs", gains.ul_bs),
                      ("bs_dl", gains.bs_dl), ("bs_eve", gains.bs_eve),
                      ("ul_dl", gains.ul_dl), ("ul_eve", gains.ul_eve)):
        if not np.all(np.isfinite(np.asarray(arr))):
            raise ValueError(f"{name}: non-finite path gain")
    for name in ("d_ul_bs", "d_bs_dl", "d_bs_eve", "d_ul_dl", "d_ul_eve"):
        if getattr(scenario, name) < MIN_NODE_DISTANCE_M:
            raise ValueError(f"{name} below the minimum placement distance")
    if scenario.wavelength <= 0:
        raise ValueError("wavelength must be positive")
    return scenario


def layout_in_region(layout: AntennaLayout, config: SystemConfig) -> bool:
    hw = config.half_width
    return bool(np.all(np.abs(layout.transmit) <= hw)
                and np.all(np.abs(layout.receive) <= hw))


def layout_is_feasible(layout: AntennaLayout, config: SystemConfig) -> bool:
    """Region membership plus minimum inter-antenna spacing on both sides."""
    return (layout_in_region(layout, config)
            and violation_count(layout.transmit, config.min_distance) == 0
            and violation_count(layout.receive, config.min_distance) == 0)


def check_layout(layout: AntennaLayout, config: SystemConfig) -> AntennaLayout:
    if layout.n_t != config.n_t or layout.n_r != config.n_r:
        raise ValueError(
            f"layout has {layout.n_t}x{layout.n_r} antennas, "
            f"config expects {config.n_t}x{config.n_r}"
        )
    if not layout_is_feasible(layout, config):
        raise ValueError("layout violates region bounds or minimum spacing")
    return layout


def check_state(state, config: SystemConfig):
    """Exact feasibility post-check of a beamforming state."""
    norm = np.linalg.norm(state.w_r)
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"receive beamformer norm {norm!r} is not 1")
    for name, mat in (("W", state.W), ("V", state.V)):
        if not np.allclose(mat, mat.conj().T, atol=1e-10):
            raise ValueError(f"{name} is not Hermitian")
        if float(np.linalg.eigvalsh(mat).min()) < EIG_FLOOR:
            raise ValueError(f"{name} has an eigenvalue below {EIG_FLOOR}")
    total = float(np.trace(state.W).real + np.trace(state.V).real)
    if total > config.p_bs * (1.0 + TRACE_SLACK):
        raise ValueError(f"transmit power {total!r} exceeds the budget {config.p_bs!r}")
    return state
