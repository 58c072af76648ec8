"""Field-response channel synthesis and random scenario generation.

Channels are deterministic functions of the movable-antenna positions:
each propagation path contributes a unit-modulus phasor whose phase is
the projection of the antenna position onto the path's wave vector
``s = [sin(theta) * cos(phi), cos(theta)]`` scaled by ``2 * pi / wavelength``.
Random scenarios follow a geometry channel model: uniform node placement
in a disk around the base station, uniform path angles, and complex
Gaussian path gains with distance-based power.
"""

import hashlib
from dataclasses import dataclass

import numpy as np

from .config import SystemConfig, check_config

# node placement disk radius around the BS, and the floor applied to every
# propagation distance so the 1 m reference path loss stays meaningful
CELL_RADIUS_M = 50.0
MIN_NODE_DISTANCE_M = 1.0


@dataclass(frozen=True)
class PathAngles:
    """Per-path elevation/azimuth angles of one channel side, radians in [0, pi]."""

    elevation: np.ndarray
    azimuth: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "elevation", np.atleast_1d(np.asarray(self.elevation, dtype=float)))
        object.__setattr__(self, "azimuth", np.atleast_1d(np.asarray(self.azimuth, dtype=float)))
        if self.elevation.shape != self.azimuth.shape:
            raise ValueError("elevation and azimuth must have the same length")

    def __len__(self):
        return self.elevation.size

    def wave_vectors(self) -> np.ndarray:
        """(L, 2) matrix of normalized wave vectors, one row per path."""
        return np.stack(
            [np.sin(self.elevation) * np.cos(self.azimuth), np.cos(self.elevation)],
            axis=-1,
        )


@dataclass(frozen=True)
class PathGains:
    """Complex path-gain responses between region origins and node antennas."""

    si: np.ndarray        # (L_rx, L_tx) transmit-origin -> receive-origin response
    ul_bs: np.ndarray     # (L,) uplink user -> BS receive origin
    bs_dl: np.ndarray     # (L,) BS transmit origin -> downlink user
    bs_eve: np.ndarray    # (L,) BS transmit origin -> eavesdropper
    ul_dl: complex        # scalar uplink user -> downlink user
    ul_eve: complex       # scalar uplink user -> eavesdropper


@dataclass(frozen=True)
class AntennaLayout:
    """Stacked transmit/receive antenna coordinates in region-local meters.

    Both vectors store ``[x_1, y_1, x_2, y_2, ...]``; the region origin is
    the center of the square moving region.
    """

    transmit: np.ndarray
    receive: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "transmit", np.asarray(self.transmit, dtype=float).ravel())
        object.__setattr__(self, "receive", np.asarray(self.receive, dtype=float).ravel())

    @property
    def n_t(self) -> int:
        return self.transmit.size // 2

    @property
    def n_r(self) -> int:
        return self.receive.size // 2

    @property
    def transmit_xy(self) -> np.ndarray:
        return self.transmit.reshape(-1, 2)

    @property
    def receive_xy(self) -> np.ndarray:
        return self.receive.reshape(-1, 2)


@dataclass(frozen=True)
class Scenario:
    """One random channel realization: path angles, gains, and geometry."""

    si_tx: PathAngles     # self-interference channel, transmit-side paths
    si_rx: PathAngles     # self-interference channel, receive-side paths
    ul_rx: PathAngles     # uplink user -> BS, receive-side paths
    dl_tx: PathAngles     # BS -> downlink user, transmit-side paths
    eve_tx: PathAngles    # BS -> eavesdropper, transmit-side paths
    gains: PathGains
    d_ul_bs: float
    d_bs_dl: float
    d_bs_eve: float
    d_ul_dl: float
    d_ul_eve: float
    wavelength: float

    def digest(self) -> str:
        """Stable hex digest of the realization, for pairing checks."""
        parts = [
            self.si_tx.elevation, self.si_tx.azimuth,
            self.si_rx.elevation, self.si_rx.azimuth,
            self.ul_rx.elevation, self.ul_rx.azimuth,
            self.dl_tx.elevation, self.dl_tx.azimuth,
            self.eve_tx.elevation, self.eve_tx.azimuth,
            self.gains.si, self.gains.ul_bs, self.gains.bs_dl, self.gains.bs_eve,
            np.asarray([self.gains.ul_dl, self.gains.ul_eve]),
            np.asarray([self.d_ul_bs, self.d_bs_dl, self.d_bs_eve,
                        self.d_ul_dl, self.d_ul_eve, self.wavelength]),
        ]
        h = hashlib.sha256()
        for arr in parts:
            h.update(np.ascontiguousarray(arr).tobytes())
        return h.hexdigest()[:16]


def phase_difference(position, elevation, azimuth, wavelength):
    """Phase advance of one path at ``position`` relative to the region origin.

    Returns ``2 * pi * (s . position) / wavelength`` with
    ``s = [sin(elevation) * cos(azimuth), cos(elevation)]``. Broadcasts over
    array-valued angles.
    """
    position = np.asarray(position, dtype=float)
    sx = np.sin(elevation) * np.cos(azimuth)
    sy = np.cos(elevation)
    return 2.0 * np.pi * (sx * position[..., 0] + sy * position[..., 1]) / wavelength


def field_response_vector(position, angles: PathAngles, wavelength) -> np.ndarray:
    """Unit-modulus response of one antenna position across all paths, shape (L,)."""
    phases = phase_difference(
        np.asarray(position, dtype=float)[None, :],
        angles.elevation, angles.azimuth, wavelength,
    )
    return np.exp(1j * phases)


def field_response_matrix(positions, angles: PathAngles, wavelength) -> np.ndarray:
    """Response of N positions across L paths; column n is the n-th antenna.

    ``positions`` has shape (..., N, 2); the result has shape (..., L, N) and
    broadcasts over any leading batch dimensions.
    """
    positions = np.asarray(positions, dtype=float)
    s = angles.wave_vectors()  # (L, 2)
    phases = (2.0 * np.pi / wavelength) * np.einsum("la,...na->...ln", s, positions)
    return np.exp(1j * phases)


def si_channel(transmit, receive, scenario: Scenario) -> np.ndarray:
    """Self-interference channel between the transmit and receive arrays.

    Composes the receive-side response (conjugated), the origin-to-origin
    path response, and the transmit-side response. Shapes (N_t, 2)/(2 N_t,)
    are both accepted; batched leading dimensions broadcast through.
    """
    t_xy = _as_xy(transmit)
    r_xy = _as_xy(receive)
    g = field_response_matrix(t_xy, scenario.si_tx, scenario.wavelength)
    f = field_response_matrix(r_xy, scenario.si_rx, scenario.wavelength)
    sigma = scenario.gains.si
    if sigma.shape != (len(scenario.si_rx), len(scenario.si_tx)):
        raise ValueError(
            f"origin path response has shape {sigma.shape}, expected "
            f"{(len(scenario.si_rx), len(scenario.si_tx))}"
        )
    return np.einsum("...ln,lm,...mk->...nk", f.conj(), sigma, g)


def link_channel(positions, gains, angles: PathAngles, wavelength) -> np.ndarray:
    """Single-user channel seen by an N-antenna array side, shape (..., N).

    Covers both orientations: user-to-array (conjugate receive response times
    path gains) and array-to-user (conjugate transmit response times gains).
    """
    gains = np.asarray(gains)
    if gains.size != len(angles):
        raise ValueError(f"got {gains.size} path gains for {len(angles)} paths")
    response = field_response_matrix(_as_xy(positions), angles, wavelength)
    return np.einsum("...ln,l->...n", response.conj(), gains)


def _as_xy(positions) -> np.ndarray:
    positions = np.asarray(positions, dtype=float)
    if positions.ndim == 1:
        return positions.reshape(-1, 2)
    return positions


def _cscg(rng, variance, size=None):
    """Circularly symmetric complex Gaussian draw(s) with the given variance."""
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


def _disk_point(rng, radius):
    r = radius * np.sqrt(rng.uniform())
    ang = rng.uniform(0.0, 2.0 * np.pi)
    return np.array([r * np.cos(ang), r * np.sin(ang)])


def _uniform_angles(rng, count) -> PathAngles:
    return PathAngles(rng.uniform(0.0, np.pi, count), rng.uniform(0.0, np.pi, count))


def sample_scenario(config: SystemConfig, seed) -> Scenario:
    """Draw one random scenario; a pure function of (config, seed).

    Node positions are uniform in a disk of radius 50 m centered on the BS,
    all path angles are i.i.d. uniform on [0, pi], and path gains are
    complex Gaussian with per-path variance ``beta * d**-alpha / L`` (scalar
    user-user channels carry the full ``beta * d**-alpha``). The
    origin-to-origin self-interference response is diagonal with per-path
    variance ``1 / L`` so the residual-interference ratio alone sets the
    self-interference strength.
    """
    check_config(config)
    rng = np.random.default_rng(seed)
    L = config.paths

    ul = _disk_point(rng, CELL_RADIUS_M)
    dl = _disk_point(rng, CELL_RADIUS_M)
    eve = _disk_point(rng, CELL_RADIUS_M)
    d_ul_bs = max(float(np.hypot(*ul)), MIN_NODE_DISTANCE_M)
    d_bs_dl = max(float(np.hypot(*dl)), MIN_NODE_DISTANCE_M)
    d_bs_eve = max(float(np.hypot(*eve)), MIN_NODE_DISTANCE_M)
    d_ul_dl = max(float(np.hypot(*(ul - dl))), MIN_NODE_DISTANCE_M)
    d_ul_eve = max(float(np.hypot(*(ul - eve))), MIN_NODE_DISTANCE_M)

    si_tx = _uniform_angles(rng, L)
    si_rx = _uniform_angles(rng, L)
    ul_rx = _uniform_angles(rng, L)
    dl_tx = _uniform_angles(rng, L)
    eve_tx = _uniform_angles(rng, L)

    def path_var(d):
        return config.beta * d ** (-config.alpha) / L

    gains = PathGains(
        si=np.diag(_cscg(rng, 1.0 / L, L)),
        ul_bs=_cscg(rng, path_var(d_ul_bs), L),
        bs_dl=_cscg(rng, path_var(d_bs_dl), L),
        bs_eve=_cscg(rng, path_var(d_bs_eve), L),
        ul_dl=complex(_cscg(rng, config.beta * d_ul_dl ** (-config.alpha))),
        ul_eve=complex(_cscg(rng, config.beta * d_ul_eve ** (-config.alpha))),
    )
    return Scenario(
        si_tx=si_tx, si_rx=si_rx, ul_rx=ul_rx, dl_tx=dl_tx, eve_tx=eve_tx,
        gains=gains,
        d_ul_bs=d_ul_bs, d_bs_dl=d_bs_dl, d_bs_eve=d_bs_eve,
        d_ul_dl=d_ul_dl, d_ul_eve=d_ul_eve,
        wavelength=config.wavelength,
    )
