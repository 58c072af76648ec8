"""Shared builders for hand-crafted scenarios and beamforming states."""

import numpy as np
import pytest

from masec import (BeamformingState, PathAngles, PathGains, Scenario,
                   SystemConfig)


def make_angles(rng, count):
    return PathAngles(rng.uniform(0, np.pi, count), rng.uniform(0, np.pi, count))


def make_scenario(rng, paths=3, wavelength=0.1, si=None, ul_bs=None, bs_dl=None,
                  bs_eve=None, ul_dl=None, ul_eve=None, scale=1.0):
    """Scenario with random angles and controllable path gains.

    Gains default to unit-scale complex Gaussians (times ``scale``), which
    keeps oracle comparisons well conditioned.
    """
    def cn(size=None):
        return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2)

    gains = PathGains(
        si=cn((paths, paths)) if si is None else np.asarray(si, dtype=complex),
        ul_bs=cn(paths) if ul_bs is None else np.asarray(ul_bs, dtype=complex),
        bs_dl=cn(paths) if bs_dl is None else np.asarray(bs_dl, dtype=complex),
        bs_eve=cn(paths) if bs_eve is None else np.asarray(bs_eve, dtype=complex),
        ul_dl=complex(cn()) if ul_dl is None else complex(ul_dl),
        ul_eve=complex(cn()) if ul_eve is None else complex(ul_eve),
    )
    return Scenario(
        si_tx=make_angles(rng, paths), si_rx=make_angles(rng, paths),
        ul_rx=make_angles(rng, paths), dl_tx=make_angles(rng, paths),
        eve_tx=make_angles(rng, paths), gains=gains,
        d_ul_bs=10.0, d_bs_dl=12.0, d_bs_eve=15.0, d_ul_dl=20.0, d_ul_eve=25.0,
        wavelength=wavelength,
    )


def make_state(rng, n_t, n_r, power=1.0, use_an=True):
    """Feasible random state: unit receive beamformer, rank-1 covariances."""
    w_r = rng.standard_normal(n_r) + 1j * rng.standard_normal(n_r)
    w_r = w_r / np.linalg.norm(w_r)
    w = rng.standard_normal(n_t) + 1j * rng.standard_normal(n_t)
    w = np.sqrt(power / 2.0) * w / np.linalg.norm(w)
    if use_an:
        v = rng.standard_normal(n_t) + 1j * rng.standard_normal(n_t)
        v = np.sqrt(power / 2.0) * v / np.linalg.norm(v)
    else:
        v = np.zeros(n_t, dtype=complex)
    return BeamformingState(w_r=w_r, W=np.outer(w, w.conj()),
                            V=np.outer(v, v.conj()), w=w, v=v)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def default_config():
    return SystemConfig()
