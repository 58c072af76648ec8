"""Closed-form receive beamforming against residual self-interference.

The uplink SINR is a generalized Rayleigh quotient; with the interference-
plus-noise covariance ``A`` it is maximized by the normalized solution of
``A x = h``. The solve uses a Hermitian positive-definite factorization
instead of forming the inverse.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve


class DegenerateChannelError(RuntimeError):
    """No uplink signal direction exists (zero uplink channel)."""


@dataclass(frozen=True)
class InterferenceCovariance:
    """Hermitian positive-definite interference-plus-noise covariance."""

    matrix: np.ndarray


def build_interference_covariance(h_si, W, V, rho, noise_bs) -> InterferenceCovariance:
    """Covariance of residual self-interference plus receive noise.

    Symmetrized as (A + A^H) / 2 to scrub floating-point asymmetry before
    factorization.
    """
    h_si = np.asarray(h_si)
    n_r = h_si.shape[0]
    a = rho * h_si @ (W + V) @ h_si.conj().T + noise_bs * np.eye(n_r)
    a = 0.5 * (a + a.conj().T)
    return InterferenceCovariance(a)


def optimal_receive_beamformer(cov, h_ul_bs) -> np.ndarray:
    """Unit-norm receive beamformer maximizing the uplink SINR.

    Accepts the covariance wrapper or a bare matrix. Raises
    :class:`DegenerateChannelError` for a (numerically) zero uplink channel
    rather than returning an arbitrary direction.
    """
    a = cov.matrix if isinstance(cov, InterferenceCovariance) else np.asarray(cov)
    h = np.asarray(h_ul_bs)
    if np.linalg.norm(h) < 1e-15:
        raise DegenerateChannelError("uplink channel is numerically zero")
    x = cho_solve(cho_factor(a, lower=True), h)
    return x / np.linalg.norm(x)
