"""Particle-swarm placement of movable antennas under spacing constraints.

One swarm run moves all antennas of one side (transmit or receive) at
once inside the square region, scoring each candidate by the clamped sum
secrecy rate minus a large penalty per antenna that sits closer than the
minimum spacing to a neighbor. The penalty factor dominates every
achievable rate, so any spacing-feasible placement outscores any
infeasible one. Candidate layouts are evaluated in batch (the channel
responses broadcast over particles).
"""

from dataclasses import dataclass

import numpy as np

from .channel import AntennaLayout, field_response_matrix, link_channel
from .config import SystemConfig
from .metrics import ChannelSet, clamped_ssr


@dataclass(frozen=True)
class PsoParams:
    """Swarm hyperparameters plus the region/spacing geometry."""

    particles: int
    iterations: int
    c1: float
    c2: float
    omega_min: float
    omega_max: float
    penalty: float
    half_width: float
    min_distance: float

    def __post_init__(self):
        if self.particles < 1:
            raise ValueError("need at least one particle")
        if self.iterations < 0:
            raise ValueError("iteration count must be non-negative")
        if not 0 < self.omega_min <= self.omega_max:
            raise ValueError("need 0 < omega_min <= omega_max")
        if self.c1 <= 0 or self.c2 <= 0:
            raise ValueError("learning factors must be positive")
        if self.penalty <= 0:
            raise ValueError("penalty factor must be positive")
        if self.half_width < 0 or self.min_distance < 0:
            raise ValueError("geometry parameters must be non-negative")

    @classmethod
    def from_config(cls, config: SystemConfig) -> "PsoParams":
        return cls(
            particles=config.particles, iterations=config.pso_iters,
            c1=config.c1, c2=config.c2,
            omega_min=config.omega_min, omega_max=config.omega_max,
            penalty=config.penalty, half_width=config.half_width,
            min_distance=config.min_distance,
        )


def inertia_weight(k, total, omega_min, omega_max) -> float:
    """Linearly decreasing inertia: omega_max at k=0 down to omega_min at k=total."""
    return omega_max - (omega_max - omega_min) * k / total


def clamp_to_region(x, half_width):
    """Project every coordinate into [-half_width, half_width]; idempotent."""
    return np.clip(x, -half_width, half_width)


def _violations(xy, min_distance):
    """Number of antennas with any neighbor closer than ``min_distance``.

    ``xy`` has shape (..., N, 2); returns integer counts of shape (...,).
    Antennas are counted, not pairs; a pair exactly at the minimum distance
    is feasible.
    """
    n = xy.shape[-2]
    if n < 2 or min_distance <= 0:
        return np.zeros(xy.shape[:-2], dtype=int)
    diff = xy[..., :, None, :] - xy[..., None, :, :]
    dist = np.linalg.norm(diff, axis=-1)
    dist = dist + np.where(np.eye(n, dtype=bool), np.inf, 0.0)
    return (dist < min_distance).any(axis=-1).sum(axis=-1)


def violation_count(positions, min_distance) -> int:
    """Spacing violations of one stacked position vector (2N reals)."""
    xy = np.asarray(positions, dtype=float).reshape(-1, 2)
    return int(_violations(xy, min_distance))


def make_side_objective(side, layout: AntennaLayout, scenario, state,
                        config: SystemConfig, duplex="fd"):
    """Batched fitness for candidate placements of one side.

    Returns a callable mapping stacked coordinates of shape (P, 2N) to
    fitness values of shape (P,): clamped sum secrecy rate minus
    ``penalty * violations``. The opposite side of ``layout`` and the
    beamforming state stay fixed; side-independent response factors are
    precomputed once.
    """
    if side not in ("transmit", "receive"):
        raise ValueError(f"unknown side {side!r}")
    lam = scenario.wavelength
    gains = scenario.gains

    if side == "transmit":
        f_rx = field_response_matrix(layout.receive_xy, scenario.si_rx, lam)
        left = f_rx.conj().T @ gains.si  # (N_r, L_t)
        ul_bs = link_channel(layout.receive_xy, gains.ul_bs, scenario.ul_rx, lam)

        def channels(xy):
            g_tx = field_response_matrix(xy, scenario.si_tx, lam)
            return ChannelSet(
                si=np.einsum("nl,...lk->...nk", left, g_tx),
                ul_bs=ul_bs,
                bs_dl=link_channel(xy, gains.bs_dl, scenario.dl_tx, lam),
                bs_eve=link_channel(xy, gains.bs_eve, scenario.eve_tx, lam),
                ul_dl=gains.ul_dl, ul_eve=gains.ul_eve,
            )
    else:
        g_tx = field_response_matrix(layout.transmit_xy, scenario.si_tx, lam)
        right = gains.si @ g_tx  # (L_r, N_t)
        bs_dl = link_channel(layout.transmit_xy, gains.bs_dl, scenario.dl_tx, lam)
        bs_eve = link_channel(layout.transmit_xy, gains.bs_eve, scenario.eve_tx, lam)

        def channels(xy):
            f_rx = field_response_matrix(xy, scenario.si_rx, lam)
            return ChannelSet(
                si=np.einsum("...ln,lk->...nk", f_rx.conj(), right),
                ul_bs=link_channel(xy, gains.ul_bs, scenario.ul_rx, lam),
                bs_dl=bs_dl, bs_eve=bs_eve,
                ul_dl=gains.ul_dl, ul_eve=gains.ul_eve,
            )

    def objective(stacked):
        stacked = np.asarray(stacked, dtype=float)
        xy = stacked.reshape(*stacked.shape[:-1], -1, 2)
        rate = clamped_ssr(channels(xy), state, config, duplex)
        if np.any(rate >= config.penalty):
            raise ValueError(
                "penalty factor does not dominate the achievable rate; "
                "raise the penalty config value"
            )
        return rate - config.penalty * _violations(xy, config.min_distance)

    return objective


def placement_fitness(candidate, side, layout, scenario, state,
                      config: SystemConfig, duplex="fd") -> float:
    """Fitness of one candidate placement vector for the given side."""
    objective = make_side_objective(side, layout, scenario, state, config, duplex)
    return float(objective(np.asarray(candidate, dtype=float)[None, :])[0])


@dataclass
class PsoResult:
    positions: np.ndarray
    fitness: float
    feasible: bool
    history: list


def pso_optimize(initial, objective, params: PsoParams, seed) -> PsoResult:
    """Run the swarm from a warm start; deterministic given the seed.

    Particle 1 starts at ``initial`` (so the returned fitness never falls
    below the incumbent's), the rest start uniformly in the region with
    velocities uniform in [-half_width/2, half_width/2] per coordinate.
    Personal/global bests update on strict improvement only, keeping the
    earliest best under ties. ``history`` records the global best fitness
    per iteration and is non-decreasing.
    """
    rng = np.random.default_rng(seed)
    initial = np.asarray(initial, dtype=float).ravel()
    dim = initial.size
    count = params.particles
    hw = params.half_width

    x = np.empty((count, dim))
    x[0] = clamp_to_region(initial, hw)
    if count > 1:
        x[1:] = rng.uniform(-hw, hw, (count - 1, dim))
    vel = rng.uniform(-hw / 2.0, hw / 2.0, (count, dim))

    fit = np.asarray(objective(x), dtype=float)
    pbest = x.copy()
    pbest_fit = fit.copy()
    lead = int(np.argmax(fit))
    gbest = x[lead].copy()
    gbest_fit = float(fit[lead])
    history = [gbest_fit]

    for k in range(1, params.iterations + 1):
        omega = inertia_weight(k, params.iterations, params.omega_min, params.omega_max)
        e1 = rng.uniform(size=(count, dim))
        e2 = rng.uniform(size=(count, dim))
        vel = (omega * vel
               + params.c1 * e1 * (pbest - x)
               + params.c2 * e2 * (gbest - x))
        x = clamp_to_region(x + vel, hw)
        fit = np.asarray(objective(x), dtype=float)

        improved = fit > pbest_fit
        pbest[improved] = x[improved]
        pbest_fit[improved] = fit[improved]
        lead = int(np.argmax(fit))
        if fit[lead] > gbest_fit:
            gbest = x[lead].copy()
            gbest_fit = float(fit[lead])
        history.append(gbest_fit)

    feasible = violation_count(gbest, params.min_distance) == 0
    return PsoResult(positions=gbest, fitness=gbest_fit, feasible=feasible,
                     history=history)


def optimize_positions(layout: AntennaLayout, scenario, state,
                       config: SystemConfig, seed, duplex="fd"):
    """Optimize all transmit positions, then all receive positions.

    Returns ``(layout, feasible)``; the flag is False only if some side
    never produced a spacing-feasible particle (it cannot happen when the
    incumbent layout is feasible, since the warm-start particle wins any
    penalized candidate).
    """
    params = PsoParams.from_config(config)
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    t_seed, r_seed = root.spawn(2)

    t_objective = make_side_objective("transmit", layout, scenario, state, config, duplex)
    t_result = pso_optimize(layout.transmit, t_objective, params, t_seed)
    mid = AntennaLayout(transmit=t_result.positions, receive=layout.receive)

    r_objective = make_side_objective("receive", mid, scenario, state, config, duplex)
    r_result = pso_optimize(layout.receive, r_objective, params, r_seed)

    final = AntennaLayout(transmit=t_result.positions, receive=r_result.positions)
    return final, bool(t_result.feasible and r_result.feasible)
