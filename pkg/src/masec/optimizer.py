"""Alternating optimization of beamformers and antenna placements.

One outer iteration updates, in order: all antenna positions (swarm
search, transmit side then receive side), the transmit covariances
(successive linearization with rank-1 extraction), and the receive
beamformer (closed form). A monotonicity guard re-evaluates the clamped
sum secrecy rate after every stage and keeps the incumbent whenever a
stage's output would lower it beyond numerical slack, so the recorded
rate history never decreases. Benchmark variants disable individual
ingredients: artificial noise, antenna movement, or full-duplex
operation (time division instead).
"""

import time
from dataclasses import dataclass, replace as dc_replace

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .channel import AntennaLayout, sample_scenario
from .config import SystemConfig, check_config
from .metrics import (BeamformingState, build_channels, report_from_channels)
from .positioning import optimize_positions, violation_count
from .receive import (DegenerateChannelError, build_interference_covariance,
                      optimal_receive_beamformer)
from .records import ExperimentRecord
from .transmit import (InnerSolverError, LinkPowers, effective_channels,
                       full_duplex_objective, half_duplex_objective,
                       rank_one_extract, sca_loop)
from .validation import (check_layout, check_scenario, check_state,
                         layout_is_feasible)

# slack for the per-stage monotonicity guard on the clamped sum secrecy rate
GUARD_SLACK = 1e-9

SCHEMES = ("MA-FD-PSO", "MA-FD-PSO-NoAN", "FPA-FD", "MA-FD-RP", "MA-HD-PSO")
_SCHEME_CODES = {name: index for index, name in enumerate(SCHEMES)}


@dataclass(frozen=True)
class SchemeTraits:
    moves_antennas: bool
    uses_an: bool
    duplex: str
    fixed_grid: bool = False


_TRAITS = {
    "MA-FD-PSO": SchemeTraits(True, True, "fd"),
    "MA-FD-PSO-NoAN": SchemeTraits(True, False, "fd"),
    "FPA-FD": SchemeTraits(False, True, "fd", fixed_grid=True),
    "MA-FD-RP": SchemeTraits(False, True, "fd"),
    "MA-HD-PSO": SchemeTraits(True, True, "hd"),
}


class StageError(RuntimeError):
    """A sub-solver failed; names the offending stage."""

    def __init__(self, stage, message):
        super().__init__(f"stage '{stage}': {message}")
        self.stage = stage


@dataclass
class AoTrace:
    """Per-iteration record of one alternating-optimization run."""

    ssr: list
    layouts: list
    states: list
    stage_seconds: list
    guard_events: list
    tightness: list
    termination: str = "running"

    @property
    def n_iterations(self) -> int:
        return len(self.ssr) - 1

    def iteration_rows(self):
        """JSON-able dict per outer iteration (for JSON-lines tracing)."""
        rows = []
        for c in range(1, len(self.ssr)):
            rows.append({
                "iteration": c,
                "ssr": self.ssr[c],
                "stage_seconds": self.stage_seconds[c - 1],
            })
        return rows


def random_feasible_layout(config: SystemConfig, rng, max_attempts=100_000) -> AntennaLayout:
    """Rejection-sample a layout meeting region bounds and minimum spacing."""
    hw = config.half_width

    def side(count):
        for _ in range(max_attempts):
            candidate = rng.uniform(-hw, hw, 2 * count)
            if violation_count(candidate, config.min_distance) == 0:
                return candidate
        raise StageError(
            "layout_init",
            f"no feasible placement of {count} antennas found in "
            f"{max_attempts} attempts; region too small for the spacing",
        )

    return AntennaLayout(transmit=side(config.n_t), receive=side(config.n_r))


def _grid_side(count, spacing, half_width) -> np.ndarray:
    """Half-wavelength reference placement: square grid when count is a
    perfect square, otherwise a line clamped into the region."""
    root = int(np.sqrt(count))
    if root * root == count:
        offsets = (np.arange(root) - (root - 1) / 2.0) * spacing
        xx, yy = np.meshgrid(offsets, offsets, indexing="ij")
        xy = np.column_stack([xx.ravel(), yy.ravel()])
    else:
        xs = (np.arange(count) - (count - 1) / 2.0) * spacing
        xy = np.column_stack([xs, np.zeros(count)])
    return np.clip(xy, -half_width, half_width).ravel()


def fixed_grid_layout(config: SystemConfig) -> AntennaLayout:
    """Static reference arrays centered in each region at lambda/2 spacing."""
    spacing = config.wavelength / 2.0
    return AntennaLayout(
        transmit=_grid_side(config.n_t, spacing, config.half_width),
        receive=_grid_side(config.n_r, spacing, config.half_width),
    )


def initialize_state(scenario, config: SystemConfig, seed, layout=None,
                     use_an=True):
    """Feasible starting point: random (or given) layout, downlink-matched
    information beam at half power, isotropic artificial noise at half
    power, matched-filter receive beamformer."""
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    if layout is None:
        layout = random_feasible_layout(config, np.random.default_rng(root))
    ch = build_channels(scenario, layout)

    h_dl = ch.bs_dl
    dl_norm = np.linalg.norm(h_dl)
    if dl_norm > 1e-15:
        w = np.sqrt(config.p_bs / 2.0) * h_dl / dl_norm
    else:
        w = np.full(config.n_t, np.sqrt(config.p_bs / (2.0 * config.n_t)), dtype=complex)
    ub_norm = np.linalg.norm(ch.ul_bs)
    if ub_norm > 1e-15:
        w_r = ch.ul_bs / ub_norm
    else:
        # any unit vector is uplink-optimal for a zero uplink channel
        w_r = np.zeros(config.n_r, dtype=complex)
        w_r[0] = 1.0

    n_t = config.n_t
    v_cov = (config.p_bs / (2.0 * n_t)) * np.eye(n_t, dtype=complex) if use_an \
        else np.zeros((n_t, n_t), dtype=complex)
    state = BeamformingState(w_r=w_r, W=np.outer(w, w.conj()), V=v_cov, w=w, v=None)
    return layout, state


def alternating_optimize(scenario, config: SystemConfig, seed, *, use_an=True,
                         duplex="fd", move_antennas=True, layout=None):
    """Run the outer loop; returns ``(layout, state, trace)``.

    Terminates when the relative rate increment drops to the configured
    threshold or the iteration cap is reached. Every stage output is
    feasibility-checked; failures raise :class:`StageError`.
    """
    check_config(config)
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    init_seed, *stage_seeds = root.spawn(1 + config.ao_iters)

    layout, state = initialize_state(scenario, config, init_seed, layout=layout,
                                     use_an=use_an)
    si_rho = config.rho if duplex == "fd" else 0.0
    powers = LinkPowers.from_scenario(scenario, config)
    make_objective = full_duplex_objective if duplex == "fd" else half_duplex_objective

    ch = build_channels(scenario, layout)
    ssr = report_from_channels(ch, state, config, duplex).sum_secrecy
    trace = AoTrace(ssr=[ssr], layouts=[layout], states=[state],
                    stage_seconds=[], guard_events=[], tightness=[])

    for c in range(1, config.ao_iters + 1):
        seconds = {}

        if move_antennas:
            start = time.perf_counter()
            try:
                candidate, feasible = optimize_positions(
                    layout, scenario, state, config, stage_seeds[c - 1], duplex)
            except ValueError as exc:
                raise StageError("positions", str(exc)) from exc
            if not feasible:
                raise StageError("positions", "no spacing-feasible swarm particle")
            check_layout(candidate, config)
            cand_ch = build_channels(scenario, candidate)
            cand_ssr = report_from_channels(cand_ch, state, config, duplex).sum_secrecy
            if cand_ssr >= ssr - GUARD_SLACK:
                layout, ch, ssr = candidate, cand_ch, cand_ssr
            else:
                trace.guard_events.append({"iteration": c, "stage": "positions"})
            seconds["positions"] = time.perf_counter() - start

        start = time.perf_counter()
        eff = effective_channels(ch, state.w_r, si_rho)
        objective = make_objective(eff, powers)
        try:
            sca = sca_loop((state.W, state.V), objective, config.p_bs,
                           tol=config.sca_tol, max_rounds=config.sca_iters,
                           fix_v=not use_an)
        except (InnerSolverError, ValueError) as exc:
            raise StageError("covariances", str(exc)) from exc
        w_vec, ratio_w = rank_one_extract(sca.W)
        if use_an:
            v_vec, ratio_v = rank_one_extract(sca.V)
        else:
            v_vec, ratio_v = np.zeros(config.n_t, dtype=complex), 0.0
        candidate_state = BeamformingState(
            w_r=state.w_r, W=np.outer(w_vec, w_vec.conj()),
            V=np.outer(v_vec, v_vec.conj()), w=w_vec, v=v_vec,
        )
        check_state(candidate_state, config)
        relaxed = BeamformingState(w_r=state.w_r, W=sca.W, V=sca.V)
        ssr_relaxed = report_from_channels(ch, relaxed, config, duplex).sum_secrecy
        cand_ssr = report_from_channels(ch, candidate_state, config, duplex).sum_secrecy
        gap = (ssr_relaxed - cand_ssr) / max(ssr_relaxed, 1e-12)
        trace.tightness.append({
            "iteration": c, "ratio": max(ratio_w, ratio_v), "gap": max(gap, 0.0),
        })
        if cand_ssr >= ssr - GUARD_SLACK:
            state, ssr = candidate_state, cand_ssr
        else:
            trace.guard_events.append({"iteration": c, "stage": "covariances"})
        seconds["covariances"] = time.perf_counter() - start

        start = time.perf_counter()
        try:
            cov = build_interference_covariance(ch.si, state.W, state.V,
                                                si_rho, config.noise_bs)
            w_r = optimal_receive_beamformer(cov, ch.ul_bs)
        except DegenerateChannelError:
            w_r = state.w_r  # zero uplink channel: every unit vector is optimal
        except np.linalg.LinAlgError as exc:
            raise StageError("receive_beamformer", str(exc)) from exc
        candidate_state = dc_replace(state, w_r=w_r)
        check_state(candidate_state, config)
        cand_ssr = report_from_channels(ch, candidate_state, config, duplex).sum_secrecy
        if cand_ssr >= ssr - GUARD_SLACK:
            state, ssr = candidate_state, cand_ssr
        else:
            trace.guard_events.append({"iteration": c, "stage": "receive_beamformer"})
        seconds["receive_beamformer"] = time.perf_counter() - start

        trace.ssr.append(ssr)
        trace.layouts.append(layout)
        trace.states.append(state)
        trace.stage_seconds.append(seconds)

        previous = trace.ssr[-2]
        relative_gain = (ssr - previous) / ssr if ssr > 0 else 0.0
        if relative_gain <= config.ao_tol:
            trace.termination = "converged"
            break
    else:
        trace.termination = "max_iterations"
    return layout, state, trace


@dataclass
class SchemeOutcome:
    scheme: str
    layout: AntennaLayout
    state: BeamformingState
    trace: AoTrace
    report: object
    feasible: bool
    tightness: float
    rank1_gap: float


def scheme_seed(trial_seed, scheme) -> np.random.SeedSequence:
    """Algorithm-internal seed: derived from the trial seed and the scheme,
    so paired schemes share channels but not search randomness."""
    return np.random.SeedSequence(entropy=trial_seed,
                                  spawn_key=(_SCHEME_CODES[scheme],))


def execute_scheme(scheme, scenario, config: SystemConfig, trial_seed) -> SchemeOutcome:
    if scheme not in _TRAITS:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    traits = _TRAITS[scheme]
    layout = fixed_grid_layout(config) if traits.fixed_grid else None
    final_layout, state, trace = alternating_optimize(
        scenario, config, scheme_seed(trial_seed, scheme),
        use_an=traits.uses_an, duplex=traits.duplex,
        move_antennas=traits.moves_antennas, layout=layout,
    )
    report = report_from_channels(
        build_channels(scenario, final_layout), state, config, traits.duplex)
    last = trace.tightness[-1] if trace.tightness else {"ratio": 0.0, "gap": 0.0}
    return SchemeOutcome(
        scheme=scheme, layout=final_layout, state=state, trace=trace,
        report=report, feasible=layout_is_feasible(final_layout, config),
        tightness=last["ratio"], rank1_gap=last["gap"],
    )


def run_scheme(scheme, scenario, config: SystemConfig, seed,
               sweep_name="single", sweep_value=0.0) -> ExperimentRecord:
    """Run one scheme on one scenario and package the result row.

    ``seed`` identifies the trial: it is recorded for pairing and mixed
    with the scheme id to derive the algorithm-internal randomness.
    """
    start = time.perf_counter()
    outcome = execute_scheme(scheme, scenario, config, seed)
    elapsed_ms = 1000.0 * (time.perf_counter() - start)
    report = outcome.report
    return ExperimentRecord(
        scheme=scheme, sweep_name=sweep_name, sweep_value=float(sweep_value),
        seed=int(seed), ssr=report.sum_secrecy, r_u=report.uplink_secrecy,
        r_d=report.downlink_secrecy, iters=outcome.trace.n_iterations,
        tightness=outcome.tightness, feasible=outcome.feasible,
        wall_clock_ms=elapsed_ms, trace=outcome.trace,
    )


class SecrecyRateMaximizer(BaseEstimator):
    """Estimator interface to the alternating optimizer.

    ``fit`` consumes one channel scenario and stores the optimized antenna
    layout, beamforming state, rate report, and iteration trace as fitted
    attributes; ``score`` returns the achieved sum secrecy rate. Hyper-
    parameters follow scikit-learn conventions (stored verbatim, validated
    at fit time), so the class composes with ``clone``/``get_params``.

    Parameters
    ----------
    scheme : str
        One of ``SCHEMES``.
    config : SystemConfig or None
        Physical/algorithmic parameters; ``None`` uses the defaults.
    seed : int
        Trial seed; channels are not drawn here, so it only feeds the
        optimizer's internal randomness.
    """

    def __init__(self, scheme="MA-FD-PSO", config=None, seed=0):
        self.scheme = scheme
        self.config = config
        self.seed = seed

    def _validated_config(self) -> SystemConfig:
        config = self.config if self.config is not None else SystemConfig()
        return check_config(config)

    def fit(self, scenario, y=None):
        config = self._validated_config()
        check_scenario(scenario, config)
        outcome = execute_scheme(self.scheme, scenario, config, self.seed)
        self.layout_ = outcome.layout
        self.state_ = outcome.state
        self.trace_ = outcome.trace
        self.report_ = outcome.report
        self.ssr_ = outcome.report.sum_secrecy
        self.n_iter_ = outcome.trace.n_iterations
        self.feasible_ = outcome.feasible
        self.tightness_ = outcome.tightness
        return self

    def score(self, scenario=None, y=None) -> float:
        """Sum secrecy rate of the fitted solution, on the fitted scenario
        or re-evaluated on another one."""
        if not hasattr(self, "state_"):
            raise NotFittedError("call fit() before score()")
        if scenario is None:
            return self.ssr_
        config = self._validated_config()
        check_scenario(scenario, config)
        duplex = _TRAITS[self.scheme].duplex
        ch = build_channels(scenario, self.layout_)
        return report_from_channels(ch, self.state_, config, duplex).sum_secrecy


def single_trial(scheme, config: SystemConfig, trial_seed,
                 sweep_name="single", sweep_value=0.0) -> ExperimentRecord:
    """Sample the trial's scenario and run one scheme on it."""
    scenario = sample_scenario(config, trial_seed)
    return run_scheme(scheme, scenario, config, trial_seed, sweep_name, sweep_value)
