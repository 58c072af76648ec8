"""Movable-antenna full-duplex secrecy-rate simulator and optimizer.

Synthesizes position-dependent channels for a base station with movable
transmit/receive antennas, evaluates uplink/downlink secrecy rates against
an eavesdropper, and maximizes their sum by alternating optimization over
the receive beamformer, the transmit information/artificial-noise
covariances, and the antenna positions.
"""

from .channel import (AntennaLayout, PathAngles, PathGains, Scenario,
                      field_response_matrix, field_response_vector,
                      link_channel, phase_difference, sample_scenario,
                      si_channel)
from .config import ConfigError, SystemConfig, check_config, parse_config
from .harness import (summarize, sweep_antennas, sweep_region_size, sweep_sic,
                      trial_seed, write_records, write_traces)
from .metrics import (BeamformingState, RateReport, downlink_sinr,
                      eve_downlink_sinr, eve_uplink_sinr, half_duplex_report,
                      secrecy_report, uplink_sinr)
from .optimizer import (SCHEMES, AoTrace, SecrecyRateMaximizer, StageError,
                        alternating_optimize, execute_scheme,
                        fixed_grid_layout, initialize_state,
                        random_feasible_layout, run_scheme, single_trial)
from .positioning import (PsoParams, clamp_to_region, inertia_weight,
                          optimize_positions, placement_fitness, pso_optimize,
                          violation_count)
from .receive import (DegenerateChannelError, InterferenceCovariance,
                      build_interference_covariance,
                      optimal_receive_beamformer)
from .records import ExperimentRecord
from .transmit import (DcObjective, EffectiveChannels, InnerSolverError,
                       LinkPowers, ScaState, effective_channels,
                       full_duplex_objective, half_duplex_objective,
                       linearized_ssr, rank_one_extract, sca_loop,
                       solve_inner_convex, ssr_gain, ssr_loss,
                       ssr_loss_gradients)
from .validation import (check_layout, check_scenario, check_state,
                         layout_is_feasible)

__version__ = "0.1.0"
