"""Seeded Monte Carlo sweeps and deterministic CSV/JSON-lines output.

Trial seeds derive from the base seed and the trial index only, so every
sweep point and every scheme at the same trial index sees the identical
channel realization: sweep curves and scheme gaps are paired comparisons.
Scheme-specific search randomness is mixed in downstream from the trial
seed. Records are sorted before writing, so output bytes do not depend on
evaluation order.
"""

import json

import numpy as np

from .channel import sample_scenario
from .config import SystemConfig, check_config
from .optimizer import SCHEMES, run_scheme
from .records import ExperimentRecord

CSV_HEADER = "scheme,sweep_name,sweep_value,seed,ssr,r_u,r_d,iters,tightness,feasible,ms"


def trial_seed(base_seed, trial_index) -> int:
    """Stable 64-bit seed for one Monte Carlo trial."""
    sequence = np.random.SeedSequence(entropy=base_seed, spawn_key=(trial_index,))
    return int(sequence.generate_state(1, np.uint64)[0])


def _run_point(config, point_value, schemes, trials, sweep_name, label_suffix=""):
    check_config(config)
    records = []
    for index in range(trials):
        seed = trial_seed(config.seed, index)
        scenario = sample_scenario(config, seed)
        for scheme in schemes:
            record = run_scheme(scheme, scenario, config, seed, sweep_name, point_value)
            if label_suffix:
                record.scheme = scheme + label_suffix
            records.append(record)
    return records


def sweep_region_size(config: SystemConfig, sizes, schemes=("MA-FD-PSO",),
                      trials=None):
    """Sweep the moving-region side length (in wavelengths)."""
    trials = config.trials if trials is None else trials
    records = []
    for size in sizes:
        cfg = config.replace(region_size=float(size))
        records += _run_point(cfg, float(size), schemes, trials, "region_size_wl")
    return records


def sweep_sic(config: SystemConfig, rho_db_values, p_bs_values=None,
              schemes=("MA-FD-PSO",), trials=None):
    """Sweep the residual self-interference ratio (given in dB).

    With more than one BS power level, each level's rows carry a
    ``@PB=<watts>W`` scheme suffix so the fixed CSV schema still
    distinguishes the curves.
    """
    trials = config.trials if trials is None else trials
    levels = [config.p_bs] if p_bs_values is None else [float(p) for p in p_bs_values]
    records = []
    for p_bs in levels:
        suffix = "" if len(levels) == 1 else f"@PB={p_bs:g}W"
        for rho_db in rho_db_values:
            cfg = config.replace(rho=10.0 ** (float(rho_db) / 10.0), p_bs=p_bs)
            records += _run_point(cfg, float(rho_db), schemes, trials, "rho_db", suffix)
    return records


def sweep_antennas(config: SystemConfig, counts, schemes=("MA-FD-PSO",),
                   trials=None):
    """Sweep the (equal) number of transmit and receive antennas."""
    trials = config.trials if trials is None else trials
    records = []
    for count in counts:
        cfg = config.replace(n_t=int(count), n_r=int(count))
        records += _run_point(cfg, float(count), schemes, trials, "antennas")
    return records


def _row_key(record: ExperimentRecord):
    return (record.sweep_name, record.sweep_value, record.scheme, record.seed)


def _fmt(value) -> str:
    return format(float(value), ".12g")


def write_records(records, path, include_timing=False):
    """Write sorted records as CSV with 12-significant-digit floats.

    The ``ms`` column is zeroed unless ``include_timing`` is set: wall-clock
    readings would break the byte-reproducibility of otherwise identical
    runs (real timings remain available in the JSON-lines traces).
    """
    lines = [CSV_HEADER]
    for record in sorted(records, key=_row_key):
        ms = record.wall_clock_ms if include_timing else 0.0
        lines.append(",".join([
            record.scheme,
            record.sweep_name,
            _fmt(record.sweep_value),
            str(int(record.seed)),
            _fmt(record.ssr),
            _fmt(record.r_u),
            _fmt(record.r_d),
            str(int(record.iters)),
            _fmt(record.tightness),
            str(int(record.feasible)),
            _fmt(ms),
        ]))
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")


def write_traces(records, path):
    """Write per-iteration optimizer traces as JSON lines."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for record in sorted(records, key=_row_key):
            if record.trace is None:
                continue
            for row in record.trace.iteration_rows():
                payload = {
                    "scheme": record.scheme,
                    "sweep_name": record.sweep_name,
                    "sweep_value": record.sweep_value,
                    "seed": record.seed,
                    **row,
                }
                handle.write(json.dumps(payload) + "\n")


def summarize(records):
    """Mean SSR per (sweep point, scheme); rows sorted like the CSV."""
    groups = {}
    for record in records:
        key = (record.sweep_name, record.sweep_value, record.scheme)
        groups.setdefault(key, []).append(record.ssr)
    return [
        {"sweep_name": name, "sweep_value": value, "scheme": scheme,
         "mean_ssr": float(np.mean(values)), "trials": len(values)}
        for (name, value, scheme), values in sorted(groups.items())
    ]


__all__ = [
    "CSV_HEADER", "SCHEMES", "summarize", "sweep_antennas", "sweep_region_size",
    "sweep_sic", "trial_seed", "write_records", "write_traces",
]
