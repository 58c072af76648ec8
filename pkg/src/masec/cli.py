"""Command-line entry point for single runs and Monte Carlo sweeps."""

import argparse
import sys

from .config import ConfigError, parse_config
from .harness import (summarize, sweep_antennas, sweep_region_size, sweep_sic,
                      trial_seed, write_records, write_traces)
from .optimizer import SCHEMES, single_trial


def _add_common(parser):
    parser.add_argument("--config", metavar="PATH",
                        help="plain-text 'key = value' parameter file")
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        dest="overrides", help="override one parameter (repeatable)")
    parser.add_argument("--trials", type=int, help="Monte Carlo trials per sweep point")
    parser.add_argument("--seed", type=int, help="base seed")
    parser.add_argument("--scheme", default="MA-FD-PSO",
                        help="comma-separated scheme ids: " + ",".join(SCHEMES))
    parser.add_argument("--out", metavar="CSV", help="write records to this CSV path")
    parser.add_argument("--full-budget", action="store_true",
                        help="use the full 100-iteration algorithm budgets")
    parser.add_argument("--trace", metavar="JSONL",
                        help="write per-iteration optimizer traces as JSON lines")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="masec",
        description="Movable-antenna full-duplex secrecy-rate simulator",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    region = commands.add_parser("sweep-region",
                                 help="sum secrecy rate vs region size (in wavelengths)")
    _add_common(region)
    region.add_argument("--grid", default="1,1.5,2,2.5,3",
                        help="comma-separated region sizes, in wavelengths")

    sic = commands.add_parser("sweep-sic",
                              help="sum secrecy rate vs residual self-interference")
    _add_common(sic)
    sic.add_argument("--grid", default="-110,-100,-90,-80,-70",
                     help="comma-separated residual-interference ratios, dB")
    sic.add_argument("--pb-dbm", default=None,
                     help="optional comma-separated BS power levels, dBm")

    antennas = commands.add_parser("sweep-antennas",
                                   help="sum secrecy rate vs antenna count")
    _add_common(antennas)
    antennas.add_argument("--grid", default="2,4,6",
                          help="comma-separated antenna counts")

    single = commands.add_parser("single-run", help="one seeded trial per scheme")
    _add_common(single)
    return parser


def _floats(text):
    return [float(part) for part in text.split(",") if part.strip()]


def _schemes(text):
    names = [part.strip() for part in text.split(",") if part.strip()]
    for name in names:
        if name not in SCHEMES:
            raise SystemExit(f"unknown scheme {name!r}; expected one of {SCHEMES}")
    return names


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = parse_config(args.config, args.overrides)
    except (ConfigError, OSError) as exc:
        raise SystemExit(str(exc))
    if args.full_budget:
        config = config.with_full_budget()
    if args.trials is not None:
        config = config.replace(trials=args.trials)
    if args.seed is not None:
        config = config.replace(seed=args.seed)
    schemes = _schemes(args.scheme)

    if args.command == "sweep-region":
        records = sweep_region_size(config, _floats(args.grid), schemes)
    elif args.command == "sweep-sic":
        levels = _floats(args.pb_dbm) if args.pb_dbm else None
        if levels is not None:
            levels = [10.0 ** ((v - 30.0) / 10.0) for v in levels]
        records = sweep_sic(config, _floats(args.grid), levels, schemes)
    elif args.command == "sweep-antennas":
        records = sweep_antennas(config, [int(v) for v in _floats(args.grid)], schemes)
    else:  # single-run
        records = [
            single_trial(scheme, config, trial_seed(config.seed, index))
            for index in range(config.trials)
            for scheme in schemes
        ]

    if args.out:
        write_records(records, args.out)
    if args.trace:
        write_traces(records, args.trace)

    for row in summarize(records):
        print(f"{row['sweep_name']}={row['sweep_value']:g} "
              f"{row['scheme']}: mean SSR {row['mean_ssr']:.4f} bits/s/Hz "
              f"({row['trials']} trials)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
