"""Command line entry point: one subcommand per experiment."""

from __future__ import annotations

import argparse
import sys

from .scenario import (
    load_config,
    run_baseband_ber,
    run_comm_time_sweep,
    run_snr_trace,
    run_sync_error_sweep,
    run_throughput_sweep,
)

COMMANDS = {
    "sync-error": (run_sync_error_sweep, "mean frequency/time sync error vs estimation error"),
    "snr-trace": (run_snr_trace, "SNR over time for one deployment"),
    "comm-time": (run_comm_time_sweep, "mean effective communication time vs node count"),
    "throughput": (run_throughput_sweep, "throughput upper bound, hybrid vs pure acoustic"),
    "baseband-ber": (run_baseband_ber, "simulated BER vs TX-RX distance"),
}

U64_MAX = 2**64 - 1


def _seed(text):
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value <= U64_MAX:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def build_parser():
    parser = argparse.ArgumentParser(prog="uwmimo", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="key = value file layered over the shipped defaults")
        p.add_argument("--seed", type=_seed, help="unsigned 64-bit seed (default: rng_seed from the config)")
        p.add_argument("--out", required=True, help="CSV file to write")
        p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                       help="override one config key; may be repeated")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    runner, _ = COMMANDS[args.command]
    try:
        config = load_config(args.config, args.overrides)
        table = runner(config, args.seed)
        table.write(args.out)
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"uwmimo {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
