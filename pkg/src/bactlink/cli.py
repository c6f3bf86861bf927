"""Command-line entry point.

Subcommands:
  run            run a named scenario sweep and write CSV (optionally JSON)
  encode         bits -> bases (1 -> G, 0 -> A under the canonical policy)
  decode         bases -> bits (G,T -> 1; A,C -> 0)
  list-scenarios print the available scenario names

Exit codes: 0 success, 1 runtime error, 2 usage error.
"""

import argparse
import sys
from dataclasses import fields as dc_fields

from .codec import decode, encode
from .errors import BactlinkError
from .harness import SCENARIOS, run_scenario, write_csv, write_json
from .motility import SimParams

SIMPARAM_FIELDS = frozenset(f.name for f in dc_fields(SimParams))
# accept the mathematical name for the decay length as well
SET_ALIASES = {"lambda": "lam"}


class _UsageError(Exception):
    pass


def _parse_set(pairs) -> dict:
    out = {}
    for pair in pairs:
        key, sep, raw = pair.partition("=")
        if not sep:
            raise _UsageError(f"--set expects key=value, got {pair!r}")
        key = SET_ALIASES.get(key, key)
        if key not in SIMPARAM_FIELDS:
            raise _UsageError(f"--set key {key!r} is not a simulation parameter; "
                              f"valid keys: {', '.join(sorted(SIMPARAM_FIELDS))}")
        try:
            out[key] = float(raw)
        except ValueError:
            raise _UsageError(f"--set {key}: {raw!r} is not a number") from None
    return out


def _cmd_run(args) -> int:
    overrides = _parse_set(args.set)
    rows = run_scenario(args.scenario, seed=args.seed, trials=args.trials,
                        overrides=overrides)
    write_csv(rows, args.out)
    if args.json:
        write_json(rows, args.json)
    print(f"{args.scenario}: wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_encode(args) -> int:
    print(encode(args.bits))
    return 0


def _cmd_decode(args) -> int:
    print(decode(args.bases))
    return 0


def _cmd_list(args) -> int:
    for name in SCENARIOS:
        print(name)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bactlink",
        description="Single-link bacterial nanonetwork Monte-Carlo simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario sweep and write results")
    p_run.add_argument("--scenario", required=True, choices=sorted(SCENARIOS))
    p_run.add_argument("--out", required=True, help="output CSV path")
    p_run.add_argument("--seed", type=int, default=None, help="master seed")
    p_run.add_argument("--trials", type=int, default=None,
                       help="trials per arm (default: scenario preset)")
    p_run.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a simulation parameter (repeatable)")
    p_run.add_argument("--json", default=None, metavar="PATH",
                       help="also write a JSON mirror of the rows")
    p_run.set_defaults(func=_cmd_run)

    p_enc = sub.add_parser("encode", help="encode a bit string as bases")
    p_enc.add_argument("bits")
    p_enc.set_defaults(func=_cmd_encode)

    p_dec = sub.add_parser("decode", help="decode a base string to bits")
    p_dec.add_argument("bases")
    p_dec.set_defaults(func=_cmd_decode)

    p_list = sub.add_parser("list-scenarios", help="print scenario names")
    p_list.set_defaults(func=_cmd_list)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except BactlinkError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
