"""Command line entry point: ``noisyteleport SCENARIO [--out PATH] [--quiet]``.

Exit status is 0 on success, 1 for an invalid scenario and 2 when a run
encounters an invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .scenario import ScenarioError, dumps, load_scenario, run_scenario

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VIOLATION = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noisyteleport",
        description="Simulate N-level teleportation with noisy entanglement distribution.",
    )
    parser.add_argument("scenario", type=Path, help="path to a JSON scenario file")
    parser.add_argument("--out", type=Path, help="write full-precision JSON results here")
    parser.add_argument("--quiet", action="store_true", help="suppress the table output")
    parser.add_argument(
        "--tol-override",
        type=float,
        metavar="VALUE",
        help="replace every invariant tolerance (testing only)",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenario = load_scenario(args.scenario)
    except OSError as exc:
        print(f"error: cannot read {args.scenario}: {exc.strerror}", file=sys.stderr)
        return EXIT_INVALID
    except ScenarioError as exc:
        for msg in exc.messages:
            print(f"error: {args.scenario}: {msg}", file=sys.stderr)
        return EXIT_INVALID

    try:
        result = run_scenario(scenario, tol_override=args.tol_override)
    except ValueError as exc:
        print(f"error: {args.scenario}: {exc}", file=sys.stderr)
        return EXIT_INVALID

    if not args.quiet:
        print(result.text)
    if args.out is not None:
        args.out.write_text(dumps(result.data))
    for v in result.violations:
        print(f"invariant violation: {v}", file=sys.stderr)
    return EXIT_VIOLATION if result.violations else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
