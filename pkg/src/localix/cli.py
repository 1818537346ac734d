"""``localix`` command line.

Exit status: 0 all checks pass, 1 a check failed, 2 the scenario could not
be read or breaks a law at load time, 3 an enumeration bound was exceeded.
"""

import argparse
import sys
from pathlib import Path

from .config import using_bounds
from .errors import ScenarioError, SizeLimitError
from .scenario import BUILTIN_PREFIX, BUILTINS, MUTATIONS, load_scenario
from .workbench import COMMANDS, run

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_BOUND = 0, 1, 2, 3


def build_parser():
    parser = argparse.ArgumentParser(
        prog="localix",
        description="Check torsion theories and modules of quotients on finite algebras.",
        epilog="builtin scenarios: " + ", ".join(BUILTIN_PREFIX + n for n in BUILTINS + MUTATIONS),
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--scenario", required=True, help="scenario file or builtin:NAME")
    parser.add_argument("--bound-elements", type=int, help="largest set of elements or maps to enumerate")
    parser.add_argument("--bound-subgroups", type=int, help="largest module whose subgroup lattice is searched")
    parser.add_argument("--bound-ideals", type=int, help="largest left-ideal lattice for filter enumeration")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--out", help="write the report here instead of stdout")
    parser.add_argument("--timings", action="store_true",
                        help="include per-check timings (makes output run-dependent)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        scenario = load_scenario(args.scenario)
    except ScenarioError as exc:
        print(f"localix: {exc}", file=sys.stderr)
        return EXIT_INPUT
    # command-line bounds override the scenario's own
    overrides = dict(scenario.bounds)
    for key, value in (("elements", args.bound_elements), ("subgroups", args.bound_subgroups),
                       ("lattice", args.bound_ideals)):
        if value is not None:
            overrides[key] = value
    scenario.bounds = overrides
    try:
        with using_bounds(**overrides):
            report = run(args.command, scenario, timings=args.timings)
    except SizeLimitError as exc:
        print(f"localix: {exc}", file=sys.stderr)
        return EXIT_BOUND
    text = report.to_json(args.timings) if args.format == "json" else report.to_text(args.timings)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if report.invalid:
        for r in report.failures:
            print(f"localix: {r.subject}: {r.check} ({r.anchor}) violated: {r.witness}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK if report.passed else EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
