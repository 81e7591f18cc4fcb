"""Command-line entry point.

    twopoint run table4 --mode exact
    twopoint run fig2 --mode both --seed 7 --shots 40000 --out fig2.csv

Exit codes: 0 success, 1 usage or config error, 2 runtime or IO error,
3 a ``--check`` comparison failed.
"""
from __future__ import annotations

import argparse
import logging
import sys

from .checks import run_checks
from .errors import InvalidArgumentError
from .runner import FORMATS, MODES, SUITES, emit, load_config, run_suite

log = logging.getLogger("twopoint")

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME, EXIT_CHECK = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="twopoint", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    run = sub.add_parser("run", help="run an experiment suite")
    run.add_argument("suite", choices=SUITES)
    run.add_argument("--config", help="flat JSON file of settings; flags override it")
    run.add_argument("--mode", choices=MODES)
    run.add_argument("--seed", type=int)
    run.add_argument("--shots", type=int)
    run.add_argument("--reps", type=int)
    run.add_argument("--spam", help="p_prep,p_detect")
    run.add_argument("--phi1", type=float, help="evolution pulse phase (rad)")
    run.add_argument("--readout", choices=("projector", "sequential"))
    run.add_argument("--workers", type=int, help="threads for grid cells")
    run.add_argument("--out", help="output path (default: stdout)")
    run.add_argument("--format", choices=FORMATS)
    run.add_argument("--check", action="store_true", default=None,
                     help="compare against the measured tables; exit 3 on failure")
    run.add_argument("--time-us", action="store_true", default=None,
                     help="append evolution time in microseconds")
    custom = run.add_argument_group("custom suite")
    custom.add_argument("--alpha", type=float)
    custom.add_argument("--beta-e", type=float)
    custom.add_argument("--p-axis", help="x, y, z, o or 'nx,ny,nz'")
    custom.add_argument("--q-axis")
    custom.add_argument("--theta", type=float, help="evolution pulse area (rad)")
    custom.add_argument("--prep-phase", type=float)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    flags = vars(args).copy()
    flags.pop("command")
    path = flags.pop("config")
    try:
        spec = load_config(path, **flags)
    except InvalidArgumentError as exc:
        log.error("%s", exc)
        return EXIT_USAGE

    try:
        rows = run_suite(spec)
        text = emit(rows, spec.format, spec.out, spec.time_us)
    except InvalidArgumentError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except (OSError, ValueError, ArithmeticError) as exc:
        log.error("%s", exc)
        return EXIT_RUNTIME
    if spec.out is None:
        sys.stdout.write(text)

    if spec.check:
        results = run_checks(spec.suite, rows)
        for name, passed, detail in results:
            print(f"[{'PASS' if passed else 'FAIL'}] {name}" + (f"  ({detail})" if detail else ""),
                  file=sys.stderr)
        if not all(p for _, p, _ in results):
            return EXIT_CHECK
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
