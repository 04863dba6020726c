"""Command-line front end.

    fock-concepts diagnose   [--input weights.csv] [--format csv|md|json]
    fock-concepts kolmogorov [--input weights.csv] [--l-tolerance r]
    fock-concepts fit        [--input weights.csv] [--strategy ...] [--m2 r] [--fitted fitted.csv]
    fock-concepts verify     [--input weights.csv] [--fitted fitted.csv] [--tolerance r]
    fock-concepts ingest     --input ratings.csv
    fock-concepts simulate   [--input weights.csv] [--participants n] [--seed s]

Without ``--input`` the bundled dataset is used (and, for ``verify`` and
``fit --strategy table``, the bundled fitted parameters).  Exit codes: 0 on
success, 1 when verification finds rows beyond tolerance, 2 on input errors.
"""

from __future__ import annotations

import argparse
import io
import logging
import sys
from pathlib import Path

from . import classicality as cl
from . import data, fock, report
from .errors import FockConceptsError, InputError

log = logging.getLogger("fock_concepts")

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT_ERROR = 2

COMMANDS = ("diagnose", "kolmogorov", "fit", "verify", "ingest", "simulate")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fock-concepts",
                description="Classicality diagnostics and Fock-space modeling of concept combinations.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", type=Path,
                   help="weights CSV (ratings CSV for ingest); default: bundled dataset")
    p.add_argument("--fitted", type=Path, help="fitted-parameters CSV; default: bundled tables")
    p.add_argument("--format", choices=tuple(report.FORMATTERS), default="csv")
    p.add_argument("--tolerance", type=float, default=report.DEFAULT_TOLERANCE,
                   help="verify: maximum |model - measured| for a pass; fit: match tolerance "
                        "when the angle is arbitrary (default %(default)s)")
    p.add_argument("--l-tolerance", type=float, default=cl.EQ07_TOL,
                   help="tolerance on 1 - mu(B) - mu(not B) = 0 (default %(default)s)")
    p.add_argument("--strategy", choices=[s.value for s in fock.Strategy],
                   help="fit: m2 selection (default: table for bundled data, balanced-theta otherwise)")
    p.add_argument("--m2", type=float, help="fit: sector-2 weight for --strategy fixed-m2")
    p.add_argument("--seed", type=int, default=0, help="simulate: RNG seed")
    p.add_argument("--participants", type=int, default=80,
                   help="simulate: participants per concept (default %(default)s)")
    p.add_argument("--output", type=Path, help="output file; default stdout")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _read_dataset(path: Path | None) -> data.Dataset:
    if path is None:
        return data.load_bundled_dataset()
    with open(path, encoding="utf-8", newline="") as fh:
        try:
            return data.read_weights(fh)
        except InputError as exc:
            raise InputError(f"{path}: {exc}") from None


def _read_fitted(path: Path | None) -> list[data.FittedRow]:
    if path is None:
        return data.load_bundled_fitted()
    with open(path, encoding="utf-8", newline="") as fh:
        try:
            return data.read_fitted(fh)
        except InputError as exc:
            raise InputError(f"{path}: {exc}") from None


def _simulate(dataset: data.Dataset, participants: int, seed: int) -> str:
    if participants < 1:
        raise InputError("--participants must be >= 1")
    buf = io.StringIO()
    ratings = []
    for i, row in enumerate(dataset):
        # Independent, reproducible stream per row.
        ratings.extend(data.simulate_ratings(row, participants, seed=(seed, i)))
    data.write_ratings(ratings, buf)
    return buf.getvalue()


def run(args: argparse.Namespace) -> tuple[str, int]:
    """Execute one command; returns (output text, exit code)."""
    cmd = args.command
    if cmd == "ingest":
        if args.input is None:
            raise InputError("ingest needs --input <ratings.csv>")
        with open(args.input, encoding="utf-8", newline="") as fh:
            try:
                ratings = data.parse_ratings(fh)
            except InputError as exc:
                raise InputError(f"{args.input}: {exc}") from None
        if not ratings:
            raise InputError(f"{args.input}: no ratings")
        dataset = data.aggregate(ratings)
        if args.format == "csv":
            return data.weights_to_string(dataset), EXIT_OK
        return report.render(report.weights_report(dataset), args.format), EXIT_OK

    if args.tolerance < 0:
        raise InputError("--tolerance must be >= 0")
    dataset = _read_dataset(args.input)
    if cmd == "simulate":
        if args.format != "csv":
            raise InputError("simulate writes the ratings CSV format only")
        return _simulate(dataset, args.participants, args.seed), EXIT_OK
    if cmd == "diagnose":
        rep = report.diagnose(dataset, l_tolerance=args.l_tolerance)
    elif cmd == "kolmogorov":
        rep = report.kolmogorov(dataset, l_tolerance=args.l_tolerance)
    elif cmd == "fit":
        strategy = args.strategy
        if strategy is None:
            bundled = args.input is None or args.fitted is not None
            strategy = fock.Strategy.TABLE if bundled else fock.Strategy.BALANCED_THETA
        strategy = fock.Strategy(strategy)
        if strategy is fock.Strategy.FIXED_M2:
            if args.m2 is None:
                raise InputError("--strategy fixed-m2 needs --m2")
            if not 0.0 <= args.m2 <= 1.0:
                raise InputError("--m2 must lie in [0, 1]")
        fitted = _read_fitted(args.fitted) if strategy is fock.Strategy.TABLE else None
        rep = report.fit(dataset, strategy, m2=args.m2, fitted=fitted, degenerate_tol=args.tolerance)
    else:  # verify
        rep = report.verify(dataset, _read_fitted(args.fitted), tolerance=args.tolerance)
        s = rep.summary
        log.warning("verify: %d rows, %d ok, %d failed, %d degenerate, %d infeasible, max |err| %.6g",
                    s["rows_total"], s["rows_ok"], s["rows_failed"], s["rows_degenerate"],
                    s["rows_infeasible"], s["max_abs_err"])
    code = EXIT_OK if rep.ok else EXIT_VERIFY_FAILED
    return report.render(rep, args.format), code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s", stream=sys.stderr)
    try:
        text, code = run(args)
    except (FockConceptsError, OSError, ValueError) as exc:
        print(f"fock-concepts: error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    if args.output is None:
        sys.stdout.write(text)
    else:
        args.output.write_text(text, encoding="utf-8")
    return code


if __name__ == "__main__":
    sys.exit(main())
