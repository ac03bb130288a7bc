"""Command line front end.

One executable, subcommand style:

    sieve gowers gvn-check recurrence wrec gt-table converge compare-te
    ap-find selftest

Exit codes: 0 success, 2 usage error, 3 precondition or resource error,
4 not found (ap-find), 5 internal invariant violation. Every error prints
one machine-parsable JSON line {"error": ..., "detail": ...}.

Reports stream to CSV row by row (an interrupted run leaves a valid CSV
prefix) and can additionally be rendered to a figure with --fig.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import arith
from ._util import unit_disc
from .combinat import IntSet, find_3ap_shifted_prime
from .config import RunConfig
from .dynamics import CircleRotation, FiniteMPS, IntervalSet, TrigPoly
from .errors import InternalCheckError, PreconditionError, ResourceError, UsageError
from .experiments import (
    cauchy_profile,
    gt_uniformity_table,
    log_ladder,
    prime_shift_recurrence,
    totally_ergodic_compare,
    w_tricked_recurrence,
)
from .report import CsvRowStream, ExperimentReport
from .suites import run_selftest
from .znz import ZnSeq, gowers_norm, gvn_check

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PRECONDITION = 3
EXIT_NOT_FOUND = 4
EXIT_INTERNAL = 5


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2) with plain text
        raise UsageError(message)


def _error_line(kind: str, detail: str) -> None:
    print(json.dumps({"error": kind, "detail": detail}))


def _parse_alpha(text: str):
    named = {
        "sqrt2-1": math.sqrt(2.0) - 1.0,
        "golden": (math.sqrt(5.0) - 1.0) / 2.0,
    }
    if text in named:
        return named[text]
    if "/" in text:
        p, q = text.split("/", 1)
        return Fraction(int(p), int(q))
    return float(text)


def _parse_trigpoly(text: str) -> TrigPoly:
    coeffs: dict[int, complex] = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if ":" not in item:
            raise UsageError(f"bad trig polynomial term {item!r}; expected freq:coef")
        freq, coef = item.split(":", 1)
        coeffs[int(freq)] = coeffs.get(int(freq), 0j) + complex(coef)
    if not coeffs:
        raise UsageError("empty trig polynomial")
    return TrigPoly(coeffs)


def _parse_ladder(text: str) -> list[int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"bad ladder {text!r}; expected lo:hi:points")
    lo, hi, points = int(float(parts[0])), int(float(parts[1])), int(parts[2])
    return log_ladder(lo, hi, points)


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}") from exc


def _load_system(path: str):
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read system file {path}: {exc}") from exc
    kind = doc.get("kind")
    if kind == "cyclic":
        return FiniteMPS.cyclic(int(doc["M"]))
    if kind == "rotation":
        alpha = doc["alpha"]
        if isinstance(alpha, dict):
            return CircleRotation(Fraction(int(alpha["p"]), int(alpha["q"])))
        return CircleRotation(float(alpha))
    raise UsageError(f"unknown system kind {kind!r} in {path}")


def _load_subset(path: str, system):
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read set file {path}: {exc}") from exc
    if isinstance(system, FiniteMPS):
        return [int(v) for v in doc]
    return IntervalSet([(float(a), float(b)) for a, b in doc])


@contextlib.contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as handle:
            yield handle


def _out_format(args) -> str:
    if args.out != "-":
        suffix = Path(args.out).suffix.lower()
        if suffix == ".json":
            return "json"
        if suffix == ".csv":
            return "csv"
    return args.emit


def _config(args, fmt: str) -> RunConfig:
    return RunConfig(
        seed=args.seed,
        tol_ineq=args.tol_ineq,
        tol_oracle=args.tol_oracle,
        workers=args.workers,
        out_format=fmt,
    ).with_env_workers()


def _deliver(args, run) -> ExperimentReport:
    """Run a report-producing callable, streaming CSV rows as they come."""
    fmt = _out_format(args)
    config = _config(args, fmt)
    if fmt == "csv":
        with _open_out(args.out) as handle:
            report = run(config, CsvRowStream(handle))
    else:
        report = run(config, None)
        with _open_out(args.out) as handle:
            handle.write(report.to_json())
    report.check_finite()
    if getattr(args, "fig", None):
        from .plots import render_report

        render_report(report, args.fig)
    return report


# ---------------------------------------------------------------- subcommands


def _cmd_sieve(args) -> int:
    if args.nmax < 2:
        raise PreconditionError(f"--nmax must be >= 2, got {args.nmax}")
    tables = arith.build_tables(args.nmax)
    fmt = _out_format(args)
    with _open_out(args.out) as handle:
        if fmt == "csv":
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["n", "lambda", "phi"])
            for n in range(1, args.nmax + 1):
                writer.writerow([n, repr(float(tables.von_mangoldt[n])), int(tables.phi[n])])
        else:
            handle.write("[\n")
            for n in range(1, args.nmax + 1):
                row = {"n": n, "lambda": float(tables.von_mangoldt[n]), "phi": int(tables.phi[n])}
                tail = ",\n" if n < args.nmax else "\n"
                handle.write("  " + json.dumps(row) + tail)
            handle.write("]\n")
    return EXIT_OK


def _cmd_gowers(args) -> int:
    try:
        lines = Path(args.input).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read input {args.input}: {exc}") from exc
    values = []
    for idx, line in enumerate(lines):
        line = line.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise UsageError(f"line {idx + 1}: expected re,im")
        values.append(complex(float(parts[0]), float(parts[1])))
    if not values:
        raise UsageError("input file holds no values")
    result = gowers_norm(ZnSeq(values), args.d, args.strategy)
    print(json.dumps({
        "n": len(values),
        "d": result.d,
        "strategy": result.strategy,
        "value": result.value,
    }))
    return EXIT_OK


def _cmd_gvn_check(args) -> int:
    def run(config: RunConfig, on_row):
        report = ExperimentReport(
            name="gvn_check",
            params={"n": args.n, "k": args.k, "trials": args.trials},
            provenance=config.provenance(),
            on_row=on_row,
        )
        rng = np.random.default_rng([config.seed, 40])
        for trial in range(args.trials):
            theta = ZnSeq(unit_disc(rng, args.n))
            phis = [ZnSeq(2.0 * rng.random() * unit_disc(rng, args.n))]
            for _ in range(args.k - 1):
                phis.append(ZnSeq(unit_disc(rng, args.n)))
            res = gvn_check(theta, phis, args.k, tol=config.tol_ineq)
            report.add_row(trial=trial, N=args.n, k=args.k, lhs=res.lhs,
                           rhs=res.rhs, margin=res.rhs - res.lhs, holds=res.holds)
        return report

    report = _deliver(args, run)
    if any(not row["holds"] for row in report.rows):
        raise InternalCheckError("generalized von Neumann inequality violated")
    return EXIT_OK


def _cmd_recurrence(args) -> int:
    system = _load_system(args.system)
    subset = _load_subset(args.set, system)
    ladder = _parse_ladder(args.ladder) if args.ladder else None

    def run(config, on_row):
        return prime_shift_recurrence(
            system, subset, args.shift, args.n, ladder=ladder,
            config=config, on_row=on_row,
        )

    _deliver(args, run)
    return EXIT_OK


def _cmd_wrec(args) -> int:
    system = _load_system(args.system)
    subset = _load_subset(args.set, system)
    ladder = _parse_ladder(args.ladder) if args.ladder else None

    def run(config, on_row):
        return w_tricked_recurrence(
            system, subset, args.w, args.n, ladder=ladder,
            config=config, on_row=on_row,
        )

    _deliver(args, run)
    return EXIT_OK


def _cmd_gt_table(args) -> int:
    w_list = _parse_int_list(args.w)
    n_list = _parse_int_list(args.n)

    def run(config, on_row):
        return gt_uniformity_table(
            w_list, n_list, r=args.r, d=args.d, config=config, on_row=on_row
        )

    _deliver(args, run)
    return EXIT_OK


def _cmd_converge(args) -> int:
    system = CircleRotation(_parse_alpha(args.alpha))
    f1 = _parse_trigpoly(args.f1)
    f2 = _parse_trigpoly(args.f2)
    ladder = _parse_ladder(args.ladder)

    def run(config, on_row):
        return cauchy_profile(system, f1, f2, ladder, config=config, on_row=on_row)

    _deliver(args, run)
    return EXIT_OK


def _cmd_compare_te(args) -> int:
    system = CircleRotation(_parse_alpha(args.alpha))
    f1 = _parse_trigpoly(args.f1)
    f2 = _parse_trigpoly(args.f2)
    ladder = _parse_ladder(args.ladder) if args.ladder else None

    def run(config, on_row):
        return totally_ergodic_compare(
            system, f1, f2, args.n, ladder=ladder, config=config, on_row=on_row
        )

    _deliver(args, run)
    return EXIT_OK


def _cmd_ap_find(args) -> int:
    try:
        lines = Path(args.set).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read set file {args.set}: {exc}") from exc
    members = [int(line) for line in lines if line.strip()]
    if not members:
        _error_line("not_found", "the input set is empty")
        return EXIT_NOT_FOUND
    universe = args.universe if args.universe else max(members) + 1
    hit = find_3ap_shifted_prime(IntSet(universe=universe, members=members), args.sign)
    if hit is None:
        _error_line("not_found", "no 3-term progression with shifted-prime difference")
        return EXIT_NOT_FOUND
    print(json.dumps({"a": hit.a, "p": hit.p, "d": hit.d}))
    return EXIT_OK


def _cmd_selftest(args) -> int:
    def run(config, on_row):
        report, ok = run_selftest(config=config, quick=args.quick, on_row=on_row)
        report.params["ok"] = ok
        return report

    report = _deliver(args, run)
    if not report.params.get("ok", False):
        raise InternalCheckError("one or more selftest properties failed")
    return EXIT_OK


# ------------------------------------------------------------------- parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="base RNG seed")
    common.add_argument("--tol-ineq", type=float, default=1e-9, dest="tol_ineq")
    common.add_argument("--tol-oracle", type=float, default=1e-10, dest="tol_oracle")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--out", default="-", help="output path, '-' for stdout")
    common.add_argument("--emit", choices=("csv", "json"), default="csv",
                        help="output format when --out has no telling extension")

    fig = argparse.ArgumentParser(add_help=False)
    fig.add_argument("--fig", default=None, help="also render the report to this image file")

    parser = _Parser(prog="uniformity-lab")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sieve", parents=[common], help="dump n, Lambda(n), phi(n)")
    p.add_argument("--nmax", type=int, required=True)
    p.set_defaults(func=_cmd_sieve)

    p = sub.add_parser("gowers", parents=[common], help="Gowers norm of a sequence file")
    p.add_argument("--input", required=True, help="one complex per line as re,im")
    p.add_argument("--d", type=int, choices=(2, 3), required=True)
    p.add_argument("--strategy", choices=("recursive", "fourier", "bruteforce"),
                   default="recursive")
    p.set_defaults(func=_cmd_gowers)

    p = sub.add_parser("gvn-check", parents=[common, fig],
                       help="random instances of the multilinear norm inequality")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=_cmd_gvn_check)

    p = sub.add_parser("recurrence", parents=[common, fig],
                       help="triple recurrence averages along shifted primes")
    p.add_argument("--system", required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--shift", type=int, default=-1)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ladder", default=None)
    p.set_defaults(func=_cmd_recurrence)

    p = sub.add_parser("wrec", parents=[common, fig],
                       help="W-tricked vs plain recurrence averages")
    p.add_argument("--system", required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ladder", default=None)
    p.set_defaults(func=_cmd_wrec)

    p = sub.add_parser("gt-table", parents=[common, fig],
                       help="uniformity norms of the recentred W-tricked weight")
    p.add_argument("--w", required=True, help="comma list, e.g. 2,3,5,7")
    p.add_argument("--n", required=True, help="comma list of primes")
    p.add_argument("--d", type=int, choices=(2, 3), default=2)
    p.add_argument("--r", type=int, default=1)
    p.set_defaults(func=_cmd_gt_table)

    p = sub.add_parser("converge", parents=[common, fig],
                       help="Cauchy profile of the prime double average")
    p.add_argument("--alpha", required=True)
    p.add_argument("--f1", required=True)
    p.add_argument("--f2", required=True)
    p.add_argument("--ladder", required=True, help="lo:hi:points")
    p.set_defaults(func=_cmd_converge)

    p = sub.add_parser("compare-te", parents=[common, fig],
                       help="prime vs Cesaro double averages on an irrational rotation")
    p.add_argument("--alpha", required=True)
    p.add_argument("--f1", required=True)
    p.add_argument("--f2", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ladder", default=None)
    p.set_defaults(func=_cmd_compare_te)

    p = sub.add_parser("ap-find", parents=[common],
                       help="3-term progression with shifted-prime difference")
    p.add_argument("--set", required=True, help="one integer per line")
    p.add_argument("--sign", type=int, choices=(-1, 1), default=-1)
    p.add_argument("--universe", type=int, default=None)
    p.set_defaults(func=_cmd_ap_find)

    p = sub.add_parser("selftest", parents=[common, fig],
                       help="run the full property suite")
    p.add_argument("--quick", action="store_true")
    p.set_defaults(func=_cmd_selftest)

    return parser


def dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except UsageError as exc:
        _error_line("usage", str(exc))
        return EXIT_USAGE
    except SystemExit as exc:  # --help paths
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        _error_line("usage", str(exc))
        return EXIT_USAGE
    except (PreconditionError, ResourceError, OverflowError) as exc:
        _error_line("precondition", str(exc))
        return EXIT_PRECONDITION
    except InternalCheckError as exc:
        _error_line("internal", str(exc))
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001  anything else is an engine bug
        _error_line("internal", f"{type(exc).__name__}: {exc}")
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
