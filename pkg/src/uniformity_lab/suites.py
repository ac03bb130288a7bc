"""Seeded property suites behind the ``selftest`` subcommand.

Every suite returns rows with a fixed schema (check, instances, statistic,
value, bound, status). A suite passes when value <= bound. Suites are pure
functions of (seed, quick), so a selftest report is byte-reproducible.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable

import numpy as np

from . import arith
from ._util import is_prime_int, unit_disc
from .combinat import IntSet, find_3ap_shifted_prime
from .config import RunConfig, DEFAULT_CONFIG
from .dynamics import (
    CircleRotation,
    FiniteMPS,
    IntervalSet,
    ergodic_gvn_check,
    triple_intersection,
)
from .report import ExperimentReport
from .znz import ZnSeq, gowers_norm, gvn_check


def _row(check: str, instances: int, statistic: str, value: float, bound: float) -> dict:
    return dict(
        check=check,
        instances=instances,
        statistic=statistic,
        value=float(value),
        bound=float(bound),
        status="pass" if value <= bound else "fail",
    )


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng([seed, stream])


def _random_seq(rng: np.random.Generator, n: int) -> ZnSeq:
    return ZnSeq(rng.standard_normal(n) + 1j * rng.standard_normal(n))


def sieve_reference(seed: int, quick: bool) -> list[dict]:
    tables = arith.build_tables(10_000)
    mism = 0
    for n in range(2, 10_001):
        divisible = any(n % p == 0 for p in range(2, math.isqrt(n) + 1))
        if (not divisible) != bool(tables.is_prime[n]):
            mism += 1
    rows = [_row("sieve_trial_division", 9_999, "mismatches", mism, 0)]
    rows.append(_row("sieve_pi_1e4", 1, "abs_error", abs(tables.prime_pi(10_000) - 1229), 0))
    return rows


def lambda_mean(seed: int, quick: bool) -> list[dict]:
    n = 100_000 if quick else 1_000_000
    tables = arith.build_tables(n)
    mean = float(np.sum(tables.von_mangoldt[:n])) / n
    return [_row("lambda_mean", n, "abs_dev_from_1", abs(mean - 1.0), 0.02)]


def vm_gap(seed: int, quick: bool) -> list[dict]:
    n = 10_000 if quick else 1_000_000
    tables = arith.build_tables(n)
    gap, bound = arith.vm_gap_check(n, tables)
    return [
        _row("vm_gap_formula", n, "gap_minus_bound", gap - bound, 0.0),
        _row("vm_gap_sqrt", n, "gap", gap, 3.0 / math.sqrt(n)),
    ]


def gowers_strategy_agreement(seed: int, quick: bool) -> list[dict]:
    count = 40 if quick else 200
    n_max = 32 if quick else 64
    rng = _rng(seed, 1)
    worst = 0.0
    for i in range(count):
        n = int(rng.integers(4, n_max + 1))
        d = 2 if i % 2 == 0 else 3
        f = _random_seq(rng, n)
        a = gowers_norm(f, d, "recursive").value
        b = gowers_norm(f, d, "bruteforce").value
        worst = max(worst, abs(a - b) / max(1.0, a))
    return [_row("gowers_strategy_agreement", count, "worst_rel_err", worst, 1e-10)]


def u2_fourier_identity(seed: int, quick: bool) -> list[dict]:
    sizes = (31, 257) if quick else (31, 257, 1009, 4093, 4099)
    per_size = 10
    rng = _rng(seed, 2)
    worst = 0.0
    for n in sizes:
        for _ in range(per_size):
            f = _random_seq(rng, n)
            a = gowers_norm(f, 2, "recursive").value
            b = gowers_norm(f, 2, "fourier").value
            worst = max(worst, abs(a - b) / max(1.0, a))
    return [_row("u2_fourier_identity", len(sizes) * per_size, "worst_rel_err", worst, 1e-10)]


def delta_closed_forms(seed: int, quick: bool) -> list[dict]:
    delta = ZnSeq([1, 0, 0, 0, 0])
    worst = max(
        abs(gowers_norm(delta, 2, "recursive").value - 5 ** -0.75),
        abs(gowers_norm(delta, 3, "recursive").value - 5 ** -0.5),
        abs(gowers_norm(delta, 2, "bruteforce").value - 5 ** -0.75),
        abs(gowers_norm(delta, 3, "bruteforce").value - 5 ** -0.5),
    )
    return [_row("delta_closed_forms", 4, "worst_abs_err", worst, 1e-12)]


def norm_axioms(seed: int, quick: bool) -> list[dict]:
    count = 20 if quick else 60
    rng = _rng(seed, 3)
    homog = triangle = shifts = conj = monotone = 0.0
    for _ in range(count):
        n = int(rng.integers(4, 49))
        d = int(rng.integers(2, 4))
        f = _random_seq(rng, n)
        g = _random_seq(rng, n)
        c = complex(rng.standard_normal() + 1j * rng.standard_normal())
        nf = gowers_norm(f, d).value
        homog = max(
            homog, abs(gowers_norm(ZnSeq(c * f.values), d).value - abs(c) * nf)
        )
        both = gowers_norm(ZnSeq(f.values + g.values), d).value
        triangle = max(triangle, both - (nf + gowers_norm(g, d).value))
        a = int(rng.integers(0, n))
        shifts = max(shifts, abs(gowers_norm(f.shift(a), d).value - nf))
        conj = max(conj, abs(gowers_norm(f.conj(), d).value - nf))
        monotone = max(
            monotone, gowers_norm(f, 2).value - gowers_norm(f, 3).value
        )
    return [
        _row("axiom_homogeneity", count, "worst_abs_err", homog, 1e-10),
        _row("axiom_triangle", count, "worst_excess", triangle, 1e-9),
        _row("axiom_shift_invariance", count, "worst_abs_err", shifts, 1e-10),
        _row("axiom_conjugation", count, "worst_abs_err", conj, 1e-10),
        _row("axiom_u2_le_u3", count, "worst_excess", monotone, 1e-10),
    ]


def gvn_inequality(seed: int, quick: bool, tol: float = 1e-9) -> list[dict]:
    count = 200 if quick else 1000
    sizes = (31, 64, 127) if quick else (31, 64, 127, 257)
    rng = _rng(seed, 4)
    worst = -math.inf
    for i in range(count):
        n = int(sizes[int(rng.integers(0, len(sizes)))])
        k = 1 + i % 3
        theta = ZnSeq(unit_disc(rng, n))
        phis = [ZnSeq(2.0 * rng.random() * unit_disc(rng, n))]
        for _ in range(k - 1):
            phis.append(ZnSeq(unit_disc(rng, n)))
        res = gvn_check(theta, phis, k, tol=tol)
        worst = max(worst, res.lhs - res.rhs)
    return [_row("gvn_inequality", count, "worst_lhs_minus_rhs", worst, tol)]


def ergodic_gvn(seed: int, quick: bool, tol: float = 1e-9) -> list[dict]:
    count = 100 if quick else 500
    rng = _rng(seed, 5)
    worst = -math.inf
    k = 3
    for _ in range(count):
        m = int(rng.integers(16, 65))
        n = int(rng.integers(64, 258))
        system = FiniteMPS.cyclic(m)
        theta_vals = np.zeros(n, dtype=np.complex128)
        theta_vals[: n // k] = rng.uniform(-2.0, 2.0, n // k)
        theta = ZnSeq(theta_vals)
        fs = [unit_disc(rng, m) for _ in range(k - 1)]
        res = ergodic_gvn_check(system, theta, fs, k, n, tol=tol)
        worst = max(worst, res.lhs - res.rhs)
    return [_row("ergodic_gvn_inequality", count, "worst_lhs_minus_rhs", worst, tol)]


def _random_interval_set(rng: np.random.Generator) -> IntervalSet:
    pieces = []
    for _ in range(int(rng.integers(1, 5))):
        a = float(rng.random())
        b = min(1.0, a + float(rng.random()) * 0.3)
        if a < b:
            pieces.append((a, b))
    return IntervalSet(pieces or [(0.1, 0.2)])


def interval_algebra(seed: int, quick: bool) -> list[dict]:
    count = 100 if quick else 300
    rng = _rng(seed, 6)
    worst_ie = 0.0
    worst_shift = 0.0
    for _ in range(count):
        a = _random_interval_set(rng)
        b = _random_interval_set(rng)
        lhs = a.intersect(b).measure() + a.union(b).measure()
        worst_ie = max(worst_ie, abs(lhs - a.measure() - b.measure()))
        beta = float(rng.random())
        worst_shift = max(worst_shift, abs(a.translate(beta).measure() - a.measure()))
    return [
        _row("interval_inclusion_exclusion", count, "worst_abs_err", worst_ie, 1e-12),
        _row("interval_translation_invariance", count, "worst_abs_err", worst_shift, 1e-12),
    ]


def rational_rotation_period(seed: int, quick: bool) -> list[dict]:
    rot = CircleRotation(Fraction(3, 11))
    subset = IntervalSet([(0.05, 0.3), (0.55, 0.66)])
    vals = [triple_intersection(rot, subset, n) for n in range(1, 23)]
    worst = max(abs(vals[n] - vals[n + 11]) for n in range(11))
    return [_row("rational_rotation_period", 22, "worst_abs_err", worst, 0.0)]


def _oracle_3ap(s: IntSet, sign: int):
    """Independent O(N^2) double loop over (a, d) with a primality test.

    Enumerates every progression with no early exit, then picks the
    lexicographically least (p, a) hit.
    """
    member_set = set(s.members)
    d_max = (s.universe - 1) // 2
    valid = {d for d in range(1, d_max + 1) if is_prime_int(d + 1 if sign == -1 else d - 1)}
    hits = []
    for a in s.members:
        for d in range(1, (s.universe - 1 - a) // 2 + 1):
            if d not in valid:
                continue
            if a + d in member_set and a + 2 * d in member_set:
                p = d + 1 if sign == -1 else d - 1
                hits.append((p, a))
    return min(hits) if hits else None


def ap_oracle(seed: int, quick: bool) -> list[dict]:
    count = 20 if quick else 100
    rng = _rng(seed, 7)
    mismatches = 0
    for _ in range(count):
        n = int(rng.integers(8, 513))
        density = float(rng.uniform(0.05, 0.6))
        members = np.flatnonzero(rng.random(n) < density)
        s = IntSet(universe=n, members=tuple(int(m) for m in members))
        sign = -1 if rng.random() < 0.5 else 1
        mine = find_3ap_shifted_prime(s, sign)
        oracle = _oracle_3ap(s, sign)
        if (mine is None) != (oracle is None):
            mismatches += 1
        elif mine is not None and (mine.p, mine.a) != oracle:
            mismatches += 1
    return [_row("ap_oracle_agreement", count, "mismatches", mismatches, 0)]


def report_determinism(seed: int, quick: bool) -> list[dict]:
    from .experiments import gt_uniformity_table

    runs = [
        gt_uniformity_table([2, 3], [31, 61], r=1, d=2).to_csv() for _ in range(2)
    ]
    return [_row("report_determinism", 2, "byte_mismatch", int(runs[0] != runs[1]), 0)]


SUITES: list[Callable[[int, bool], list[dict]]] = [
    sieve_reference,
    lambda_mean,
    vm_gap,
    gowers_strategy_agreement,
    u2_fourier_identity,
    delta_closed_forms,
    norm_axioms,
    gvn_inequality,
    ergodic_gvn,
    interval_algebra,
    rational_rotation_period,
    ap_oracle,
    report_determinism,
]


def run_selftest(
    config: RunConfig = DEFAULT_CONFIG,
    quick: bool = False,
    on_row: Callable | None = None,
) -> tuple[ExperimentReport, bool]:
    """Run every property suite; returns (report, all_passed)."""
    report = ExperimentReport(
        name="selftest",
        params={"quick": quick},
        provenance=config.provenance(),
        on_row=on_row,
    )
    ok = True
    for suite in SUITES:
        if suite in (gvn_inequality, ergodic_gvn):
            rows = suite(config.seed, quick, tol=config.tol_ineq)
        else:
            rows = suite(config.seed, quick)
        for row in rows:
            report.add_row(**row)
            ok = ok and row["status"] == "pass"
    return report, ok
