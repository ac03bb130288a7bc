"""Experiment harnesses.

Each harness instantiates one of the headline phenomena at desk scale and
returns an :class:`ExperimentReport`:

* ``gt_uniformity_table``: Gowers norms of the recentred W-tricked von
  Mangoldt weight on Z/NZ across (w, N) cells. The interesting content is
  the trend: norms shrink as w removes small-prime bias and as N grows.
* ``prime_shift_recurrence``: averages of triple intersection measures
  along shifted primes p + shift.
* ``w_tricked_recurrence``: the W-dilated triple-recurrence average with
  and without the W-tricked weight; their gap is the quantity that the
  uniformity bound drives to zero.
* ``prime_vs_weighted``: averages of a bounded sequence over primes vs
  the von Mangoldt weighted average over all integers.
* ``double_average_prime``: the prime-indexed double ergodic average on a
  circle rotation with trigonometric-polynomial observables, evaluated in
  closed form through exponential sums over primes.
* ``cauchy_profile``: successive L2 distances of the double average along
  a ladder of cutoffs.
* ``totally_ergodic_compare``: L2 distance between the prime-indexed and
  the full Cesaro double average on an irrational rotation.

All ladders are deterministic, all sums use direct summation over the
sieve (no analytic shortcuts), and every row is a pure function of the
parameters, so reports reproduce bit-identically.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from . import arith
from ._util import cexp, is_prime_int, pairwise_mean, parallel_map
from .config import RunConfig, DEFAULT_CONFIG
from .dynamics import CircleRotation, TrigPoly, l2_norm, triple_intersection
from .errors import PreconditionError, ResourceError
from .report import ExperimentReport
from .znz import gowers_norm

#: Experiments refuse w beyond this (the sieve for W*N/3 becomes enormous).
MAX_EXPERIMENT_W = 17
#: Hard cap on the sieve bound an experiment may request.
MAX_SIEVE_BOUND = 200_000_000
#: Cap on the coefficient-support product in the double average.
MAX_SUPPORT_PRODUCT = 10_000


def nearest_prime(x: int) -> int:
    """The prime closest to x (ties resolve downward)."""
    x = max(int(x), 2)
    lo, hi = x, x
    while lo >= 2 and not is_prime_int(lo):
        lo -= 1
    while not is_prime_int(hi):
        hi += 1
    if lo < 2:
        return hi
    return lo if (x - lo) <= (hi - x) else hi


def log_ladder(lo: int, hi: int, points: int, prime: bool = False) -> list[int]:
    """Geometric ladder from lo to hi, optionally rounded to nearest primes."""
    if points < 1:
        raise PreconditionError(f"need at least one ladder point, got {points}")
    if not (1 <= lo <= hi):
        raise PreconditionError(f"bad ladder range [{lo}, {hi}]")
    if points == 1:
        raw = [hi]
    else:
        ratio = (hi / lo) ** (1.0 / (points - 1))
        raw = [int(round(lo * ratio**i)) for i in range(points)]
        raw[-1] = hi
    if prime:
        raw = [nearest_prime(v) for v in raw]
    out: list[int] = []
    for v in raw:
        if not out or v > out[-1]:
            out.append(v)
    return out


def _tables_for(bound: int, tables: arith.ArithTables | None) -> arith.ArithTables:
    if bound > MAX_SIEVE_BOUND:
        raise ResourceError(
            f"experiment needs a sieve up to {bound}, above the cap {MAX_SIEVE_BOUND}"
        )
    if tables is not None and tables.bound >= bound:
        return tables
    return arith.build_tables(max(bound, 2))


def _report(name: str, params: dict, config: RunConfig, on_row=None) -> ExperimentReport:
    return ExperimentReport(
        name=name, params=params, provenance=config.provenance(), on_row=on_row
    )


def gt_uniformity_table(
    w_list: Sequence[int],
    n_list: Sequence[int],
    r: int,
    d: int,
    config: RunConfig = DEFAULT_CONFIG,
    tables: arith.ArithTables | None = None,
    on_row: Callable | None = None,
) -> ExperimentReport:
    """Uniformity norms of (W-tricked von Mangoldt - 1) on initial thirds.

    One row per (w, N) cell: columns (w, W, N, d, norm, error). Cells with
    composite N or gcd(r, W) != 1 are rejected in place with an error row.
    Runtime is dominated by the norm evaluation: d = 2 costs O(N^2), d = 3
    costs O(N^2 log N) per cell.
    """
    if d not in (2, 3):
        raise PreconditionError(f"d must be 2 or 3, got {d}")
    report = _report(
        "gt_uniformity_table",
        {"w_list": list(w_list), "n_list": list(n_list), "r": r, "d": d},
        config,
        on_row,
    )
    cells = []
    for w in w_list:
        if w > MAX_EXPERIMENT_W:
            raise PreconditionError(
                f"experiments cap w at {MAX_EXPERIMENT_W}, got w={w}"
            )
        big_w = arith.w_of(w)
        for n in n_list:
            cells.append((int(w), big_w, int(n)))

    bound = 2
    for w, big_w, n in cells:
        if is_prime_int(n) and math.gcd(r, big_w) == 1:
            bound = max(bound, big_w * max(n // 3 - 1, 0) + r)
    shared = _tables_for(bound, tables)

    def run_cell(cell):
        w, big_w, n = cell
        if not is_prime_int(n):
            return dict(w=w, W=big_w, N=n, d=d, norm=None, error="N is not prime")
        if math.gcd(r, big_w) != 1:
            return dict(w=w, W=big_w, N=n, d=d, norm=None, error=f"gcd(r={r}, W={big_w}) != 1")
        seq = arith.restrict_to_zn(w, r, n, shared)
        norm = gowers_norm(seq, d, "recursive").value
        return dict(w=w, W=big_w, N=n, d=d, norm=norm, error="")

    workers = config.with_env_workers().workers
    for row in parallel_map(run_cell, cells, workers):
        report.add_row(**row)
    return report


def prime_shift_recurrence(
    system,
    subset,
    shift: int,
    n: int,
    ladder: Sequence[int] | None = None,
    config: RunConfig = DEFAULT_CONFIG,
    tables: arith.ArithTables | None = None,
    on_row: Callable | None = None,
) -> ExperimentReport:
    """Triple recurrence averaged along the shifted primes p + shift.

    Rows (N', count, avg) for a log-spaced ladder N' <= N, with
    avg = mean over primes p < N' of mu(A ^ T^-(p+shift) A ^ T^-2(p+shift) A).
    Each row is recomputed from scratch (no incremental state).
    """
    if n < 3:
        raise PreconditionError(f"need N >= 3 for a nonempty prime range, got {n}")
    shared = _tables_for(n, tables)
    points = ladder if ladder is not None else log_ladder(min(1000, n), n, 5)
    report = _report(
        "prime_shift_recurrence",
        {"shift": shift, "n": n},
        config,
        on_row,
    )

    def run_row(n_prime: int) -> dict:
        primes = shared.primes_below(n_prime)
        if primes.size == 0:
            return dict(N=n_prime, count=0, avg=None, error="no primes below N'")
        values = np.array(
            [triple_intersection(system, subset, int(p) + shift) for p in primes]
        )
        return dict(
            N=n_prime,
            count=int(primes.size),
            avg=float(pairwise_mean(values)),
            error="",
        )

    workers = config.with_env_workers().workers
    for row in parallel_map(run_row, list(points), workers):
        report.add_row(**row)
    return report


def w_tricked_recurrence(
    system,
    subset,
    w: int,
    n: int,
    ladder: Sequence[int] | None = None,
    config: RunConfig = DEFAULT_CONFIG,
    tables: arith.ArithTables | None = None,
    on_row: Callable | None = None,
) -> ExperimentReport:
    """W-dilated triple recurrence with and without the W-tricked weight.

    Rows (N', weighted, unweighted, diff) over prime ladder points N':

        weighted   = (1/L) sum_{n<L} lambda_tilde_{w,N',1}(n) mu(A ^ T^-Wn A ^ T^-2Wn A)
        unweighted = (1/L) sum_{n<L} mu(A ^ T^-Wn A ^ T^-2Wn A)

    with L = floor(N'/3). The weighted-minus-unweighted gap shrinking in
    N' and w is the numerical shadow of the uniformity estimate.
    """
    if w > MAX_EXPERIMENT_W:
        raise PreconditionError(f"experiments cap w at {MAX_EXPERIMENT_W}, got w={w}")
    big_w = arith.w_of(w)
    points = ladder if ladder is not None else log_ladder(min(1000, n), n, 4, prime=True)
    report = _report(
        "w_tricked_recurrence",
        {"w": w, "W": big_w, "n": n},
        config,
        on_row,
    )
    max_needed = 2
    valid_points = []
    for n_prime in points:
        if is_prime_int(n_prime):
            valid_points.append(n_prime)
            max_needed = max(max_needed, big_w * max(n_prime // 3 - 1, 0) + 1)
    shared = _tables_for(max_needed, tables)

    def run_row(n_prime: int) -> dict:
        if not is_prime_int(n_prime):
            return dict(N=n_prime, weighted=None, unweighted=None, diff=None,
                        error="N' is not prime")
        cut = n_prime // 3
        mus = np.array(
            [triple_intersection(system, subset, m, gap=big_w) for m in range(cut)]
        )
        idx = big_w * np.arange(cut, dtype=np.int64) + 1
        weights = float(shared.phi[big_w]) / big_w * shared.von_mangoldt[idx]
        weighted = float(pairwise_mean(weights * mus))
        unweighted = float(pairwise_mean(mus))
        return dict(
            N=n_prime,
            weighted=weighted,
            unweighted=unweighted,
            diff=weighted - unweighted,
            error="",
        )

    workers = config.with_env_workers().workers
    for row in parallel_map(run_row, list(points), workers):
        report.add_row(**row)
    return report


def prime_vs_weighted(
    a: Callable[[np.ndarray], np.ndarray],
    n: int,
    ladder: Sequence[int] | None = None,
    config: RunConfig = DEFAULT_CONFIG,
    tables: arith.ArithTables | None = None,
    on_row: Callable | None = None,
) -> ExperimentReport:
    """Prime average of a bounded sequence vs its von Mangoldt weighted average.

    The generator ``a`` maps an int64 index array to complex values with
    |a(n)| <= 1; out-of-bound values are rejected, never clamped. Rows
    (N', prime_avg_re, prime_avg_im, lambda_avg_re, lambda_avg_im, diff)
    where diff = |prime_avg - lambda_avg| shrinks along the ladder.
    """
    if n < 3:
        raise PreconditionError(f"need N >= 3, got {n}")
    shared = _tables_for(n, tables)
    points = ladder if ladder is not None else log_ladder(min(1000, n), n, 5)
    values = np.asarray(a(np.arange(n, dtype=np.int64)), dtype=np.complex128)
    if values.shape != (n,):
        raise PreconditionError("sequence generator must return one value per index")
    magnitudes = np.abs(values)
    if np.any(magnitudes > 1 + 1e-12):
        bad = int(np.argmax(magnitudes > 1 + 1e-12))
        raise PreconditionError(f"|a({bad})| = {magnitudes[bad]} exceeds 1")
    report = _report("prime_vs_weighted", {"n": n}, config, on_row)
    lam = shared.von_mangoldt
    for n_prime in points:
        primes = shared.primes_below(n_prime)
        if primes.size == 0:
            report.add_row(N=n_prime, prime_avg_re=None, prime_avg_im=None,
                           lambda_avg_re=None, lambda_avg_im=None, diff=None,
                           error="no primes below N'")
            continue
        prime_avg = complex(pairwise_mean(values[primes]))
        lambda_avg = complex(pairwise_mean(lam[:n_prime] * values[:n_prime]))
        report.add_row(
            N=n_prime,
            prime_avg_re=prime_avg.real,
            prime_avg_im=prime_avg.imag,
            lambda_avg_re=lambda_avg.real,
            lambda_avg_im=lambda_avg.imag,
            diff=abs(prime_avg - lambda_avg),
            error="",
        )
    return report


def _prime_exp_sum(j: int, primes: np.ndarray, alpha: float) -> complex:
    """S(j, N) = mean over p < N of e(j p alpha), by direct summation."""
    if primes.size == 0:
        raise PreconditionError("empty prime range in exponential sum")
    if j == 0:
        return 1.0 + 0.0j
    phases = (j * primes).astype(np.float64) * alpha % 1.0
    return complex(pairwise_mean(cexp(phases)))


def _cesaro_exp_sum(j: int, n: int, alpha: float) -> complex:
    """C(j, N) = mean over 0 <= m < N of e(j m alpha), by direct summation."""
    if j == 0:
        return 1.0 + 0.0j
    phases = (j * np.arange(n, dtype=np.int64)).astype(np.float64) * alpha % 1.0
    return complex(pairwise_mean(cexp(phases)))


def _double_average(
    f1: TrigPoly, f2: TrigPoly, sum_fn: Callable[[int], complex]
) -> TrigPoly:
    """Closed-form double average: coefficient at k+l picks up sum_fn(k + 2l)."""
    if len(f1.coeffs) * len(f2.coeffs) > MAX_SUPPORT_PRODUCT:
        raise ResourceError(
            f"coefficient support product exceeds {MAX_SUPPORT_PRODUCT} terms"
        )
    out: dict[int, complex] = {}
    for k, ck in sorted(f1.coeffs.items()):
        for l, dl in sorted(f2.coeffs.items()):
            out[k + l] = out.get(k + l, 0j) + ck * dl * sum_fn(k + 2 * l)
    return TrigPoly(out)


def double_average_prime(
    system: CircleRotation,
    f1: TrigPoly,
    f2: TrigPoly,
    n: int,
    tables: arith.ArithTables | None = None,
) -> TrigPoly:
    """(1/pi(N)) sum_{p<N} T^p f1 * T^2p f2 on a circle rotation.

    The output coefficient at frequency k+l is c_k d_l S(k+2l, N) with
    S(j, N) the prime exponential sum mean of e(j p alpha), computed by
    direct summation over the sieve.
    """
    if not isinstance(system, CircleRotation):
        raise TypeError("double_average_prime runs on circle rotations")
    shared = _tables_for(n, tables)
    primes = shared.primes_below(n)
    cache: dict[int, complex] = {}

    def sum_fn(j: int) -> complex:
        if j not in cache:
            cache[j] = _prime_exp_sum(j, primes, system.alpha)
        return cache[j]

    return _double_average(f1, f2, sum_fn)


def cauchy_profile(
    system: CircleRotation,
    f1: TrigPoly,
    f2: TrigPoly,
    n_ladder: Sequence[int],
    config: RunConfig = DEFAULT_CONFIG,
    tables: arith.ArithTables | None = None,
    on_row: Callable | None = None,
) -> ExperimentReport:
    """Consecutive L2 distances of the prime double average along a ladder.

    Rows (N_lo, N_hi, dist) with dist = || avg(N_hi) - avg(N_lo) ||_L2.
    The report records whatever the distances are; judging the trend is
    the caller's business.
    """
    ladder = [int(v) for v in n_ladder]
    if len(ladder) < 2:
        raise PreconditionError("need a ladder of at least two points")
    if any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise PreconditionError("ladder must be strictly ascending")
    shared = _tables_for(ladder[-1], tables)
    report = _report(
        "cauchy_profile",
        {"ladder": ladder, "alpha": system.alpha},
        config,
        on_row,
    )
    averages = [double_average_prime(system, f1, f2, v, tables=shared) for v in ladder]
    for (lo, hi), (prev, cur) in zip(
        zip(ladder, ladder[1:]), zip(averages, averages[1:])
    ):
        report.add_row(N_lo=lo, N_hi=hi, dist=l2_norm(cur - prev, system))
    return report


def totally_ergodic_compare(
    system: CircleRotation,
    f1: TrigPoly,
    f2: TrigPoly,
    n: int,
    ladder: Sequence[int] | None = None,
    config: RunConfig = DEFAULT_CONFIG,
    tables: arith.ArithTables | None = None,
    on_row: Callable | None = None,
) -> ExperimentReport:
    """Prime-indexed vs Cesaro double average on an irrational rotation.

    Rows (N', dist) with dist the L2 distance between the two closed-form
    averages at cutoff N'. On a totally ergodic rotation both averages
    share a limit, so the distance should fall along the ladder.
    """
    if system.is_rational:
        raise PreconditionError(
            "the limit-equality comparison requires an irrational rotation"
        )
    shared = _tables_for(n, tables)
    points = ladder if ladder is not None else log_ladder(max(2, n // 100), n, 5)
    report = _report(
        "totally_ergodic_compare",
        {"n": n, "alpha": system.alpha},
        config,
        on_row,
    )
    for n_prime in points:
        prime_avg = double_average_prime(system, f1, f2, n_prime, tables=shared)
        cesaro = _double_average(
            f1, f2, lambda j: _cesaro_exp_sum(j, n_prime, system.alpha)
        )
        report.add_row(N=n_prime, dist=l2_norm(prime_avg - cesaro, system))
    return report
