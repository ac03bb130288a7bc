"""Prime sieve and arithmetic functions.

Builds immutable tables of primes, the von Mangoldt function Lambda, and
the Euler totient phi up to a bound, and derives the W-tricked variants
of Lambda used by the uniformity experiments.

Conventions: Lambda(0) = Lambda(1) = 0 (neither is a prime power), natural
logarithms throughout, double precision reals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._util import is_prime_int
from .errors import PreconditionError
from .znz import ZnSeq

_SEGMENT = 1 << 22
_W_CARRIER_MAX = 2**63 - 1


@dataclass(frozen=True)
class ArithTables:
    """Sieve-backed tables for 0 <= n <= bound.

    Attributes:
        bound: largest index covered.
        primes: ascending int64 array of all primes <= bound.
        von_mangoldt: float64 array, von_mangoldt[n] = log p if n = p^m else 0.
        phi: int64 array of Euler totients (phi[0] = 0 by convention).
        is_prime: boolean primality array.

    Tables are immutable after construction and safe to share across
    worker threads.
    """

    bound: int
    primes: np.ndarray = field(repr=False)
    von_mangoldt: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    is_prime: np.ndarray = field(repr=False)

    def check_range(self, n: int) -> None:
        if not (0 <= n <= self.bound):
            raise PreconditionError(f"n={n} outside table range [0, {self.bound}]")

    def prime_pi(self, x: int) -> int:
        """Number of primes <= x."""
        if x < 2:
            return 0
        return int(np.searchsorted(self.primes, min(x, self.bound), side="right"))

    def primes_below(self, x: int) -> np.ndarray:
        """All primes p with p < x, ascending."""
        cut = int(np.searchsorted(self.primes, min(x, self.bound + 1), side="left"))
        return self.primes[:cut]


def _sieve_is_prime(n_max: int) -> np.ndarray:
    """Segmented Eratosthenes: boolean primality array of length n_max + 1."""
    flags = np.ones(n_max + 1, dtype=bool)
    flags[:2] = False
    root = math.isqrt(n_max)
    base = np.ones(root + 1, dtype=bool)
    base[:2] = False
    for p in range(2, math.isqrt(root) + 1):
        if base[p]:
            base[p * p :: p] = False
    base_primes = np.flatnonzero(base)
    for lo in range(2, n_max + 1, _SEGMENT):
        hi = min(lo + _SEGMENT, n_max + 1)
        for p in base_primes:
            p = int(p)
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start < hi:
                flags[start:hi:p] = False
    return flags


def build_tables(n_max: int) -> ArithTables:
    """Sieve everything up to n_max.

    Args:
        n_max: inclusive bound, must be >= 2.

    Returns:
        Populated :class:`ArithTables`; memory is O(n_max).
    """
    if n_max < 2:
        raise PreconditionError(f"n_max must be >= 2, got {n_max}")
    is_prime = _sieve_is_prime(n_max)
    primes = np.flatnonzero(is_prime).astype(np.int64)

    lam = np.zeros(n_max + 1, dtype=np.float64)
    lam[primes] = np.log(primes.astype(np.float64))
    for p in primes[primes <= math.isqrt(n_max)]:
        p = int(p)
        log_p = math.log(p)
        pk = p * p
        while pk <= n_max:
            lam[pk] = log_p
            pk *= p

    phi = np.arange(n_max + 1, dtype=np.int64)
    phi[0] = 0
    for p in primes:
        phi[p::p] = phi[p::p] // p * (p - 1)

    for arr in (primes, lam, phi, is_prime):
        arr.setflags(write=False)
    return ArithTables(bound=n_max, primes=primes, von_mangoldt=lam, phi=phi, is_prime=is_prime)


def lambda_prime(n: int, tables: ArithTables) -> float:
    """log n when n is prime, 0 otherwise (prime powers p^m, m >= 2 excluded)."""
    if not (1 <= n <= tables.bound):
        raise PreconditionError(f"n={n} outside table range [1, {tables.bound}]")
    return math.log(n) if tables.is_prime[n] else 0.0


def vm_gap_check(n: int, tables: ArithTables) -> tuple[float, float]:
    """Average gap between Lambda and its prime-only restriction, with its bound.

    Returns (gap, bound) where gap = (1/N) sum_{n<N} (Lambda(n) - log n 1_prime(n))
    and bound = (log N / N) * pi(floor(sqrt(N))). The gap collects exactly the
    higher prime powers p^m, m >= 2, so 0 <= gap <= bound always.
    """
    if not (1 <= n <= tables.bound):
        raise PreconditionError(f"N={n} outside table range [1, {tables.bound}]")
    idx = np.arange(n)
    lam = tables.von_mangoldt[:n]
    with np.errstate(divide="ignore"):
        logs = np.where(idx >= 1, np.log(np.maximum(idx, 1)), 0.0)
    lam_prime = np.where(tables.is_prime[:n], logs, 0.0)
    gap = float(np.sum(lam - lam_prime)) / n
    bound = (math.log(n) / n) * tables.prime_pi(math.isqrt(n)) if n >= 2 else 0.0
    return gap, bound


def w_of(w: int) -> int:
    """Product of the primes strictly below w (empty product is 1).

    Raises an explicit overflow error once the product would leave the
    64-bit carrier used for downstream index arithmetic (w <= 43 is safe).
    """
    if w < 1:
        raise PreconditionError(f"w must be >= 1, got {w}")
    product = 1
    for p in range(2, w):
        if is_prime_int(p):
            product *= p
            if product > _W_CARRIER_MAX:
                raise OverflowError(f"W(w={w}) exceeds the 64-bit integer carrier")
    return product


def lambda_tilde(w: int, r: int, n: int, tables: ArithTables) -> float:
    """W-tricked von Mangoldt value phi(W)/W * Lambda(W n + r)."""
    if r < 0:
        raise PreconditionError(f"r must be >= 0, got {r}")
    big_w = w_of(w)
    m = big_w * n + r
    if not (0 <= m <= tables.bound):
        raise PreconditionError(
            f"W*n+r = {m} outside table range [0, {tables.bound}] (w={w}, r={r}, n={n})"
        )
    return float(tables.phi[big_w]) / big_w * float(tables.von_mangoldt[m])


def restrict_to_zn(
    w: int,
    r: int,
    n_mod: int,
    tables: ArithTables,
    cutoff_den: int = 3,
) -> ZnSeq:
    """Recentred W-tricked weight restricted to an initial segment of Z/N.

    Returns the length-N sequence n -> (phi(W)/W * Lambda(W n + r) - 1) for
    n < floor(N / cutoff_den) and 0 beyond, as a sequence on Z/NZ. N must be
    prime, r >= 0 must be coprime to W.
    """
    if not is_prime_int(n_mod):
        raise PreconditionError(f"N={n_mod} must be prime to identify [0,N) with Z/NZ")
    if r < 0:
        raise PreconditionError(f"r must be >= 0, got {r}")
    if cutoff_den < 1:
        raise PreconditionError(f"cutoff_den must be >= 1, got {cutoff_den}")
    big_w = w_of(w)
    if math.gcd(r, big_w) != 1:
        raise PreconditionError(f"gcd(r, W) must be 1, got gcd({r}, {big_w})")
    cutoff = n_mod // cutoff_den
    values = np.zeros(n_mod, dtype=np.complex128)
    if cutoff > 0:
        top = big_w * (cutoff - 1) + r
        if top > tables.bound:
            raise PreconditionError(
                f"need Lambda up to {top} but tables stop at {tables.bound}"
            )
        idx = big_w * np.arange(cutoff, dtype=np.int64) + r
        values[:cutoff] = tables.phi[big_w] / big_w * tables.von_mangoldt[idx] - 1.0
    return ZnSeq(values)
