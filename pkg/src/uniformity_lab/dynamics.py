"""Simulated measure-preserving systems.

Two concrete system kinds:

* :class:`FiniteMPS`: a finite probability space with a measure-preserving
  permutation. Intersection measures are exact finite sums.
* :class:`CircleRotation`: rotation by alpha on [0, 1) with Lebesgue
  measure. Sets are unions of half-open intervals (:class:`IntervalSet`),
  closed under translation and intersection; observables are trigonometric
  polynomials (:class:`TrigPoly`) whose transport is an exact phase
  rotation.

Rational rotation angles can be carried as exact fractions, in which case
all interval endpoint arithmetic is exact and intersection measures are
exactly periodic in the iteration count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from ._util import cexp
from .config import DEFAULT_TOL_INEQ
from .errors import PreconditionError
from .znz import GvnResult, ZnSeq, gowers_norm


class FiniteMPS:
    """Finite probability space with a measure-preserving permutation.

    weights: nonnegative, sum to 1 (within 1e-12), and constant along the
    orbits of the permutation, which is exactly measure preservation for
    a bijection. mapping[x] is the image T(x).
    """

    __slots__ = ("size", "weights", "mapping")

    def __init__(self, weights, mapping) -> None:
        w = np.asarray(weights, dtype=np.float64)
        perm = np.asarray(mapping, dtype=np.int64)
        if w.ndim != 1 or perm.shape != w.shape or w.size < 1:
            raise PreconditionError("weights and mapping must be 1-D of equal length")
        if np.any(w < 0) or abs(float(w.sum()) - 1.0) > 1e-12:
            raise PreconditionError("weights must be nonnegative and sum to 1")
        if not np.array_equal(np.sort(perm), np.arange(w.size)):
            raise PreconditionError("mapping must be a permutation of 0..M-1")
        if np.max(np.abs(w[perm] - w)) > 1e-12:
            raise PreconditionError("weights must be invariant under the map")
        w = w.copy()
        perm = perm.copy()
        w.setflags(write=False)
        perm.setflags(write=False)
        self.size = w.size
        self.weights = w
        self.mapping = perm

    @classmethod
    def cyclic(cls, m: int) -> "FiniteMPS":
        """Uniform rotation on m points: T(x) = x + 1 mod m."""
        if m < 1:
            raise PreconditionError(f"need at least one state, got {m}")
        return cls(np.full(m, 1.0 / m), (np.arange(m) + 1) % m)

    def subset_mask(self, indices) -> np.ndarray:
        """Boolean mask for a subset given as an index collection or mask."""
        arr = np.asarray(indices)
        if arr.dtype == bool:
            if arr.shape != (self.size,):
                raise PreconditionError("boolean mask has wrong length")
            return arr.copy()
        arr = arr.astype(np.int64) if arr.size else np.zeros(0, dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() >= self.size):
            raise PreconditionError("subset indices out of range")
        mask = np.zeros(self.size, dtype=bool)
        mask[arr] = True
        return mask

    def measure(self, indices) -> float:
        return float(self.weights[self.subset_mask(indices)].sum())

    def power(self, n: int) -> np.ndarray:
        """The permutation of T^n (binary exponentiation; n may be negative)."""
        perm = self.mapping if n >= 0 else np.argsort(self.mapping)
        e = abs(n)
        result = np.arange(self.size)
        base = perm
        while e:
            if e & 1:
                result = base[result]
            base = base[base]
            e >>= 1
        return result


class IntervalSet:
    """Sorted disjoint union of half-open subintervals of [0, 1).

    Endpoints may be floats or exact rationals; arithmetic is pure Python
    so both carriers work. Overlapping or touching intervals are merged at
    construction.
    """

    __slots__ = ("intervals",)

    def __init__(self, intervals: Iterable[tuple] = ()) -> None:
        cleaned = []
        for a, b in intervals:
            if not (0 <= a < b <= 1):
                raise PreconditionError(f"interval [{a}, {b}) not inside [0, 1)")
            cleaned.append((a, b))
        cleaned.sort()
        merged: list[tuple] = []
        for a, b in cleaned:
            if merged and a <= merged[-1][1]:
                prev_a, prev_b = merged[-1]
                merged[-1] = (prev_a, max(prev_b, b))
            else:
                merged.append((a, b))
        self.intervals = tuple(merged)

    def measure(self) -> float:
        return float(sum((b - a for a, b in self.intervals), start=0))

    def is_empty(self) -> bool:
        return not self.intervals

    def translate(self, beta) -> "IntervalSet":
        """The set shifted by beta mod 1; wrap-around splits an interval in two."""
        beta = beta - math.floor(beta)
        out = []
        for a, b in self.intervals:
            ta, tb = a + beta, b + beta
            if tb <= 1:
                out.append((ta, tb))
            elif ta >= 1:
                out.append((ta - 1, tb - 1))
            else:
                out.append((ta, type(ta)(1)))
                if tb - 1 > 0:
                    out.append((type(tb)(0), tb - 1))
        return IntervalSet(out)

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        i = j = 0
        mine, theirs = self.intervals, other.intervals
        while i < len(mine) and j < len(theirs):
            lo = max(mine[i][0], theirs[j][0])
            hi = min(mine[i][1], theirs[j][1])
            if lo < hi:
                out.append((lo, hi))
            if mine[i][1] <= theirs[j][1]:
                i += 1
            else:
                j += 1
        return IntervalSet(out)

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(list(self.intervals) + list(other.intervals))

    def contains(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized membership for points in [0, 1)."""
        if not self.intervals:
            return np.zeros(np.shape(xs), dtype=bool)
        edges = np.array([float(e) for ab in self.intervals for e in ab])
        return np.searchsorted(edges, np.asarray(xs, dtype=np.float64), side="right") % 2 == 1

    def to_fractions(self) -> "IntervalSet":
        return IntervalSet([(Fraction(a), Fraction(b)) for a, b in self.intervals])


class CircleRotation:
    """Rotation x -> x + alpha mod 1 on [0, 1) with Lebesgue measure.

    Pass a float for an irrational angle, or an exact rational (Fraction
    or (p, q) tuple) to enable exact endpoint arithmetic. Whether the
    angle is rational is recorded from the constructor argument, not
    inferred from the float value.
    """

    __slots__ = ("alpha", "rational")

    def __init__(self, alpha) -> None:
        if isinstance(alpha, tuple):
            alpha = Fraction(*alpha)
        if isinstance(alpha, Rational) and not isinstance(alpha, float):
            frac = Fraction(alpha) % 1
            self.rational: Fraction | None = frac
            self.alpha = float(frac)
        else:
            a = float(alpha)
            if not (0 <= a < 1):
                a = a % 1.0
            self.rational = None
            self.alpha = a

    @property
    def is_rational(self) -> bool:
        return self.rational is not None


class TrigPoly:
    """Finitely supported trigonometric polynomial sum_k c_k e(k x)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict[int, complex]) -> None:
        self.coeffs = {int(k): complex(c) for k, c in coeffs.items() if c != 0}

    def __sub__(self, other: "TrigPoly") -> "TrigPoly":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0j) - c
        return TrigPoly(out)

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0j) + c
        return TrigPoly(out)

    def scale(self, c: complex) -> "TrigPoly":
        return TrigPoly({k: c * v for k, v in self.coeffs.items()})

    def sup_bound(self) -> float:
        """The l1 coefficient mass, an upper bound for the sup norm."""
        return float(sum(abs(c) for c in self.coeffs.values()))

    def evaluate(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.float64)
        total = np.zeros(xs.shape, dtype=np.complex128)
        for k, c in sorted(self.coeffs.items()):
            total += c * cexp(k * xs)
        return total


def _rotation_steps(system: CircleRotation, step: int):
    """Translation offset of T^{-step}: exact fraction when available."""
    if system.rational is not None:
        return -step * system.rational % 1
    return (-step * system.alpha) % 1.0


def triple_intersection(system, subset, n: int, gap: int = 1) -> float:
    """mu(A intersect T^{-g n} A intersect T^{-2 g n} A).

    For finite systems the subset is an index collection; for rotations it
    is an :class:`IntervalSet` and the translates are computed by exact
    interval intersection.
    """
    if n < 0:
        raise PreconditionError(f"n must be >= 0, got {n}")
    if gap < 1:
        raise PreconditionError(f"gap must be >= 1, got {gap}")
    if isinstance(system, FiniteMPS):
        mask = system.subset_mask(subset)
        step = system.power(gap * n)
        hit = mask & mask[step] & mask[step[step]]
        return float(system.weights[hit].sum())
    if isinstance(system, CircleRotation):
        if not isinstance(subset, IntervalSet):
            raise TypeError("rotation subsets must be IntervalSet instances")
        work = subset.to_fractions() if system.rational is not None else subset
        shift = _rotation_steps(system, gap * n)
        first = work.translate(shift)
        second = first.translate(shift)
        return work.intersect(first).intersect(second).measure()
    raise TypeError(f"unsupported system kind {type(system).__name__}")


def transport(f, system, n: int):
    """The observable f composed with T^n."""
    if isinstance(system, FiniteMPS):
        if isinstance(f, TrigPoly):
            raise TypeError("TrigPoly observables belong to rotations")
        vec = np.asarray(f, dtype=np.complex128)
        if vec.shape != (system.size,):
            raise PreconditionError("observable length must match the system size")
        return vec[system.power(n)]
    if isinstance(system, CircleRotation):
        if not isinstance(f, TrigPoly):
            raise TypeError("rotation observables must be TrigPoly instances")
        return TrigPoly({k: c * complex(cexp(k * n * system.alpha)) for k, c in f.coeffs.items()})
    raise TypeError(f"unsupported system kind {type(system).__name__}")


def l2_norm(f, system) -> float:
    """The L2 norm of an observable under the system's invariant measure."""
    if isinstance(system, FiniteMPS):
        vec = np.asarray(f, dtype=np.complex128)
        if vec.shape != (system.size,):
            raise PreconditionError("observable length must match the system size")
        return math.sqrt(float(np.sum(system.weights * np.abs(vec) ** 2)))
    if isinstance(system, CircleRotation):
        if not isinstance(f, TrigPoly):
            raise TypeError("rotation observables must be TrigPoly instances")
        return math.sqrt(sum(abs(c) ** 2 for c in f.coeffs.values()))
    raise TypeError(f"unsupported system kind {type(system).__name__}")


def ergodic_gvn_check(
    system: FiniteMPS,
    theta: ZnSeq,
    fs: Sequence[np.ndarray],
    k: int,
    n_mod: int,
    tol: float = DEFAULT_TOL_INEQ,
) -> GvnResult:
    """Ergodic-average form of the generalized von Neumann inequality.

    With L = floor(N/k) and theta supported on [0, L), compares

        lhs = || (1/L) sum_{n<L} theta(n) T^n f_1 ... T^{(k-1)n} f_{k-1} ||_{L2(mu)}

    against rhs = (2k)^{3/2} U_k(theta). The observables must satisfy
    sup |f_i| <= 1, and theta must vanish on [L, N); sequences violating
    the support condition are rejected, never truncated.
    """
    if not isinstance(system, FiniteMPS):
        raise TypeError("the ergodic inequality checker runs on finite systems")
    if not (2 <= k <= 4):
        raise PreconditionError(f"k={k} outside supported range 2..4")
    if n_mod <= k:
        raise PreconditionError(f"need N > k, got N={n_mod}, k={k}")
    if theta.modulus != n_mod:
        raise PreconditionError(f"theta lives on Z/{theta.modulus}, expected Z/{n_mod}")
    if len(fs) != k - 1:
        raise PreconditionError(f"need k-1={k-1} observables, got {len(fs)}")
    cut = n_mod // k
    if np.any(theta.values[cut:] != 0):
        raise PreconditionError(
            f"theta must vanish on [{cut}, {n_mod}); refusing to truncate"
        )
    obs = []
    for i, f in enumerate(fs):
        vec = np.asarray(f, dtype=np.complex128)
        if vec.shape != (system.size,):
            raise PreconditionError(f"observable {i} length must match the system size")
        if np.max(np.abs(vec)) > 1 + 1e-12:
            raise PreconditionError(f"observable {i} must satisfy sup |f| <= 1")
        obs.append(vec)

    terms = np.empty((cut, system.size), dtype=np.complex128)
    p_n = np.arange(system.size)  # T^n, advanced incrementally
    for n in range(cut):
        if n > 0:
            p_n = system.mapping[p_n]
        prod = np.full(system.size, theta.values[n], dtype=np.complex128)
        comp = p_n  # T^{i n} for i = 1, 2, ...
        for vec in obs:
            prod = prod * vec[comp]
            comp = p_n[comp]
        terms[n] = prod
    avg = terms.mean(axis=0)
    lhs = math.sqrt(float(np.sum(system.weights * np.abs(avg) ** 2)))
    rhs = (2 * k) ** 1.5 * gowers_norm(theta, k, "recursive").value
    return GvnResult(lhs=lhs, rhs=rhs, holds=lhs <= rhs + tol)
