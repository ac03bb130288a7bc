"""Sequences on Z/NZ, expectation, and Gowers uniformity norms.

Three evaluation strategies are provided and cross-checked in the test
suite:

* ``recursive``: the inductive definition. U_1 is the absolute mean;
  U_{d+1}(f)^{2^{d+1}} averages U_d(f_h conj(f))^{2^d} over shifts h,
  where f_h(n) = f(n + h). The U_3 evaluation meets an O(N^2 log N)
  budget by computing each inner U_2 through a length-N Fourier
  transform.
* ``fourier``: for d = 2 only, the identity U_2(f)^4 = sum_xi |fhat(xi)|^4
  with fhat(xi) the normalized transform E_n f(n) e(-n xi / N).
* ``bruteforce``: the direct parallelepiped average over (n, h_1..h_d)
  with the alternating conjugation pattern, O(N^{d+1}); hard-capped at
  N <= 256.

All shift reductions go through a fixed pairwise summation tree, so
values are deterministic no matter how the work is batched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from ._util import pairwise_mean, pairwise_sum
from .config import DEFAULT_TOL_INEQ
from .errors import PreconditionError, ResourceError
from .fft import dft

MAX_ORDER = 4
BRUTEFORCE_CAP = 256
STRATEGIES = ("recursive", "fourier", "bruteforce")

# rows per batch are sized so a batch stays around 2^21 complex entries
_BATCH_BUDGET = 1 << 21


class ZnSeq:
    """A complex-valued sequence indexed by Z/NZ.

    Index arithmetic wraps mod N. Values must be finite; this is checked
    once at construction. Instances are treated as immutable.
    """

    __slots__ = ("modulus", "values")

    def __init__(self, values) -> None:
        arr = np.asarray(values, dtype=np.complex128)
        if arr.ndim != 1 or arr.size < 1:
            raise PreconditionError("ZnSeq needs a nonempty 1-D value array")
        if not np.all(np.isfinite(arr.view(np.float64))):
            raise PreconditionError("ZnSeq values must be finite (no NaN/inf)")
        arr = arr.copy()
        arr.setflags(write=False)
        self.values = arr
        self.modulus = arr.size

    def __len__(self) -> int:
        return self.modulus

    def shift(self, h: int) -> "ZnSeq":
        """The translate f_h with f_h(n) = f(n + h)."""
        return ZnSeq(np.roll(self.values, -h))

    def conj(self) -> "ZnSeq":
        return ZnSeq(self.values.conj())

    def __mul__(self, other: "ZnSeq") -> "ZnSeq":
        if not isinstance(other, ZnSeq) or other.modulus != self.modulus:
            return NotImplemented
        return ZnSeq(self.values * other.values)


@dataclass(frozen=True)
class NormResult:
    """A computed uniformity norm together with how it was evaluated."""

    d: int
    value: float
    strategy: str


class GvnResult(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def expectation(f: ZnSeq) -> complex:
    """The mean value (1/N) sum_n f(n), as a complex number."""
    return complex(pairwise_mean(f.values))


def _batch_rows(n: int, width: int | None = None) -> int:
    width = n if width is None else width
    return max(1, _BATCH_BUDGET // max(1, width))


def _shift_window(doubled: np.ndarray, start: int, count: int, n: int) -> np.ndarray:
    """Read-only view whose row i is f(start+i), f(start+i+1), ..., length n."""
    stride = doubled.strides[0]
    return np.lib.stride_tricks.as_strided(
        doubled[start:], shape=(count, n), strides=(stride, stride), writeable=False
    )


def _u2_pow4_direct(values: np.ndarray) -> float:
    """E_h |E_n f(n+h) conj f(n)|^2 by direct correlation sums."""
    n = values.size
    doubled = np.concatenate([values, values])
    conj = values.conj()
    per_h = np.empty(n, dtype=np.float64)
    rows = _batch_rows(n)
    for start in range(0, n, rows):
        count = min(rows, n - start)
        window = np.ascontiguousarray(_shift_window(doubled, start, count, n))
        corr = window @ conj / n
        per_h[start : start + count] = np.abs(corr) ** 2
    return float(pairwise_mean(per_h))


def _u2_pow4_fourier_rows(rows: np.ndarray) -> np.ndarray:
    """U_2^4 of each row via sum_xi |fhat|^4 with fhat = DFT/N."""
    n = rows.shape[-1]
    fhat = dft(rows) / n
    return np.sum(np.abs(fhat) ** 4, axis=-1)


def _u3_pow8(values: np.ndarray) -> float:
    """E_h U_2(f_h conj f)^4, the inner U_2 via a length-N transform."""
    n = values.size
    padded = 1 << (2 * n - 1).bit_length() if n & (n - 1) else n
    doubled = np.concatenate([values, values])
    conj = values.conj()
    per_h = np.empty(n, dtype=np.float64)
    rows = _batch_rows(n, padded)
    for start in range(0, n, rows):
        count = min(rows, n - start)
        g = _shift_window(doubled, start, count, n) * conj[None, :]
        per_h[start : start + count] = _u2_pow4_fourier_rows(g)
    return float(pairwise_mean(per_h))


def _u4_pow16(values: np.ndarray) -> float:
    n = values.size
    per_h = np.empty(n, dtype=np.float64)
    conj = values.conj()
    for h in range(n):
        per_h[h] = _u3_pow8(np.roll(values, -h) * conj)
    return float(pairwise_mean(per_h))


def _recursive_value(values: np.ndarray, d: int) -> float:
    if d == 1:
        return abs(complex(pairwise_mean(values)))
    if d == 2:
        return max(_u2_pow4_direct(values), 0.0) ** 0.25
    if d == 3:
        return max(_u3_pow8(values), 0.0) ** 0.125
    return max(_u4_pow16(values), 0.0) ** 0.0625


def _fourier_value(values: np.ndarray) -> float:
    n = values.size
    fhat = dft(values) / n
    total = float(pairwise_sum(np.abs(fhat) ** 4))
    return max(total, 0.0) ** 0.25


def _bruteforce_pow(values: np.ndarray, d: int) -> float:
    """Direct parallelepiped mean over (n, h_1..h_d).

    The first g variables (n, h_1..h_{g-1}) form a broadcast grid; the
    remaining shifts are looped in Python. g is chosen so the grid stays
    within a fixed memory budget, which does not change the value: the
    per-iteration means feed one pairwise reduction tree either way.
    """
    n = values.size
    conj = values.conj()

    g = d + 1
    while g > 1 and (1 << (g - 1)) * n**g > _BATCH_BUDGET:
        g -= 1
    inner_bits = (1 << (g - 1)) - 1  # vertex bits for h_1..h_{g-1}

    def axis_arr(axis: int) -> np.ndarray:
        shape = [1] * g
        shape[axis] = n
        return np.arange(n, dtype=np.int64).reshape(shape)

    inner_sum: dict[int, np.ndarray] = {}
    for key in range(1 << (g - 1)):
        arr = axis_arr(0)
        for i in range(1, g):
            if key >> (i - 1) & 1:
                arr = arr + axis_arr(i)
        inner_sum[key] = arr % n

    def gather(mask: int, idx: np.ndarray) -> np.ndarray:
        src = conj if bin(mask).count("1") % 2 else values
        return src[idx]

    static_prod = np.ones(1, dtype=np.complex128)
    for mask in range(1 << d):
        if mask & ~inner_bits == 0:
            static_prod = static_prod * gather(mask, inner_sum[mask])
    dynamic = [mask for mask in range(1 << d) if mask & ~inner_bits]

    loops = d + 1 - g  # number of looped shift variables h_g..h_d
    if loops == 0:
        return float(complex(static_prod.mean()).real)

    partial = np.empty(n**loops, dtype=np.complex128)
    for j, combo in enumerate(np.ndindex(*((n,) * loops))):
        prod = static_prod
        for mask in dynamic:
            off = sum(combo[t] for t in range(loops) if mask >> (g - 1 + t) & 1)
            prod = prod * gather(mask, (inner_sum[mask & inner_bits] + off) % n)
        partial[j] = prod.mean()
    return float(complex(pairwise_mean(partial)).real)


def gowers_norm(f: ZnSeq, d: int, strategy: str = "recursive") -> NormResult:
    """Gowers uniformity norm U_d of f on Z/NZ.

    Args:
        f: the sequence.
        d: norm order, 1 <= d <= 4 (U_1 is the seminorm |mean|).
        strategy: one of ``recursive``, ``fourier`` (d = 2 only),
            ``bruteforce`` (N <= 256).
    """
    if not (1 <= d <= MAX_ORDER):
        raise PreconditionError(f"norm order d={d} outside supported range 1..{MAX_ORDER}")
    if strategy not in STRATEGIES:
        raise PreconditionError(f"unknown strategy {strategy!r}; pick from {STRATEGIES}")
    if strategy == "fourier" and d != 2:
        raise PreconditionError("the fourier strategy applies to d=2 only")
    if strategy == "bruteforce" and f.modulus > BRUTEFORCE_CAP:
        raise ResourceError(
            f"bruteforce is capped at N <= {BRUTEFORCE_CAP}, got N={f.modulus}"
        )

    if strategy == "recursive":
        value = _recursive_value(f.values, d)
    elif strategy == "fourier":
        value = _fourier_value(f.values)
    else:
        value = max(_bruteforce_pow(f.values, d), 0.0) ** (1.0 / (1 << d))
    return NormResult(d=d, value=value, strategy=strategy)


def gvn_check(
    theta: ZnSeq,
    phis: Sequence[ZnSeq],
    k: int,
    tol: float = DEFAULT_TOL_INEQ,
) -> GvnResult:
    """Generalized von Neumann inequality check on Z/NZ.

    Compares the multilinear average

        lhs = |E_{m,n} theta(n) phi_0(m) phi_1(m+n) ... phi_{k-1}(m+(k-1)n)|

    against rhs = U_k(theta) * (E |phi_0|^2)^{1/2}. Requires |phi_i| <= 1
    for i >= 1; phi_0 is unconstrained. Returns (lhs, rhs, lhs <= rhs + tol).
    """
    if not (1 <= k <= MAX_ORDER):
        raise PreconditionError(f"k={k} outside supported range 1..{MAX_ORDER}")
    if len(phis) != k:
        raise PreconditionError(f"need exactly k={k} phi sequences, got {len(phis)}")
    n = theta.modulus
    for i, phi in enumerate(phis):
        if phi.modulus != n:
            raise PreconditionError(f"phi_{i} modulus {phi.modulus} != theta modulus {n}")
        if i >= 1 and np.max(np.abs(phi.values)) > 1 + 1e-12:
            raise PreconditionError(f"|phi_{i}| must be <= 1 everywhere")

    m_idx = np.arange(n)
    per_n = np.empty(n, dtype=np.complex128)
    rows = _batch_rows(n)
    phi0 = phis[0].values
    for start in range(0, n, rows):
        ns = np.arange(start, min(start + rows, n))
        prod = np.broadcast_to(phi0[None, :], (ns.size, n)).copy()
        for i in range(1, k):
            prod *= phis[i].values[(m_idx[None, :] + i * ns[:, None]) % n]
        per_n[ns] = theta.values[ns] * prod.mean(axis=1)
    lhs = abs(complex(pairwise_mean(per_n)))

    norm = gowers_norm(theta, k, "recursive").value
    l2_phi0 = math.sqrt(float(pairwise_mean(np.abs(phi0) ** 2)))
    rhs = norm * l2_phi0
    return GvnResult(lhs=lhs, rhs=rhs, holds=lhs <= rhs + tol)
