"""Three-term progressions whose common difference is a shifted prime.

Searches an integer set for a, a+d, a+2d with d = p - 1 (or d = p + 1)
for a prime p. The search is exhaustive over the universe in a fixed
order (ascending p, then ascending a), so a miss certifies that no such
progression exists and hits are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from ._util import is_prime_int
from .errors import PreconditionError
from .report import ExperimentReport


class ApHit(NamedTuple):
    a: int
    p: int
    d: int


@dataclass(frozen=True)
class IntSet:
    """A finite set of integers inside the universe [0, N)."""

    universe: int
    members: tuple = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.universe < 1:
            raise PreconditionError(f"universe must be >= 1, got {self.universe}")
        ordered = tuple(sorted(int(m) for m in self.members))
        if len(set(ordered)) != len(ordered):
            raise PreconditionError("members must be distinct")
        if ordered and (ordered[0] < 0 or ordered[-1] >= self.universe):
            raise PreconditionError("members must lie in [0, universe)")
        object.__setattr__(self, "members", ordered)

    @property
    def density(self) -> float:
        return len(self.members) / self.universe


def find_3ap_shifted_prime(s: IntSet, sign: int) -> Optional[ApHit]:
    """Smallest (p, then a) with {a, a+d, a+2d} in s and d = p + sign.

    sign = -1 searches differences of the form p - 1, sign = +1 the form
    p + 1. Differences are strictly positive, so the degenerate d = 0
    progression never matches. Returns None when no progression exists.
    """
    if sign not in (-1, 1):
        raise PreconditionError(f"sign must be -1 or +1, got {sign}")
    member_set = set(s.members)
    if not member_set:
        return None
    d_max = (s.universe - 1) // 2
    for d in range(1, d_max + 1):
        p = d - sign  # p - 1 = d when sign = -1; p + 1 = d when sign = +1
        if not is_prime_int(p):
            continue
        for a in s.members:
            if a + 2 * d >= s.universe:
                break
            if a + d in member_set and a + 2 * d in member_set:
                hit = ApHit(a=a, p=p, d=d)
                # soundness: re-verify all three members before returning
                assert all(x in member_set for x in (hit.a, hit.a + hit.d, hit.a + 2 * hit.d))
                return hit
    return None


def density_scan(s: IntSet, window_count: int, provenance: dict | None = None) -> ExperimentReport:
    """Window densities across [0, N); the max row approximates upper density."""
    if window_count < 1:
        raise PreconditionError(f"window_count must be >= 1, got {window_count}")
    report = ExperimentReport(
        name="density_scan",
        params={"universe": s.universe, "size": len(s.members), "windows": window_count},
        provenance=provenance or {},
    )
    members = np.asarray(s.members, dtype=np.int64)
    for i in range(window_count):
        lo = i * s.universe // window_count
        hi = (i + 1) * s.universe // window_count
        count = int(np.searchsorted(members, hi) - np.searchsorted(members, lo))
        width = max(hi - lo, 1)
        report.add_row(window=i, start=lo, stop=hi, count=count, density=count / width)
    return report
