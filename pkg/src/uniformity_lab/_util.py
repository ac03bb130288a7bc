"""Small numeric helpers: deterministic reductions, phases, worker pools."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")


def pairwise_sum(values: np.ndarray) -> complex | float:
    """Sum a 1-D array by a fixed binary tree, independent of chunking.

    Adjacent elements are folded pairwise until one value remains; an odd
    leftover is carried to the next round. The reduction order depends only
    on the array length, so results are bit-identical no matter how the
    entries were produced (batches, workers, ...).
    """
    a = np.asarray(values)
    if a.ndim != 1:
        raise ValueError("pairwise_sum expects a 1-D array")
    if a.size == 0:
        return a.dtype.type(0)
    while a.size > 1:
        half = a.size // 2
        folded = a[0 : 2 * half : 2] + a[1 : 2 * half : 2]
        if a.size % 2:
            folded = np.concatenate([folded, a[-1:]])
        a = folded
    return a[0]


def pairwise_mean(values: np.ndarray) -> complex | float:
    a = np.asarray(values)
    return pairwise_sum(a) / a.size


def cexp(x) :
    """e(x) = exp(2 pi i x), vectorized."""
    return np.exp(2j * np.pi * np.asarray(x, dtype=np.float64))


def parallel_map(fn: Callable[[T], R], items: Sequence[T], workers: int = 1) -> list[R]:
    """Map `fn` over `items`, preserving order.

    With workers > 1 the calls run on a thread pool; the result list is
    assembled in input order either way, so downstream reductions see a
    deterministic sequence.
    """
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def unit_disc(rng: np.random.Generator, n: int) -> np.ndarray:
    """n points uniform on the closed complex unit disc."""
    radius = np.sqrt(rng.random(n))
    angle = rng.random(n)
    return radius * np.exp(2j * np.pi * angle)


_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime_int(n: int) -> bool:
    """Deterministic Miller-Rabin primality test, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = (x * x) % n
            if x == n - 1:
                break
        else:
            return False
    return True
