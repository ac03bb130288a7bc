"""Discrete Fourier transforms for arbitrary length, batched over rows.

Power-of-two lengths use an iterative radix-2 transform; every other
length (primes included, which the mod-N work needs) is reduced to a
power-of-two convolution with the Bluestein chirp. Transforms act along
the last axis, so a (B, N) array is B independent length-N transforms.

Forward convention: X[k] = sum_n x[n] e(-nk/N), unnormalized.
"""

from __future__ import annotations

import threading

import numpy as np

_lock = threading.Lock()
_rev_cache: dict[int, np.ndarray] = {}
_twiddle_cache: dict[int, np.ndarray] = {}
_chirp_cache: dict[int, tuple[np.ndarray, np.ndarray, int]] = {}


def _bit_reversal(m: int) -> np.ndarray:
    rev = _rev_cache.get(m)
    if rev is None:
        bits = m.bit_length() - 1
        rev = np.zeros(m, dtype=np.intp)
        for b in range(bits):
            rev |= ((np.arange(m) >> b) & 1) << (bits - 1 - b)
        with _lock:
            _rev_cache[m] = rev
    return rev


def _twiddles(size: int) -> np.ndarray:
    tw = _twiddle_cache.get(size)
    if tw is None:
        k = np.arange(size // 2)
        tw = np.exp(-2j * np.pi * k / size)
        with _lock:
            _twiddle_cache[size] = tw
    return tw


def _fft_pow2(x: np.ndarray) -> np.ndarray:
    """Iterative radix-2 transform along the last axis; length must be 2^k."""
    m = x.shape[-1]
    if m & (m - 1):
        raise ValueError(f"length {m} is not a power of two")
    out = np.ascontiguousarray(x, dtype=np.complex128)[..., _bit_reversal(m)]
    size = 2
    while size <= m:
        half = size // 2
        tw = _twiddles(size)
        view = out.reshape(out.shape[:-1] + (m // size, size))
        even = view[..., :half]
        odd = view[..., half:] * tw
        view[..., half:] = even - odd
        view[..., :half] = even + odd
        size *= 2
    return out


def _chirp_tables(n: int) -> tuple[np.ndarray, np.ndarray, int]:
    entry = _chirp_cache.get(n)
    if entry is None:
        idx = np.arange(n, dtype=np.int64)
        # reduce n^2 mod 2n before the complex exponential to keep full precision
        sq = (idx * idx) % (2 * n)
        chirp = np.exp(-1j * np.pi * sq / n)
        m = 1 << (2 * n - 1).bit_length()
        b = np.zeros(m, dtype=np.complex128)
        b[:n] = chirp.conj()
        if n > 1:
            b[m - n + 1 :] = chirp.conj()[1:][::-1]
        bhat = _fft_pow2(b)
        entry = (chirp, bhat, m)
        with _lock:
            _chirp_cache[n] = entry
    return entry


def _bluestein(x: np.ndarray) -> np.ndarray:
    n = x.shape[-1]
    chirp, bhat, m = _chirp_tables(n)
    a = np.zeros(x.shape[:-1] + (m,), dtype=np.complex128)
    a[..., :n] = x * chirp
    conv = _fft_pow2(a) * bhat
    conv = _fft_pow2(conv.conj()).conj() / m
    return conv[..., :n] * chirp


def dft(x: np.ndarray) -> np.ndarray:
    """Forward transform along the last axis, any length >= 1."""
    x = np.asarray(x, dtype=np.complex128)
    n = x.shape[-1]
    if n < 1:
        raise ValueError("empty transform")
    if n & (n - 1) == 0:
        return _fft_pow2(x)
    return _bluestein(x)


def idft(x: np.ndarray) -> np.ndarray:
    """Inverse of :func:`dft` (includes the 1/N factor)."""
    x = np.asarray(x, dtype=np.complex128)
    return dft(x.conj()).conj() / x.shape[-1]
