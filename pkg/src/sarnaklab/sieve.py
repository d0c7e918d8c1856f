"""Segmented sieve for the Liouville and Moebius functions on ``1..n``."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

SEGMENT = 1 << 18


def small_primes(limit: int) -> np.ndarray:
    """Primes ``<= limit`` by the plain sieve of Eratosthenes."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p::p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def _segment(lo: int, hi: int, primes: np.ndarray, moebius: bool) -> np.ndarray:
    # residual[k] holds the part of lo+k not yet factored by the base primes
    residual = np.arange(lo, hi, dtype=np.int64)
    parity = np.zeros(hi - lo, dtype=np.int8)
    squarefree = np.ones(hi - lo, dtype=bool) if moebius else None
    for p in primes:
        p = int(p)
        if p * p >= hi:
            break
        pk = p
        while pk < hi:
            start = (-lo) % pk
            if start >= hi - lo:
                break
            parity[start::pk] ^= 1
            residual[start::pk] //= p
            if moebius and pk > p:
                squarefree[start::pk] = False
            pk *= p
    # at most one prime factor above sqrt(hi) remains
    parity ^= (residual > 1).astype(np.int8)
    if not moebius:
        return parity.astype(np.uint8)
    # codes: 0 -> +1, 1 -> -1, 2 -> 0
    out = parity.astype(np.uint8)
    out[~squarefree] = 2
    return out


def liouville_codes(n: int, moebius: bool = False, threads: int = 1,
                    segment: int = SEGMENT) -> np.ndarray:
    """Codes for ``k = 1..n``: Liouville gives 0 for +1 and 1 for -1.

    With ``moebius=True`` the code 2 marks non-squarefree ``k`` (value 0).
    Segments are independent, so the result does not depend on ``threads``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    primes = small_primes(math.isqrt(n) + 1)
    bounds = [(lo, min(lo + segment, n + 1)) for lo in range(1, n + 1, segment)]

    def work(b):
        return _segment(b[0], b[1], primes, moebius)

    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, bounds))
    else:
        parts = [work(b) for b in bounds]
    return np.concatenate(parts)

