"""Prime utilities: deterministic word-size primality and a segmented sieve."""

from __future__ import annotations

import dataclasses
import functools
import math

import numpy as np

# Deterministic Miller-Rabin base set, valid for all n < 3.317e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def nth_prime_below(n: int) -> int:
    """Largest prime strictly below n."""
    k = n - 1
    while not is_prime(k):
        k -= 1
    return k


def _small_primes(limit: int) -> list[int]:
    """All primes <= limit by a plain sieve."""
    if limit < 2:
        return []
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).tolist()


@dataclasses.dataclass(frozen=True)
class PrimeRange:
    """Complete ascending list of the primes in (x, 2x]."""

    x: int
    primes: tuple[int, ...]

    def __post_init__(self):
        if self.x < 5:
            raise ValueError("x must be >= 5")

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes)


@functools.lru_cache(maxsize=8)
def sieve_range(x: int, segment: int = 1 << 18) -> PrimeRange:
    """Sieve the interval (x, 2x] segment by segment; memory O(sqrt(x) + segment)."""
    if x < 5:
        raise ValueError("x must be >= 5")
    base = _small_primes(math.isqrt(2 * x) + 1)
    out: list[int] = []
    lo = x + 1
    hi_all = 2 * x
    # For x >= 5 every base prime is <= sqrt(2x) < x, so segment survivors are prime.
    while lo <= hi_all:
        hi = min(lo + segment - 1, hi_all)
        mask = np.ones(hi - lo + 1, dtype=bool)
        for p in base:
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start > hi:
                continue
            mask[start - lo :: p] = False
        out.extend(int(off) + lo for off in np.flatnonzero(mask))
        lo = hi + 1
    return PrimeRange(x, tuple(out))
