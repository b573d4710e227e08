"""Integer classification by prime-factor counts.

A single smallest-prime-factor pass over ``[0, limit]`` yields Omega(n)
(prime factors with multiplicity), omega(n) (distinct prime factors) and the
Moebius function.  Index 0 and 1 carry Omega = omega = 0 and mu(1) = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

import numpy as np

from .errors import ResourceError

__all__ = [
    "FactorSieve",
    "build_sieve",
    "enumerate_almost_primes",
    "is_prime",
    "next_prime",
    "primes_up_to",
]

# ~11 bytes per entry are kept, plus a transient int32 work array
DEFAULT_MAX_LIMIT = 200_000_000

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    m = max(n + 1, 2)
    while not is_prime(m):
        m += 1
    return m


def primes_up_to(n: int) -> list[int]:
    """All primes <= n (plain Eratosthenes; intended for small n)."""
    if n < 2:
        return []
    flags = bytearray([1]) * (n + 1)
    flags[0] = flags[1] = 0
    for p in range(2, isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, n + 1, p)))
    return [i for i, f in enumerate(flags) if f]


@dataclass(frozen=True)
class FactorSieve:
    """Per-integer Omega, omega, mu and smallest prime factor for 0 <= n <= limit.

    Arrays are read-only once built, so one sieve can be shared freely.
    """

    limit: int
    spf: np.ndarray
    big_omega: np.ndarray
    small_omega: np.ndarray
    moebius: np.ndarray

    def select(self, k: int, squarefree_only: bool = False) -> np.ndarray:
        """Ascending int64 array of n <= limit with Omega(n) = k (and mu(n) != 0)."""
        mask = self.big_omega == k
        if squarefree_only:
            mask &= self.moebius != 0
        mask[:2] = False
        return np.flatnonzero(mask).astype(np.int64)

    def primes(self) -> np.ndarray:
        return self.select(1)

    def mertens(self, n: int | None = None) -> int:
        n = self.limit if n is None else n
        return int(self.moebius[1 : n + 1].sum(dtype=np.int64))


def build_sieve(limit: int, max_limit: int = DEFAULT_MAX_LIMIT) -> FactorSieve:
    """Sieve Omega, omega, mu and smallest prime factors up to ``limit``.

    Raises :class:`ResourceError` when ``limit`` exceeds ``max_limit``.
    """
    if limit < 2:
        raise ValueError(f"limit must be >= 2, got {limit}")
    if limit > max_limit:
        raise ResourceError(f"sieve limit {limit} exceeds budget {max_limit}")
    n = limit
    spf = np.zeros(n + 1, dtype=np.int32)
    big = np.zeros(n + 1, dtype=np.int8)
    small = np.zeros(n + 1, dtype=np.int8)
    mu = np.ones(n + 1, dtype=np.int8)
    mu[0] = 0
    rem = np.arange(n + 1, dtype=np.int32)

    small_primes = primes_up_to(isqrt(n))
    # descending so the smallest prime factor is written last
    for p in reversed(small_primes):
        spf[p::p] = p
    for p in small_primes:
        small[p::p] += 1
        np.negative(mu[p::p], out=mu[p::p])
        mu[p * p :: p * p] = 0
        pe = p
        while pe <= n:
            big[pe::pe] += 1
            rem[pe::pe] //= p
            pe *= p

    # after removing all primes <= sqrt(limit) at most one prime factor remains
    large = rem > 1
    big[large] += 1
    small[large] += 1
    np.negative(mu, out=mu, where=large)
    unset = spf == 0
    unset[:2] = False
    spf[unset] = np.flatnonzero(unset)

    for arr in (spf, big, small, mu):
        arr.setflags(write=False)
    return FactorSieve(limit=n, spf=spf, big_omega=big, small_omega=small, moebius=mu)


def enumerate_almost_primes(sieve: FactorSieve, k: int, squarefree_only: bool = False) -> list[int]:
    """The k-almost primes n <= sieve.limit in increasing order.

    With ``squarefree_only`` only products of k distinct primes are kept.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return sieve.select(k, squarefree_only).tolist()
