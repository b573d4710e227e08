"""Prime zeta function P(s), its derivative, moments and log-weighted prime sums.

P(s) is evaluated from the Moebius inversion of the Euler product with the
primes up to a cutoff M split off:

    P(s) = sum_{p<=M} p^-s + sum_{n>=1} mu(n)/n * log P(M, s n),
    P(M, t) = zeta(t) * prod_{p<=M} (1 - p^-t).

log P(M, t) equals -sum_{p>M} log(1 - p^-t), so it is bounded by the sum of
n^-t over n >= q (q the first prime above M).  That bound decides where the
Moebius series stops.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Callable, Sequence

import mpmath
from mpmath import mpf

from .errors import DivergenceError, DomainError
from .sieve import is_prime, next_prime, primes_up_to
from .zeta_core import (
    PrecisionContext,
    _zeta_minus_one,
    _zeta_prime,
    resolve,
    to_mpf,
)

__all__ = [
    "PrimeZetaCache",
    "prime_zeta",
    "prime_zeta_prime",
    "partial_product",
    "prime_zeta_moment",
    "prime_zeta_moment_total",
    "log_weighted_prime_sum",
    "log_weighted_rational_sum",
    "expand_rational_to_basis",
    "moebius",
]


class PrimeZetaCache:
    """Memo of P(t) and P'(t) values keyed by (kind, t, binary precision, cutoff).

    Entries are never shared across precisions.  Inserts are idempotent: if
    two threads race, the first stored value wins and both see it.
    """

    def __init__(self) -> None:
        self._data: dict[tuple, mpf] = {}
        self._lock = threading.Lock()

    def get_or_compute(self, key: tuple, compute: Callable[[], mpf]) -> mpf:
        with self._lock:
            hit = self._data.get(key)
        if hit is not None:
            return hit
        value = compute()
        with self._lock:
            return self._data.setdefault(key, value)

    def __len__(self) -> int:
        return len(self._data)

    def clear(self) -> None:
        with self._lock:
            self._data.clear()


CACHE = PrimeZetaCache()


def moebius(n: int) -> int:
    """mu(n) by trial division (small n only)."""
    if n < 1:
        raise ValueError("n must be positive")
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


_primes_cache: dict[int, tuple[int, ...]] = {}


def _primes(M: int) -> tuple[int, ...]:
    ps = _primes_cache.get(M)
    if ps is None:
        ps = _primes_cache[M] = tuple(primes_up_to(M))
    return ps


def _check_s(s: mpf, what: str = "prime zeta") -> None:
    if not mpmath.isfinite(s) or s <= 1:
        raise DomainError(f"{what} requires real s > 1, got {s}")


def _remainder_bound(t: mpf, q: int) -> mpf:
    """Upper bound of sum_{p>=q} -log(1 - p^-t)."""
    qt = mpmath.power(q, -t)
    return mpf("1.01") * qt * (1 + q / (t - 1))


def _remainder_log_bound(t: mpf, q: int) -> mpf:
    """Upper bound of sum_{p>=q} log p / (p^t - 1)."""
    qt = mpmath.power(q, -t)
    lq = mpmath.log(q)
    return mpf("1.01") * qt * (lq + q * (lq / (t - 1) + 1 / (t - 1) ** 2))


def _log_partial_product(t: mpf, primes: Sequence[int]) -> mpf:
    # log1p keeps the small remainder free of cancellation against 1
    total = mpmath.log1p(_zeta_minus_one(t))
    for p in primes:
        total += mpmath.log1p(-mpmath.power(p, -t))
    return total


def _log_partial_product_prime(t: mpf, primes: Sequence[int]) -> mpf:
    """d/dt log P(M, t) = zeta'(t)/zeta(t) + sum_{p<=M} log p / (p^t - 1)."""
    total = _zeta_prime(t) / (1 + _zeta_minus_one(t))
    for p in primes:
        total += mpmath.log(p) / mpmath.expm1(t * mpmath.log(p))
    return total


def _prime_zeta(s: mpf, M: int) -> mpf:
    key = ("P", s, mpmath.mp.prec, M)
    return CACHE.get_or_compute(key, lambda: _prime_zeta_uncached(s, M))


def _prime_zeta_uncached(s: mpf, M: int) -> mpf:
    primes = _primes(M)
    q = next_prime(M)
    direct = mpmath.fsum(mpmath.power(p, -s) for p in primes)
    target = mpf(2) ** (-mpmath.mp.prec - 4) * direct
    correction = mpf(0)
    n = 1
    while True:
        t = s * n
        # bound is decreasing in n, so the first small one ends the series
        if _remainder_bound(t, q) / n < target:
            break
        mu = moebius(n)
        if mu:
            correction += mu * _log_partial_product(t, primes) / n
        n += 1
    return direct + correction


def _prime_zeta_prime(s: mpf, M: int) -> mpf:
    key = ("dP", s, mpmath.mp.prec, M)
    return CACHE.get_or_compute(key, lambda: _prime_zeta_prime_uncached(s, M))


def _prime_zeta_prime_uncached(s: mpf, M: int) -> mpf:
    primes = _primes(M)
    q = next_prime(M)
    direct = -mpmath.fsum(mpmath.log(p) * mpmath.power(p, -s) for p in primes)
    target = mpf(2) ** (-mpmath.mp.prec - 4) * abs(direct)
    correction = mpf(0)
    n = 1
    while True:
        t = s * n
        if _remainder_log_bound(t, q) < target:
            break
        mu = moebius(n)
        if mu:
            correction += mu * _log_partial_product_prime(t, primes)
        n += 1
    return direct + correction


def prime_zeta(s, ctx: PrecisionContext | None = None) -> mpf:
    """P(s) = sum over primes of p^-s for real s > 1."""
    ctx = resolve(ctx)
    with ctx.working():
        s = to_mpf(s)
        _check_s(s)
        return _prime_zeta(s, ctx.prime_cutoff)


def prime_zeta_prime(s, ctx: PrecisionContext | None = None) -> mpf:
    """P'(s) = -sum over primes of log(p) p^-s for real s > 1."""
    ctx = resolve(ctx)
    with ctx.working():
        s = to_mpf(s)
        _check_s(s)
        return _prime_zeta_prime(s, ctx.prime_cutoff)


def partial_product(M: int, s, ctx: PrecisionContext | None = None) -> mpf:
    """zeta(s) * prod_{p<=M} (1 - p^-s): the Euler product with small primes removed."""
    if not is_prime(M):
        raise DomainError(f"M must be prime, got {M}")
    ctx = resolve(ctx)
    with ctx.working():
        s = to_mpf(s)
        _check_s(s, "partial product")
        return mpmath.exp(_log_partial_product(s, _primes(M)))


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------

def _geometric_prime_sum(weight: Callable[[int], mpf], eps: mpf, M: int) -> mpf:
    """sum_{s>=2} weight(s) P(s) for weights that do not increase with s.

    P(s+1) <= P(s)/2, so the tail after a term is at most that term.
    """
    total = mpf(0)
    s = 2
    while True:
        term = weight(s) * _prime_zeta(mpf(s), M)
        total += term
        if abs(term) < eps * abs(total):
            return total
        s += 1


def prime_zeta_moment(u: int, ctx: PrecisionContext | None = None) -> mpf:
    """sum_{s>=2} P(s) / s^u."""
    if u < 1:
        raise DomainError(f"u must be >= 1, got {u}")
    ctx = resolve(ctx)
    with ctx.working():
        eps = ctx.series_tol
        return _geometric_prime_sum(lambda s: mpf(s) ** (-u), eps, ctx.prime_cutoff)


def prime_zeta_moment_total(ctx: PrecisionContext | None = None) -> mpf:
    """Total of all moments: sum_{s>=2} P(s)/(s-1) = -sum_p log(1 - 1/p)/p."""
    ctx = resolve(ctx)
    with ctx.working():
        eps = ctx.series_tol
        return _geometric_prime_sum(lambda s: 1 / mpf(s - 1), eps, ctx.prime_cutoff)


# ---------------------------------------------------------------------------
# log-weighted prime sums
# ---------------------------------------------------------------------------

def _neg_log_derivative(j: int, M: int) -> mpf:
    """-zeta'(j)/zeta(j) = sum_p log p / (p^j - 1)."""
    key = ("L", j, mpmath.mp.prec, M)

    def compute() -> mpf:
        t = mpf(j)
        primes = _primes(M)
        small = mpmath.fsum(mpmath.log(p) / mpmath.expm1(t * mpmath.log(p)) for p in primes)
        if _remainder_log_bound(t, next_prime(M)) < mpf(2) ** (-mpmath.mp.prec - 4) * small:
            return small
        return -_zeta_prime(t) / (1 + _zeta_minus_one(t))

    return CACHE.get_or_compute(key, compute)


def log_weighted_prime_sum(coeffs: Sequence, ctx: PrecisionContext | None = None) -> mpf:
    """sum_{j>=2} c_j * (-zeta'(j)/zeta(j)) for the coefficient list c_2, c_3, ...

    Equivalent to sum_p log p * sum_j c_j/(p^j - 1).  Summation stops early
    once the listed remainder is provably below the series tolerance; a
    coefficient list growing like 2^j or faster is rejected.
    """
    ctx = resolve(ctx)
    cs = [Fraction(c) for c in coeffs]
    if not cs:
        return mpf(0)
    tail_growth = [abs(c) ** (1.0 / j) for j, c in enumerate(cs, start=2) if c]
    tail_growth = tail_growth[len(tail_growth) // 2 :]
    if len(cs) > 4 and tail_growth and min(tail_growth) >= 2:
        raise DivergenceError("coefficients grow like 2^j or faster; the sum diverges")
    with ctx.working():
        eps = ctx.series_tol
        M = ctx.prime_cutoff
        # suffix[i] = sum_{i' >= i} |c_i'| 2^{-(i'-i)}, used with -zeta'/zeta(j+1) <= half of its value at j
        suffix = [mpf(0)] * (len(cs) + 1)
        for i in range(len(cs) - 1, -1, -1):
            suffix[i] = abs(to_mpf(cs[i])) + suffix[i + 1] / 2
        total = mpf(0)
        for i, c in enumerate(cs):
            lam = _neg_log_derivative(i + 2, M)
            total += to_mpf(c) * lam
            if i + 1 < len(cs) and lam * suffix[i + 1] / 2 < eps * abs(total):
                break
        return total


def _poly_ascending(coeffs: Sequence) -> list[Fraction]:
    cs = [Fraction(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    if not cs:
        raise ValueError("polynomial must be nonzero")
    return cs


def expand_rational_to_basis(numerator: Sequence, denominator: Sequence, order: int) -> list[Fraction]:
    """Coefficients c_2..c_order with R(p) = sum_j c_j/(p^j - 1) + O(p^-(order+1)).

    Polynomials are given by ascending coefficient lists, ``[1, 2]`` being
    1 + 2p.  R must vanish like p^-2 at infinity.
    """
    num = _poly_ascending(numerator)
    den = _poly_ascending(denominator)
    shift = (len(den) - 1) - (len(num) - 1)
    if shift < 2:
        raise DomainError("R(p) must be O(p^-2): it has a constant or 1/p term")
    if order < 2:
        return []
    # in u = 1/p: R = u^shift * n(u)/d(u) with n, d the reversed polynomials
    n_u = num[::-1]
    d_u = den[::-1]
    length = order - shift + 1
    f: list[Fraction] = []
    for m in range(length):
        acc = n_u[m] if m < len(n_u) else Fraction(0)
        for i in range(1, min(m, len(d_u) - 1) + 1):
            acc -= d_u[i] * f[m - i]
        f.append(acc / d_u[0])
    laurent = [Fraction(0)] * (order + 1)  # laurent[m] multiplies u^m
    for m, v in enumerate(f):
        laurent[m + shift] = v
    c = [Fraction(0)] * (order + 1)
    for m in range(2, order + 1):
        acc = laurent[m]
        for j in range(2, m // 2 + 1):
            if m % j == 0:
                acc -= c[j]
        c[m] = acc
    return c[2:]


def _poly_eval(coeffs: Sequence[Fraction], x: int) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def log_weighted_rational_sum(numerator: Sequence, denominator: Sequence,
                              ctx: PrecisionContext | None = None) -> mpf:
    """sum over primes of R(p) log p for a rational R = O(p^-2).

    Primes up to the cutoff are summed directly; the rest goes through the
    basis expansion in 1/(p^j - 1), whose prime sums over p > M shrink like
    q^-j, so only a few dozen coefficients are needed.
    """
    ctx = resolve(ctx)
    num = _poly_ascending(numerator)
    den = _poly_ascending(denominator)
    M = ctx.prime_cutoff
    q = next_prime(M)
    roots = mpmath.polyroots([float(c) for c in reversed(den)], maxsteps=200, extraprec=60) \
        if len(den) > 1 else []
    growth = max([abs(complex(r)) for r in roots] + [1.0])
    if growth >= q:
        raise DivergenceError("denominator has roots beyond the prime cutoff")
    with ctx.working():
        order = int(math.ceil((ctx.dps * math.log(10) + 10) / math.log(q / max(growth, 1.0) / 1.5))) + 2
        cs = expand_rational_to_basis(num, den, order)
        primes = _primes(M)
        total = mpf(0)
        for p in primes:
            d = _poly_eval(den, p)
            if d == 0:
                raise DomainError(f"R has a pole at the prime {p}")
            r = _poly_eval(num, p) / d
            total += to_mpf(r) * mpmath.log(p)
        for j, c in enumerate(cs, start=2):
            if c == 0:
                continue
            t = mpf(j)
            rest = _neg_log_derivative(j, M) - mpmath.fsum(
                mpmath.log(p) / mpmath.expm1(t * mpmath.log(p)) for p in primes)
            total += to_mpf(c) * rest
        return total
