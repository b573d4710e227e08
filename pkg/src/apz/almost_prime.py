"""Almost-prime zeta functions P_k(s), their derivatives and the square-free variant.

P_k(s) sums n^-s over n with exactly k prime factors counted with
multiplicity.  It is the cycle index of the symmetric group S_k with P(m s)
substituted for the cycle-length-m indeterminate, so every value reduces to
prime zeta values.  The square-free variant substitutes -P(m s) instead,
which introduces alternating signs and hence cancellation; its public entry
point raises the working precision until that cancellation is covered.
"""

from __future__ import annotations

import threading
from math import factorial

import mpmath
from mpmath import mpf

from .errors import DomainError
from .partitions import partitions_of
from .prime_zeta import _prime_zeta, _prime_zeta_prime
from .zeta_core import (
    PrecisionContext,
    _zeta_minus_one,
    evaluate_with_cancellation,
    resolve,
    to_mpf,
)

__all__ = [
    "almost_prime_zeta",
    "almost_prime_zeta_via_recurrence",
    "almost_prime_zeta_via_partitions",
    "almost_prime_zeta_prime",
    "almost_prime_zeta_moebius",
    "odd_index_sum",
]

PLAIN = "plain"
MOEBIUS = "moebius"
VARIANTS = (PLAIN, MOEBIUS)

_seq_cache: dict[tuple, list[mpf]] = {}
_seq_lock = threading.Lock()


def _check(k: int, s: mpf) -> None:
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if not mpmath.isfinite(s) or s <= 1:
        raise DomainError(f"almost-prime zeta requires real s > 1, got {s}")


def _check_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")


def _sequence(k: int, s: mpf, M: int, variant: str = PLAIN) -> list[mpf]:
    """[P_0(s), ..., P_k(s)] (or the signed variant) by the cycle-index recurrence.

    Runs at the current precision; cached and extended per (s, precision, M).
    """
    key = (variant, s, mpmath.mp.prec, M)
    with _seq_lock:
        seq = _seq_cache.get(key)
        if seq is not None and len(seq) > k:
            return seq
    sign = -1 if variant == MOEBIUS else 1
    xs = [None] + [sign * _prime_zeta(s * j, M) for j in range(1, k + 1)]
    seq = [mpf(1)]
    for n in range(1, k + 1):
        seq.append(mpmath.fsum(xs[j] * seq[n - j] for j in range(1, n + 1)) / n)
    with _seq_lock:
        old = _seq_cache.get(key)
        if old is None or len(old) < len(seq):
            _seq_cache[key] = seq
    return seq


def _derivative_sequence(k: int, s: mpf, M: int) -> list[mpf]:
    """[P_0'(s), ..., P_k'(s)] from the differentiated recurrence."""
    key = ("d", s, mpmath.mp.prec, M)
    with _seq_lock:
        seq = _seq_cache.get(key)
        if seq is not None and len(seq) > k:
            return seq
    values = _sequence(k, s, M)
    xs = [None] + [_prime_zeta(s * j, M) for j in range(1, k + 1)]
    dxs = [None] + [j * _prime_zeta_prime(s * j, M) for j in range(1, k + 1)]
    seq = [mpf(0)]
    for n in range(1, k + 1):
        acc = mpmath.fsum(dxs[j] * values[n - j] + xs[j] * seq[n - j] for j in range(1, n + 1))
        seq.append(acc / n)
    with _seq_lock:
        old = _seq_cache.get(key)
        if old is None or len(old) < len(seq):
            _seq_cache[key] = seq
    return seq


def _pk(k: int, s: mpf, M: int) -> mpf:
    return _sequence(k, s, M)[k]


def _pk_prime(k: int, s: mpf, M: int) -> mpf:
    return _derivative_sequence(k, s, M)[k]


def _partition_sum(k: int, s: mpf, M: int, signed: bool) -> mpf:
    xs = [None] + [_prime_zeta(s * j, M) for j in range(1, k + 1)]
    terms = []
    for part in partitions_of(k):
        term = mpf(part.weight)
        for m, c in enumerate(part.mults, start=1):
            if c:
                term *= xs[m] ** c
        if signed and part.parts % 2:
            term = -term
        terms.append(term)
    return mpmath.fsum(terms) / factorial(k)


def almost_prime_zeta_via_recurrence(k: int, s, ctx: PrecisionContext | None = None) -> mpf:
    """P_k(s) = (1/k) sum_{j=1}^k P(j s) P_{k-j}(s), P_0 = 1."""
    ctx = resolve(ctx)
    with ctx.working():
        s = to_mpf(s)
        _check(k, s)
        return _pk(k, s, ctx.prime_cutoff)


def almost_prime_zeta_via_partitions(k: int, s, ctx: PrecisionContext | None = None) -> mpf:
    """P_k(s) as the weighted sum over partitions of k of products of P(m s)."""
    ctx = resolve(ctx)
    with ctx.working():
        s = to_mpf(s)
        _check(k, s)
        return _partition_sum(k, s, ctx.prime_cutoff, signed=False)


def almost_prime_zeta(k: int, s, ctx: PrecisionContext | None = None, method: str = "recurrence") -> mpf:
    """Sum of n^-s over the k-almost primes n, for real s > 1.

    ``method`` selects the cycle-index recurrence (default) or the explicit
    partition sum; both give the same value.
    """
    if method == "recurrence":
        return almost_prime_zeta_via_recurrence(k, s, ctx)
    if method == "partitions":
        return almost_prime_zeta_via_partitions(k, s, ctx)
    raise ValueError(f"unknown method {method!r}")


def almost_prime_zeta_prime(k: int, s, ctx: PrecisionContext | None = None, method: str = "recurrence") -> mpf:
    """P_k'(s) = -sum over k-almost primes of log(n) n^-s.

    The partition form multiplies each term by sum_m m k_m P'(m s)/P(m s);
    the recurrence form differentiates P_k = (1/k) sum_j P(j s) P_{k-j}.
    """
    ctx = resolve(ctx)
    with ctx.working():
        s = to_mpf(s)
        _check(k, s)
        M = ctx.prime_cutoff
        if method == "recurrence":
            return _pk_prime(k, s, M)
        if method != "partitions":
            raise ValueError(f"unknown method {method!r}")
        xs = [None] + [_prime_zeta(s * j, M) for j in range(1, k + 1)]
        logd = [None] + [_prime_zeta_prime(s * j, M) / xs[j] for j in range(1, k + 1)]
        terms = []
        for part in partitions_of(k):
            term = mpf(part.weight)
            factor = mpf(0)
            for m, c in enumerate(part.mults, start=1):
                if c:
                    term *= xs[m] ** c
                    factor += m * c * logd[m]
            terms.append(term * factor)
        return mpmath.fsum(terms) / factorial(k)


def _moebius_with_scale(k: int, s: mpf, work: PrecisionContext, method: str) -> tuple[mpf, mpf]:
    with work.working():
        M = work.prime_cutoff
        if method == "partitions":
            value = _partition_sum(k, s, M, signed=True)
        else:
            value = _sequence(k, s, M, MOEBIUS)[k]
        # sum of absolute partition terms is exactly the plain P_k(s)
        return value, _pk(k, s, M)


def almost_prime_zeta_moebius(k: int, s, ctx: PrecisionContext | None = None, method: str = "recurrence") -> mpf:
    """sum of mu(n) n^-s over n with Omega(n) = k; sign (-1)^k, P_1^mu = -P."""
    ctx = resolve(ctx)
    with ctx.working():
        s = to_mpf(s)
        _check(k, s)
    if method not in ("recurrence", "partitions"):
        raise ValueError(f"unknown method {method!r}")
    return evaluate_with_cancellation(ctx, lambda work: _moebius_with_scale(k, s, work, method))


def odd_index_sum(two_s, variant: str = PLAIN, ctx: PrecisionContext | None = None) -> mpf:
    """Closed form of sum_{k>=1} P_{2k-1}(2s) (or its square-free analogue).

    The argument is the doubled exponent 2s, which must exceed 1.
    """
    _check_variant(variant)
    ctx = resolve(ctx)
    with ctx.working():
        t = to_mpf(two_s)
        if not mpmath.isfinite(t) or t <= 1:
            raise DomainError(f"argument must exceed 1, got {t}")
        z2 = 1 + _zeta_minus_one(t)
        z4 = 1 + _zeta_minus_one(2 * t)
        plain = (z2 * z2 - z4) / (2 * z2)
        return plain if variant == PLAIN else -plain / z4
