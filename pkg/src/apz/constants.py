"""Constants built from almost-prime zeta values.

Covers sums of 1/(n^s (n-1)) restricted to k-almost primes (plain and
square-free), Hurwitz-shifted almost-prime zeta functions and their
derivatives, the logarithmic constants L_{k,l} with their rational tau
coefficients, and the almost-prime split of log 2.

Series over a shift index l use the fact that every n with Omega(n) = k is
at least 2^k, hence P_k(t+1) <= 2^-k P_k(t); the same holds for |P_k'| and
for the square-free variant.  Tail bounds below are geometric majorants
built on that ratio.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import mpmath
from mpmath import mpf

from .almost_prime import MOEBIUS, PLAIN, VARIANTS, _pk, _pk_prime, almost_prime_zeta_moebius
from .errors import DomainError, ResourceError
from .prime_zeta import _prime_zeta
from .sieve import FactorSieve, build_sieve
from .zeta_core import (
    PrecisionContext,
    _digamma_difference,
    _zeta_minus_one,
    evaluate_with_cancellation,
    resolve,
    to_mpf,
)

__all__ = [
    "zeta_partial_fraction_sum",
    "B",
    "B_geometric",
    "B_moebius",
    "B_alternating_hurwitz",
    "squared_prime_constant",
    "hurwitz_almost_prime",
    "hurwitz_almost_prime_prime",
    "tau",
    "L",
    "log2_component",
    "factorial_reciprocal_identity",
]


def _eps() -> mpf:
    return mpf(2) ** (-mpmath.mp.prec - 4)


def _pk_variant(k: int, t: mpf, work: PrecisionContext, variant: str) -> mpf:
    """P_k(t) or its square-free variant to full relative precision of ``work``."""
    if variant == PLAIN:
        return _pk(k, t, work.prime_cutoff)
    return almost_prime_zeta_moebius(k, t, work)


def _shift_sum(k: int, start: int, work: PrecisionContext, variant: str) -> mpf:
    """sum_{l>=0} P_k(start + l); all terms share one sign."""
    eps = _eps()
    ratio = mpf(2) ** (-k)
    total = mpf(0)
    t = start
    while True:
        term = _pk_variant(k, mpf(t), work, variant)
        total += term
        if abs(term) * ratio / (1 - ratio) < eps * abs(total):
            return total
        t += 1


def zeta_partial_fraction_sum(s: int, ctx: PrecisionContext | None = None) -> mpf:
    """sum_{n>=2} 1/(n^s (n-1)) = s - sum_{l=2}^s zeta(l); exactly 1 at s = 1."""
    if s < 1:
        raise DomainError(f"s must be >= 1, got {s}")
    ctx = resolve(ctx)
    if s == 1:
        with ctx.working():
            return mpf(1)

    def evaluate(work):
        with work.working():
            # s - sum zeta(l) = 1 - sum (zeta(l) - 1), computed without the integer part
            parts = [_zeta_minus_one(mpf(l)) for l in range(2, s + 1)]
            return 1 - mpmath.fsum(parts), mpf(1)

    return evaluate_with_cancellation(ctx, evaluate)


def B_geometric(k: int, s: int, ctx: PrecisionContext | None = None, variant: str = PLAIN) -> mpf:
    """sum over Omega(n) = k of (mu(n)) / (n^s (n-1)) as sum_{l>=0} P_k(s+1+l)."""
    _check_ks(k, s)
    ctx = resolve(ctx)
    with ctx.working():
        return _shift_sum(k, s + 1, ctx, variant)


def _check_ks(k: int, s: int) -> None:
    if k < 1 or s < 1:
        raise DomainError(f"k and s must be >= 1, got k={k}, s={s}")


def _B(k: int, s: int, ctx: PrecisionContext, variant: str) -> mpf:
    _check_ks(k, s)
    if s == 1:
        with ctx.working():
            return _shift_sum(k, 2, ctx, variant)

    def evaluate(work):
        with work.working():
            head = _shift_sum(k, 2, work, variant)
            parts = [_pk_variant(k, mpf(l), work, variant) for l in range(2, s + 1)]
            return head - mpmath.fsum(parts), abs(head)

    return evaluate_with_cancellation(ctx, evaluate)


def B(k: int, s: int, ctx: PrecisionContext | None = None) -> mpf:
    """B_{k,s} = sum over Omega(n) = k of 1/(n^s (n-1)).

    s = 1 sums P_k(2 + l) over l; larger s subtract P_k(2), ..., P_k(s) from
    B_{k,1}.
    """
    return _B(k, s, resolve(ctx), PLAIN)


def B_moebius(k: int, s: int, ctx: PrecisionContext | None = None) -> mpf:
    """Square-free variant: sum over Omega(n) = k of mu(n)/(n^s (n-1))."""
    return _B(k, s, resolve(ctx), MOEBIUS)


def squared_prime_constant(s: int, ctx: PrecisionContext | None = None) -> mpf:
    """sum_p 1/(p^{2s} (p^2 - 1)), checked against B_{2,s} - B^mu_{2,s}."""
    if s < 1:
        raise DomainError(f"s must be >= 1, got {s}")
    ctx = resolve(ctx)
    with ctx.working():
        eps = _eps()
        total = mpf(0)
        t = 2 * (1 + s)
        while True:
            term = _prime_zeta(mpf(t), ctx.prime_cutoff)
            total += term
            # P(t+2) <= P(t)/4
            if term / 3 < eps * total:
                break
            t += 2
    plain = B(2, s, ctx)
    signed = B_moebius(2, s, ctx)
    with ctx.working():
        other = plain - signed
        if abs(other - total) > 10 * ctx.series_tol * total:
            raise ArithmeticError(f"squared-prime routes disagree: {total} vs {other}")
        return +total


# ---------------------------------------------------------------------------
# Hurwitz projections
# ---------------------------------------------------------------------------

def _check_hurwitz(k: int, s: mpf, a: mpf) -> None:
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if not mpmath.isfinite(s) or s <= 1:
        raise DomainError(f"Hurwitz almost-prime zeta requires s > 1, got {s}")
    if not abs(1 - a) < 2 ** k:
        raise DomainError(f"|1 - a| must be below 2^k = {2 ** k} for convergence, got a = {a}")


def _hurwitz_terms(k, s, a, work, variant):
    """Value and sum of absolute terms of sum_l (s)_l/l! (1-a)^l P_k(s+l)."""
    eps = _eps()
    x = 1 - a
    ax = abs(x)
    total = mpf(0)
    scale = mpf(0)
    coef = mpf(1)  # (s)_l / l! * (1-a)^l
    l = 0
    while True:
        term = coef * _pk_variant(k, s + l, work, variant)
        total += term
        scale += abs(term)
        # coefficient ratio (s+l)/(l+1)|1-a| decreases with l
        rho = (s + l) / (l + 1) * ax * mpf(2) ** (-k)
        if term == 0 or (rho < 1 and abs(term) * rho / (1 - rho) < eps * scale):
            return total, scale
        coef *= (s + l) / (l + 1) * x
        l += 1


def hurwitz_almost_prime(k: int, s, a, variant: str = PLAIN, ctx: PrecisionContext | None = None) -> mpf:
    """sum over Omega(n) = k of (mu(n)) (a - 1 + n)^-s by the binomial expansion in 1 - a.

    a = 1 gives back P_k(s); a = 0 gives the sum of (n-1)^-s.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    ctx = resolve(ctx)
    with ctx.working():
        s = to_mpf(s)
        a = to_mpf(a)
        _check_hurwitz(k, s, a)

    def evaluate(work):
        with work.working():
            return _hurwitz_terms(k, s, a, work, variant)

    return evaluate_with_cancellation(ctx, evaluate)


def B_alternating_hurwitz(k: int, s: int, ctx: PrecisionContext | None = None) -> mpf:
    """B_{k,s} from Hurwitz values at a = 0; needs k >= 2.

    With m = n - 1, 1/(n^s (n-1)) = sum_l (-1)^l (s)_l/l! m^-(1+s+l), so
    B_{k,s} = sum_l (-1)^l (s)_l/l! P_k(1+s+l, 0).  For s = 1 every
    coefficient is 1.
    """
    _check_ks(k, s)
    if k < 2:
        raise DomainError("the alternating route diverges for k = 1")
    ctx = resolve(ctx)
    with ctx.working():
        eps = ctx.series_tol
        total = mpf(0)
        coef = mpf(1)
        l = 0
        # every term of P_k(t, 0) is m^-t with m >= 2^k - 1, so P_k(t+1, 0) <= P_k(t, 0)/(2^k - 1)
        shrink = mpf(1) / (2 ** k - 1)
        while True:
            term = coef * hurwitz_almost_prime(k, 1 + s + l, 0, ctx=ctx)
            total += term if l % 2 == 0 else -term
            # once the term ratio drops below 1 it keeps dropping, so the
            # alternating remainder is below the next term
            ratio = (s + l) / mpf(l + 1) * shrink
            if ratio < 1 and term * ratio < eps * abs(total):
                return total
            coef = coef * (s + l) / (l + 1)
            l += 1


def _hurwitz_prime_terms(k, s, a, work):
    eps = _eps()
    M = work.prime_cutoff
    x = 1 - a
    ax = abs(x)
    total = mpf(0)
    scale = mpf(0)
    coef = mpf(1)
    l = 0
    while True:
        t = s + l
        d = _digamma_difference(s, l)
        pk = _pk(k, t, M)
        dpk = _pk_prime(k, t, M)
        term = coef * (d * pk + dpk)
        bound = abs(coef) * (d * pk + abs(dpk))
        total += term
        scale += bound
        if l >= 1:
            growth = 1 + 1 / ((s + l) * d)  # bound on psi-difference ratio beyond l
            rho = (s + l) / (l + 1) * ax * mpf(2) ** (-k) * growth
            if bound == 0 or (rho < 1 and bound * rho / (1 - rho) < eps * scale):
                return total, scale
        coef *= (s + l) / (l + 1) * x
        l += 1


def hurwitz_almost_prime_prime(k: int, s, a, ctx: PrecisionContext | None = None) -> mpf:
    """d/ds of the Hurwitz almost-prime zeta: -sum over Omega(n)=k of log(a-1+n)/(a-1+n)^s.

    The digamma differences psi(s+l) - psi(s) are finite harmonic-type sums,
    so real s works as well as integer s.
    """
    ctx = resolve(ctx)
    with ctx.working():
        s = to_mpf(s)
        a = to_mpf(a)
        _check_hurwitz(k, s, a)

    def evaluate(work):
        with work.working():
            return _hurwitz_prime_terms(k, s, a, work)

    return evaluate_with_cancellation(ctx, evaluate)


# ---------------------------------------------------------------------------
# logarithmic sums
# ---------------------------------------------------------------------------

_tau_lock = threading.Lock()


@lru_cache(maxsize=None)
def _tau(i: int, l: int) -> Fraction:
    if i == 2:
        return Fraction(2 * l - 1, 2)
    return (Fraction((-1) ** i * comb(l - 1, i - 1)) - l * _tau(i - 1, l - 1)) / i


def tau(i: int, l: int) -> Fraction:
    """Coefficient of x^i in the polynomial part of x + (1-x)^l log(1-x), 2 <= i <= l."""
    if not 2 <= i <= l:
        raise ValueError(f"tau needs 2 <= i <= l, got i={i}, l={l}")
    with _tau_lock:
        return _tau(i, l)


def L(k: int, l: int, ctx: PrecisionContext | None = None) -> mpf:
    """L_{k,l}: sum over Omega(n) = k of 1/n + (1 - 1/n)^l log(1 - 1/n)."""
    if k < 1 or l < 1:
        raise DomainError(f"k and l must be >= 1, got k={k}, l={l}")
    ctx = resolve(ctx)

    def evaluate(work):
        with work.working():
            M = work.prime_cutoff
            eps = _eps()
            poly = [to_mpf(tau(i, l)) * _pk(k, mpf(i), M) for i in range(2, l + 1)]
            series = mpf(0)
            ratio = mpf(2) ** (-k)
            s = 1
            while True:
                denom = 1
                for i in range(l + 1):
                    denom *= s + i
                term = _pk(k, mpf(s + l), M) / denom
                series += term
                if term * ratio / (1 - ratio) < eps * series:
                    break
                s += 1
            tail = (-1) ** l * factorial(l) * series
            value = mpmath.fsum(poly) - tail
            scale = mpmath.fsum(abs(p) for p in poly) + abs(tail)
            return value, scale

    return evaluate_with_cancellation(ctx, evaluate)


_small_sieve: FactorSieve | None = None
_small_sieve_lock = threading.Lock()


def _sieve_at_least(n: int) -> FactorSieve:
    global _small_sieve
    with _small_sieve_lock:
        if _small_sieve is None or _small_sieve.limit < n:
            _small_sieve = build_sieve(max(n, 1024))
        return _small_sieve


def log2_component(k: int, ctx: PrecisionContext | None = None, sieve: FactorSieve | None = None) -> mpf:
    """sum over Omega(n) = k of 1/(n 2^n), summed directly.

    The remainder beyond N is below 2^-N/(N+1).  With an explicit ``sieve``
    that is too short for the requested tolerance, ResourceError is raised.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    ctx = resolve(ctx)
    with ctx.working():
        eps = ctx.series_tol
        # the smallest contributing n is 2^k, which fixes the scale
        n_max = 2 ** k + int(math.ceil(ctx.dps * math.log2(10))) + k + 16
        if sieve is None:
            sieve = _sieve_at_least(n_max)
        elif sieve.limit < n_max:
            raise ResourceError(f"sieve limit {sieve.limit} below the {n_max} terms needed")
        ns = sieve.select(k)
        ns = ns[ns <= n_max]
        total = mpmath.fsum(1 / (mpf(int(n)) * mpf(2) ** int(n)) for n in ns)
        bound = mpf(2) ** (-n_max) / (n_max + 1)
        if bound > eps * total:
            raise ResourceError("log 2 component truncation not certified")
        return total


def factorial_reciprocal_identity(k: int, ctx: PrecisionContext | None = None) -> mpf:
    """Evaluate sum_{n>=1} 1/(n (n+1) ... (n+k)) and confirm it equals 1/(k k!).

    The series is summed numerically with Richardson extrapolation, without
    using its closed form; a mismatch raises ArithmeticError.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    ctx = resolve(ctx)
    with ctx.working():
        def term(n):
            p = mpf(1)
            for i in range(k + 1):
                p *= n + i
            return 1 / p

        with mpmath.extradps(20):
            series = mpmath.nsum(term, [1, mpmath.inf], method="richardson")
        exact = mpf(1) / (k * factorial(k))
        if abs(series - exact) > ctx.series_tol * 10 * exact:
            raise ArithmeticError(f"series {series} differs from 1/(k k!) = {exact}")
        return +series
