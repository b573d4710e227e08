"""Arbitrary-precision Riemann zeta, its derivative, digamma and Pochhammer symbols.

All numeric work runs on :mod:`mpmath` floats.  Public functions take a
:class:`PrecisionContext`, switch mpmath to the context's working precision
for the duration of the call and return an ``mpf`` carrying that precision.
Helpers prefixed with an underscore assume the caller has already set the
working precision.
"""

from __future__ import annotations

import math
import threading
from contextlib import contextmanager
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterator

import mpmath
from mpmath import mpf

from .errors import DomainError
from .sieve import is_prime, next_prime

__all__ = [
    "PrecisionContext",
    "BernoulliTable",
    "bernoulli",
    "zeta",
    "zeta_minus_one",
    "zeta_prime",
    "digamma",
    "pochhammer",
    "euler_gamma",
]


def default_cutoff(digits: int) -> int:
    """Smallest prime >= max(100, digits); grows with the requested precision."""
    return next_prime(max(100, digits) - 1)


@dataclass(frozen=True)
class PrecisionContext:
    """Target precision and truncation parameters shared by every evaluation.

    ``digits`` is the number of significant decimal digits a caller wants,
    ``guard`` the extra working digits carried to absorb rounding and
    truncation.  ``cutoff`` is the largest prime summed directly in the
    accelerated prime zeta series; ``None`` picks :func:`default_cutoff`.
    """

    digits: int = 64
    guard: int = 15
    cutoff: int | None = None

    def __post_init__(self) -> None:
        if self.digits < 10:
            raise ValueError(f"digits must be >= 10, got {self.digits}")
        if self.guard < 5:
            raise ValueError(f"guard must be >= 5, got {self.guard}")
        if self.cutoff is not None and (self.cutoff < 7 or not is_prime(self.cutoff)):
            raise ValueError(f"cutoff must be a prime >= 7, got {self.cutoff}")

    @property
    def dps(self) -> int:
        return self.digits + self.guard

    @property
    def prime_cutoff(self) -> int:
        return self.cutoff if self.cutoff is not None else default_cutoff(self.digits)

    @property
    def series_tol(self) -> mpf:
        with mpmath.workdps(self.dps):
            return mpf(10) ** (-self.dps)

    def escalated(self, extra: int) -> PrecisionContext:
        """Same target digits, ``extra`` more working digits.

        The cutoff prime is pinned so escalation never changes which primes
        are summed directly.
        """
        return replace(self, guard=self.guard + extra, cutoff=self.prime_cutoff)

    @contextmanager
    def working(self) -> Iterator[None]:
        with mpmath.workdps(self.dps):
            yield


DEFAULT_CONTEXT = PrecisionContext()


def resolve(ctx: PrecisionContext | None) -> PrecisionContext:
    return DEFAULT_CONTEXT if ctx is None else ctx


def to_mpf(x) -> mpf:
    """Convert ints, floats, decimal strings, Fractions or mpf to mpf at current precision."""
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(x)


def is_integral(x) -> bool:
    return mpmath.isint(to_mpf(x))


# ---------------------------------------------------------------------------
# Bernoulli numbers
# ---------------------------------------------------------------------------

class BernoulliTable:
    """Exact even-index Bernoulli numbers B_0, B_2, B_4, ... extended on demand.

    Values come from the integer tangent-number recurrence, so no rational
    arithmetic happens until the final division.
    """

    def __init__(self) -> None:
        self._even: list[Fraction] = [Fraction(1)]
        self._scaled: dict[int, list[mpf]] = {}
        self._lock = threading.Lock()

    def _extend(self, count: int) -> None:
        # tangent numbers T_1..T_count
        t = [0] * (count + 1)
        t[1] = 1
        for k in range(2, count + 1):
            t[k] = (k - 1) * t[k - 1]
        for k in range(2, count + 1):
            for j in range(k, count + 1):
                t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j]
        even = [Fraction(1)]
        for k in range(1, count + 1):
            four = 4 ** k
            sign = 1 if k % 2 else -1
            even.append(Fraction(sign * 2 * k * t[k], four * (four - 1)))
        self._even = even
        self._scaled.clear()

    def even(self, k: int) -> Fraction:
        """B_{2k} as an exact fraction."""
        if k < 0:
            raise ValueError("index must be non-negative")
        with self._lock:
            if k >= len(self._even):
                self._extend(max(k, 2 * (len(self._even) - 1), 16))
            return self._even[k]

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("index must be non-negative")
        if n == 1:
            return Fraction(-1, 2)
        if n % 2:
            return Fraction(0)
        return self.even(n // 2)

    def scaled(self, count: int) -> list[mpf]:
        """[B_{2j}/(2j)! for j = 1..count] at the current mpmath precision."""
        self.even(count)
        prec = mpmath.mp.prec
        with self._lock:
            cached = self._scaled.get(prec)
            if cached is not None and len(cached) >= count:
                return cached
            values = []
            fact = 1
            for j in range(1, count + 1):
                fact *= (2 * j - 1) * (2 * j)
                b = self._even[j]
                values.append(mpf(b.numerator) / (b.denominator * fact))
            self._scaled[prec] = values
            return values


_BERNOULLI = BernoulliTable()


def bernoulli(n: int) -> Fraction:
    """Exact Bernoulli number B_n (B_1 = -1/2 convention)."""
    return _BERNOULLI[n]


# ---------------------------------------------------------------------------
# Euler-Maclaurin tail sums
# ---------------------------------------------------------------------------

_tail_cache: dict[tuple, tuple[mpf, mpf | None]] = {}
_tail_lock = threading.Lock()


def _em_tail(s: mpf, start: int, deriv: bool) -> tuple[mpf, mpf | None]:
    """Return (sum_{n>=start} n^-s, -sum_{n>=start} log(n) n^-s or None).

    Direct summation up to N-1, then the Euler-Maclaurin remainder at N with
    as many Bernoulli corrections as needed for full relative precision.  If
    the correction terms start growing before they are negligible, N doubles.
    """
    key = (s, start, deriv, mpmath.mp.prec)
    with _tail_lock:
        hit = _tail_cache.get(key)
    if hit is not None:
        return hit

    eps = mpf(2) ** (-mpmath.mp.prec - 4)
    dps = mpmath.mp.dps
    n_direct = start + max(4, int(0.4 * dps))
    while True:
        total = mpf(0)
        dtotal = mpf(0)
        for n in range(start, n_direct):
            term = mpmath.power(n, -s)
            total += term
            if deriv:
                dtotal -= mpmath.log(n) * term
        N = mpf(n_direct)
        logN = mpmath.log(N)
        n_pow = mpmath.power(N, -s)
        # integral and endpoint pieces
        total += N * n_pow / (s - 1) + n_pow / 2
        if deriv:
            dtotal -= N * n_pow * (logN / (s - 1) + 1 / (s - 1) ** 2) + logN * n_pow / 2
        scale = abs(total)
        # corrections B_{2j}/(2j)! (s)_{2j-1} N^{-s-2j+1}
        poch = s                      # (s)_{2j-1}
        harm = 1 / s                  # d/ds log (s)_{2j-1}
        npow = n_pow / N              # N^{-s-2j+1}
        inv_n2 = 1 / (N * N)
        coeffs = _BERNOULLI.scaled(max(8, dps))
        prev = None
        converged = False
        for j in range(1, len(coeffs) + 1):
            term = coeffs[j - 1] * poch * npow
            mag = abs(term)
            if mag <= eps * scale:
                converged = True
                break
            if prev is not None and mag > prev:
                break
            total += term
            if deriv:
                dtotal += term * (harm - logN)
            prev = mag
            # advance (s)_{2j-1} -> (s)_{2j+1}
            a, b = s + 2 * j - 1, s + 2 * j
            poch *= a * b
            harm += 1 / a + 1 / b
            npow *= inv_n2
        if converged:
            break
        n_direct = 2 * n_direct
    result = (total, dtotal if deriv else None)
    with _tail_lock:
        _tail_cache[key] = result
    return result


def _check_s(s: mpf) -> None:
    if not mpmath.isfinite(s) or s <= 1:
        raise DomainError(f"zeta requires real s > 1, got {s}")


def _zeta_minus_one(s: mpf) -> mpf:
    """zeta(s) - 1 with full relative precision (no cancellation against 1)."""
    return _em_tail(s, 2, False)[0]


def _zeta_prime(s: mpf) -> mpf:
    return _em_tail(s, 2, True)[1]


def zeta(s, ctx: PrecisionContext | None = None) -> mpf:
    """Riemann zeta at real s > 1."""
    ctx = resolve(ctx)
    with ctx.working():
        s = to_mpf(s)
        _check_s(s)
        return 1 + _zeta_minus_one(s)


def zeta_minus_one(s, ctx: PrecisionContext | None = None) -> mpf:
    """zeta(s) - 1 = sum_{n>=2} n^-s, accurate relative to its own size."""
    ctx = resolve(ctx)
    with ctx.working():
        s = to_mpf(s)
        _check_s(s)
        return +_zeta_minus_one(s)


def zeta_prime(s, ctx: PrecisionContext | None = None) -> mpf:
    """Derivative of zeta at real s > 1 by termwise differentiated Euler-Maclaurin."""
    ctx = resolve(ctx)
    with ctx.working():
        s = to_mpf(s)
        _check_s(s)
        return +_zeta_prime(s)


# ---------------------------------------------------------------------------
# digamma, Euler's constant, Pochhammer
# ---------------------------------------------------------------------------

def euler_gamma(ctx: PrecisionContext | None = None) -> mpf:
    ctx = resolve(ctx)
    with ctx.working():
        return +mpmath.euler


def _harmonic(n: int) -> Fraction:
    return sum((Fraction(1, j) for j in range(1, n + 1)), Fraction(0))


def _digamma(s: mpf) -> mpf:
    if mpmath.isint(s):
        h = _harmonic(int(s) - 1)
        return -mpmath.euler + mpf(h.numerator) / h.denominator
    dps = mpmath.mp.dps
    threshold = 0.5 * dps + 10
    shift = mpf(0)
    x = s
    while x < threshold:
        shift += 1 / x
        x += 1
    eps = mpf(2) ** (-mpmath.mp.prec - 4)
    result = mpmath.log(x) - 1 / (2 * x)
    inv_x2 = 1 / (x * x)
    xpow = inv_x2
    j = 1
    while True:
        b = _BERNOULLI.even(j)
        term = mpf(b.numerator) / (b.denominator * 2 * j) * xpow
        result -= term
        if abs(term) < eps * abs(result):
            break
        xpow *= inv_x2
        j += 1
    return result - shift


def digamma(s, ctx: PrecisionContext | None = None) -> mpf:
    """psi(s) for real s > 0; integers use the exact harmonic-number form."""
    ctx = resolve(ctx)
    with ctx.working():
        s = to_mpf(s)
        if not mpmath.isfinite(s) or s <= 0:
            raise DomainError(f"digamma requires s > 0, got {s}")
        return _digamma(s)


def _digamma_difference(s: mpf, l: int) -> mpf:
    """psi(s+l) - psi(s) = sum_{i<l} 1/(s+i), no constant needed."""
    return mpmath.fsum(1 / (s + i) for i in range(l))


def pochhammer(s, l: int, ctx: PrecisionContext | None = None) -> mpf:
    """Rising factorial (s)_l = s (s+1) ... (s+l-1); (s)_0 = 1."""
    if l < 0:
        raise ValueError("l must be non-negative")
    ctx = resolve(ctx)
    with ctx.working():
        s = to_mpf(s)
        result = mpf(1)
        for i in range(l):
            result *= s + i
        return result


def decimal_exponent(x: mpf) -> int:
    """floor(log10|x|) for nonzero x, robust for huge and tiny magnitudes."""
    if x == 0:
        raise ValueError("zero has no exponent")
    return int(math.floor(float(mpmath.log10(abs(x)))))


def evaluate_with_cancellation(ctx: PrecisionContext, evaluate, max_rounds: int = 8) -> mpf:
    """Run ``evaluate(work_ctx) -> (value, scale)`` until cancellation is covered.

    ``scale`` is the magnitude of the largest contributions that cancel into
    ``value``.  When digits are lost, the evaluation is repeated with the lost
    digits added to the working precision, so the result keeps the full
    working precision of ``ctx``.
    """
    from .errors import PrecisionError

    work = ctx
    for _ in range(max_rounds):
        value, scale = evaluate(work)
        if scale == 0:
            return value
        if value == 0:
            lost = work.dps
        else:
            lost = max(0.0, float(mpmath.log10(abs(scale) / abs(value))))
        if work.dps - lost >= ctx.dps:
            return value
        extra = int(math.ceil(lost)) + 2
        if ctx.dps + extra <= work.dps:
            extra = work.dps - ctx.dps + ctx.guard
        work = ctx.escalated(extra)
    raise PrecisionError(f"cancellation not resolved after {max_rounds} precision increases")
