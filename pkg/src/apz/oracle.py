"""Direct summation over sieve-enumerated integers, used as ground truth.

Nothing here uses the Euler-product acceleration: each series is summed
term by term over the k-almost primes n <= N and paired with a rigorous bound
on everything left out.  Small n are summed in mpmath; beyond ``FLOAT_SPLIT``
the terms are summed in float64 and a worst-case rounding allowance is added
to the tail bound, so ``|true value - partial_sum| <= tail_bound`` still holds.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import mpmath
import numpy as np
from mpmath import mpf

from .errors import DomainError, ResourceError
from .sieve import FactorSieve, build_sieve
from .zeta_core import PrecisionContext, to_mpf

__all__ = [
    "OracleResult",
    "DEFAULT_ORACLE_LIMIT",
    "ORACLE_CONTEXT",
    "WEIGHTS",
    "oracle_sieve",
    "direct_Pk",
    "direct_Pk_moebius",
    "direct_weighted",
    "brackets",
]

DEFAULT_ORACLE_LIMIT = 10_000_000
ORACLE_CONTEXT = PrecisionContext(digits=30, guard=5)
FLOAT_SPLIT = 10_000
WEIGHTS = ("reciprocal_shift", "log_shift", "pow2", "squared_prime")

# per-term pow/log error plus naive-summation error, in units of the float sum
_ULP = 2.0 ** -52

_sieve: FactorSieve | None = None
_sieve_lock = threading.Lock()


@dataclass(frozen=True)
class OracleResult:
    partial_sum: mpf
    tail_bound: mpf
    terms_used: int

    def contains(self, value) -> bool:
        return brackets(value, self)


def brackets(value, result: OracleResult) -> bool:
    """True when ``value`` lies within the certified interval of ``result``."""
    with mpmath.workdps(40):
        return abs(mpf(value) - result.partial_sum) <= result.tail_bound


def oracle_sieve(N: int = DEFAULT_ORACLE_LIMIT) -> FactorSieve:
    """A shared sieve covering at least ``N``; rebuilt only when it must grow."""
    global _sieve
    with _sieve_lock:
        if _sieve is None or _sieve.limit < N:
            _sieve = build_sieve(max(N, 1024))
        return _sieve


def _support(k: int, N: int, squarefree: bool, sieve: FactorSieve | None) -> np.ndarray:
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if N < 2:
        raise DomainError(f"N must be >= 2, got {N}")
    if sieve is None:
        sieve = oracle_sieve(N)
    elif sieve.limit < N:
        raise ResourceError(f"N = {N} exceeds the sieve limit {sieve.limit}")
    ns = sieve.select(k, squarefree)
    return ns[ns <= N]


def _split_sum(ns: np.ndarray, mp_term, float_terms, signs: np.ndarray | None) -> tuple[mpf, mpf]:
    """Sum mp_term(n) for small n and float_terms(array) for the rest.

    Returns the sum and a bound on the float part's rounding error.
    """
    cut = int(np.searchsorted(ns, FLOAT_SPLIT, side="right"))
    small, large = ns[:cut], ns[cut:]
    sgn_small = signs[:cut] if signs is not None else None
    total = mpmath.fsum(
        (int(sgn_small[i]) if sgn_small is not None else 1) * mp_term(int(n)) for i, n in enumerate(small)
    )
    slack = mpf(0)
    if large.size:
        vals = float_terms(large.astype(np.float64))
        abs_sum = float(np.abs(vals).sum())
        if signs is not None:
            vals = vals * signs[cut:]
        total += mpf(float(vals.sum()))
        slack = mpf((large.size + 8) * _ULP * abs_sum)
    return total, slack


def _check_s(s: mpf, lower: int = 1) -> None:
    if not mpmath.isfinite(s) or s <= lower:
        raise DomainError(f"s must exceed {lower}, got {s}")


def _direct(k, s, N, ctx, sieve, squarefree: bool) -> OracleResult:
    ctx = ctx or ORACLE_CONTEXT
    with ctx.working():
        s = to_mpf(s)
        _check_s(s)
        ns = _support(k, N, squarefree, sieve)
        signs = None
        if squarefree:
            # mu(n) = (-1)^k on square-free n with k prime factors
            signs = np.full(ns.size, (-1) ** k, dtype=np.float64)
        fs = float(s)
        total, slack = _split_sum(ns, lambda n: mpf(n) ** -s, lambda x: np.power(x, -fs), signs)
        tail = mpf(N) ** (1 - s) / (s - 1)
        return OracleResult(+total, tail + slack, int(ns.size))


def direct_Pk(k: int, s, N: int = DEFAULT_ORACLE_LIMIT, ctx: PrecisionContext | None = None,
              sieve: FactorSieve | None = None) -> OracleResult:
    """sum of n^-s over n <= N with Omega(n) = k; remainder below N^(1-s)/(s-1)."""
    return _direct(k, s, N, ctx, sieve, squarefree=False)


def direct_Pk_moebius(k: int, s, N: int = DEFAULT_ORACLE_LIMIT, ctx: PrecisionContext | None = None,
                      sieve: FactorSieve | None = None) -> OracleResult:
    """sum of mu(n) n^-s over n <= N with Omega(n) = k; same remainder bound."""
    return _direct(k, s, N, ctx, sieve, squarefree=True)


def direct_weighted(k: int, s, N: int, weight: str, ctx: PrecisionContext | None = None,
                    sieve: FactorSieve | None = None, moebius: bool = False) -> OracleResult:
    """Direct sums behind the derived constants.

    weight = "reciprocal_shift": 1/(n^s (n-1)), the B_{k,s} family;
             remainder <= 2 N^-s / s since 1/(n-1) <= 2/n.
    weight = "log_shift": log(n-1)/(n-1)^s, the Hurwitz derivative at a = 0 up
             to sign; remainder bounded by the integral of log x / x^s from N-1.
    weight = "pow2": 1/(n 2^n), the log 2 components (s ignored);
             remainder <= 2^-N/(N+1).
    weight = "squared_prime": 1/(p^(2s) (p^2 - 1)) over primes p (k must be 1);
             remainder <= (4/3) N^(-2s-1)/(2s+1).
    ``moebius`` multiplies each term by mu(n) (ignored for squared_prime).
    """
    if weight not in WEIGHTS:
        raise ValueError(f"weight must be one of {WEIGHTS}, got {weight!r}")
    ctx = ctx or ORACLE_CONTEXT
    with ctx.working():
        if weight == "squared_prime" and k != 1:
            raise DomainError("squared_prime sums run over primes, so k must be 1")
        squarefree = moebius and weight != "squared_prime"
        ns = _support(k, N, squarefree, sieve)
        signs = np.full(ns.size, (-1) ** k, dtype=np.float64) if squarefree else None

        if weight == "pow2":
            return _pow2(ns, N, ctx, signs)

        s = to_mpf(s)
        fs = float(s)
        if weight == "reciprocal_shift":
            _check_s(s, 0)
            total, slack = _split_sum(
                ns, lambda n: 1 / (mpf(n) ** s * (n - 1)), lambda x: 1 / (np.power(x, fs) * (x - 1)), signs
            )
            tail = 2 * mpf(N) ** (-s) / s
        elif weight == "log_shift":
            _check_s(s)
            total, slack = _split_sum(
                ns,
                lambda n: mpmath.log(n - 1) / mpf(n - 1) ** s,
                lambda x: np.log(x - 1) / np.power(x - 1, fs),
                signs,
            )
            m = mpf(N - 1)
            if m < mpmath.exp(1 / s):
                raise DomainError("N too small for the monotone log-weighted remainder bound")
            tail = m ** (1 - s) * (mpmath.log(m) / (s - 1) + 1 / (s - 1) ** 2)
        else:
            _check_s(s, 0)
            total, slack = _split_sum(
                ns,
                lambda p: 1 / (mpf(p) ** (2 * s) * (mpf(p) ** 2 - 1)),
                lambda x: 1 / (np.power(x, 2 * fs) * (x * x - 1)),
                None,
            )
            tail = mpf(4) / 3 * mpf(N) ** (-2 * s - 1) / (2 * s + 1)
        return OracleResult(+total, tail + slack, int(ns.size))


def _pow2(ns: np.ndarray, N: int, ctx: PrecisionContext, signs) -> OracleResult:
    # terms below 2^-(prec + 64) cannot move the sum; fold them into the bound
    cap = min(N, mpmath.mp.prec + 64 + int(math.log2(max(int(ns[0]), 2))) if ns.size else N)
    used = ns[ns <= cap]
    total = mpmath.fsum(
        (int(signs[i]) if signs is not None else 1) / (mpf(int(n)) * mpf(2) ** int(n)) for i, n in enumerate(used)
    )
    tail = mpf(2) ** (-cap) / (cap + 1)
    return OracleResult(+total, tail, int(used.size))
