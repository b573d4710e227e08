"""Self-consistency checks shared by the command line and the test-suite.

Each check returns a :class:`Check` carrying a name, a pass flag and the
observed discrepancy, so callers can print a one-line verdict.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import mpmath
from mpmath import mpf

from .almost_prime import (
    almost_prime_zeta,
    almost_prime_zeta_moebius,
    almost_prime_zeta_via_partitions,
    almost_prime_zeta_via_recurrence,
)
from .constants import B, B_geometric, B_moebius
from .oracle import DEFAULT_ORACLE_LIMIT, brackets, direct_Pk, direct_Pk_moebius
from .prime_zeta import prime_zeta
from .sieve import next_prime
from .tables import TABLES, check_table
from .zeta_core import PrecisionContext, resolve

__all__ = ["Check", "IDENTITIES", "identity_checks", "table_checks", "oracle_checks"]


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'}  {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _rel(a: mpf, b: mpf) -> mpf:
    return abs(a - b) / max(abs(a), abs(b), mpf(10) ** -300)


def _within(name: str, worst: mpf, tol: mpf) -> tuple[bool, str]:
    return worst <= tol, f"max deviation {mpmath.nstr(worst, 3)} vs tolerance {mpmath.nstr(tol, 3)}"


def partitions_match_recurrence(ctx: PrecisionContext, kmax: int = 10) -> tuple[bool, str]:
    with ctx.working():
        worst = mpf(0)
        for s in (mpf(2), mpf(3), mpf(5) / 2):
            for k in range(1, kmax + 1):
                a = almost_prime_zeta_via_partitions(k, s, ctx)
                b = almost_prime_zeta_via_recurrence(k, s, ctx)
                worst = max(worst, _rel(a, b))
        return _within("partitions", worst, ctx.series_tol)


def zeta_sum_rule(ctx: PrecisionContext) -> tuple[bool, str]:
    with ctx.working():
        total = 1 + mpmath.fsum(almost_prime_zeta(k, 2, ctx) for k in range(1, 61))
        return _within("zeta", abs(total - mpmath.zeta(2)), mpf(10) ** -30)


def moebius_sum_rule(ctx: PrecisionContext) -> tuple[bool, str]:
    with ctx.working():
        total = 1 + mpmath.fsum(almost_prime_zeta_moebius(k, 2, ctx) for k in range(1, 61))
        return _within("moebius", abs(total - 1 / mpmath.zeta(2)), mpf(10) ** -20)


def odd_index_rule(ctx: PrecisionContext) -> tuple[bool, str]:
    with ctx.working():
        plain = mpmath.fsum(almost_prime_zeta(2 * k - 1, 2, ctx) for k in range(1, 41))
        signed = mpmath.fsum(almost_prime_zeta_moebius(2 * k - 1, 2, ctx) for k in range(1, 41))
        worst = max(abs(plain - mpmath.pi ** 2 / 20), abs(signed + 9 / (2 * mpmath.pi ** 2)))
        return _within("odd", worst, mpf(10) ** -40)


def semiprime_rule(ctx: PrecisionContext) -> tuple[bool, str]:
    with ctx.working():
        worst = mpf(0)
        for s in (2, 3, 4):
            lhs = 2 * almost_prime_zeta(2, s, ctx)
            p = prime_zeta(s, ctx)
            rhs = p * p + prime_zeta(2 * s, ctx)
            worst = max(worst, _rel(lhs, rhs))
        return _within("semiprime", worst, ctx.series_tol)


def B_routes_agree(ctx: PrecisionContext) -> tuple[bool, str]:
    with ctx.working():
        worst = mpf(0)
        for k in range(1, 5):
            for s in range(1, 5):
                worst = max(worst, _rel(B(k, s, ctx), B_geometric(k, s, ctx)))
        return _within("B", worst, ctx.series_tol)


def cutoff_invariance(ctx: PrecisionContext) -> tuple[bool, str]:
    other = PrecisionContext(ctx.digits, ctx.guard, next_prime(2 * ctx.prime_cutoff))
    worst = mpf(0)
    with ctx.working():
        for s in (mpf(2), mpf(7) / 2, mpf(10)):
            a = prime_zeta(s, ctx)
            b = prime_zeta(s, other)
            worst = max(worst, _rel(a, b))
        for k, s in ((2, 2), (4, 3)):
            worst = max(worst, _rel(almost_prime_zeta(k, s, ctx), almost_prime_zeta(k, s, other)))
        return _within("cutoff", worst, mpf(10) ** -ctx.digits)


IDENTITIES: dict[str, Callable[[PrecisionContext], tuple[bool, str]]] = {
    "partition sum equals recurrence, k <= 10": partitions_match_recurrence,
    "1 + sum_{k<=60} P_k(2) = zeta(2)": zeta_sum_rule,
    "1 + sum_{k<=60} P_k^mu(2) = 1/zeta(2)": moebius_sum_rule,
    "odd-k sums at s=2 give pi^2/20 and -9/(2 pi^2)": odd_index_rule,
    "2 P_2(s) = P(s)^2 + P(2s)": semiprime_rule,
    "B geometric and decomposed routes agree": B_routes_agree,
    "cutoff M and next_prime(2M) agree": cutoff_invariance,
}


def _timed(name: str, fn: Callable[[], tuple[bool, str]]) -> Check:
    t0 = time.perf_counter()
    ok, detail = fn()
    return Check(name, ok, detail, time.perf_counter() - t0)


def identity_checks(ctx: PrecisionContext | None = None) -> list[Check]:
    ctx = resolve(ctx)
    return [_timed(name, lambda fn=fn: fn(ctx)) for name, fn in IDENTITIES.items()]


def table_checks(ctx: PrecisionContext | None = None, names=None) -> list[Check]:
    ctx = resolve(ctx)
    out = []
    for name in names or TABLES:
        def run(name=name):
            rows = check_table(name, ctx)
            bad = [r.key for r in rows if not r.ok]
            detail = f"{len(rows) - len(bad)}/{len(rows)} rows match"
            if bad:
                detail += f"; mismatched keys {bad}"
            return not bad, detail
        out.append(_timed(f"table {name}", run))
    return out


def oracle_checks(ctx: PrecisionContext | None = None, N: int = DEFAULT_ORACLE_LIMIT) -> list[Check]:
    """Bracket P_k(s) and P_k^mu(s), k = 2..6, s = 2..4, by direct sums up to N."""
    ctx = resolve(ctx)
    out = []
    for label, fast, slow in (
        ("P_k", almost_prime_zeta, direct_Pk),
        ("P_k^mu", almost_prime_zeta_moebius, direct_Pk_moebius),
    ):
        def run(fast=fast, slow=slow):
            missed = []
            for k in range(2, 7):
                for s in range(2, 5):
                    if not brackets(fast(k, s, ctx), slow(k, s, N)):
                        missed.append((k, s))
            return not missed, f"30 cells bracketed at N={N}" if not missed else f"outside bound at {missed}"
        out.append(_timed(f"oracle {label}", run))
    return out
