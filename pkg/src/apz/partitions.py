"""Integer partitions in multiplicity form and the symmetric-group cycle index.

A partition of k is stored as the multiplicity vector (k_1, ..., k_k) with
sum m*k_m = k.  Its weight k!/prod(m^k_m k_m!) counts the permutations of k
objects with that cycle type, so the weights of all partitions of k add up
to k!.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Callable

import mpmath
from mpmath import mpf

from .zeta_core import PrecisionContext, resolve

MAX_K = 64


@dataclass(frozen=True)
class Partition:
    k: int
    mults: tuple[int, ...]
    weight: int

    @property
    def parts(self) -> int:
        """Number of cycles, sum of the multiplicities."""
        return sum(self.mults)

    def cycle_lengths(self) -> list[int]:
        return [m for m, c in enumerate(self.mults, start=1) for _ in range(c)]


def cycle_type_weight(mults: tuple[int, ...]) -> int:
    k = sum(m * c for m, c in enumerate(mults, start=1))
    denom = 1
    for m, c in enumerate(mults, start=1):
        denom *= m ** c * factorial(c)
    return factorial(k) // denom


def _descend(remaining: int, largest: int):
    # partitions of `remaining` into parts <= largest, largest part first
    if remaining == 0:
        yield []
        return
    for part in range(min(remaining, largest), 0, -1):
        for rest in _descend(remaining - part, part):
            yield [part] + rest


@lru_cache(maxsize=None)
def _partitions(k: int) -> tuple[Partition, ...]:
    out = []
    for parts in _descend(k, k):
        mults = [0] * k
        for p in parts:
            mults[p - 1] += 1
        mults = tuple(mults)
        out.append(Partition(k, mults, cycle_type_weight(mults)))
    out.sort(key=lambda p: p.mults, reverse=True)
    return tuple(out)


def partitions_of(k: int) -> list[Partition]:
    """All partitions of k with their cycle-type weights, reverse-lex by multiplicities."""
    if not 1 <= k <= MAX_K:
        raise ValueError(f"k must be in 1..{MAX_K}, got {k}")
    return list(_partitions(k))


def cycle_index_sequence(k: int, x: Callable[[int], mpf]) -> list[mpf]:
    """[Z(S_0), ..., Z(S_k)] with x(m) substituted for the cycle-length-m indeterminate.

    Uses Z(S_n) = (1/n) sum_{j=1}^n x_j Z(S_{n-j}) at the current precision.
    """
    xs = [None] + [x(m) for m in range(1, k + 1)]
    z = [mpf(1)]
    for n in range(1, k + 1):
        z.append(mpmath.fsum(xs[j] * z[n - j] for j in range(1, n + 1)) / n)
    return z


def cycle_index_eval(k: int, x: Callable[[int], mpf], ctx: PrecisionContext | None = None) -> mpf:
    """Z(S_k) evaluated at x_m = x(m) by the cycle-index recurrence; Z(S_0) = 1."""
    if k < 0:
        raise ValueError("k must be non-negative")
    ctx = resolve(ctx)
    with ctx.working():
        return cycle_index_sequence(k, x)[k]


def cycle_index_explicit(k: int, x: Callable[[int], mpf], ctx: PrecisionContext | None = None) -> mpf:
    """Z(S_k) as (1/k!) sum over partitions of weight * prod x_m^k_m."""
    ctx = resolve(ctx)
    if k == 0:
        return mpf(1)
    with ctx.working():
        xs = [None] + [x(m) for m in range(1, k + 1)]
        terms = []
        for part in partitions_of(k):
            term = mpf(part.weight)
            for m, c in enumerate(part.mults, start=1):
                if c:
                    term *= xs[m] ** c
            terms.append(term)
        return mpmath.fsum(terms) / factorial(k)
