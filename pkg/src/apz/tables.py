"""Published reference tables and the functions that regenerate them.

Each golden file in ``data/golden`` holds the tabulated digits verbatim.  A
regenerated value matches a row when its chopped leading digits equal the
tabulated ones; the artifact may carry more digits than were printed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from typing import Callable

from mpmath import mpf

from . import almost_prime as ap
from . import constants as dc
from .prime_zeta import prime_zeta, prime_zeta_moment, prime_zeta_prime
from .formatting import Digits, parse_paper_style, truncated_digits
from .zeta_core import PrecisionContext, resolve

__all__ = ["Table", "TABLES", "GoldenRow", "RowCheck", "load_golden", "check_table", "compare_digits"]


@dataclass(frozen=True)
class GoldenRow:
    key: tuple[int, ...]
    text: str


@dataclass(frozen=True)
class Table:
    name: str
    caption: str
    keys: tuple[str, ...]
    compute: Callable[[tuple[int, ...], PrecisionContext], mpf]
    # rows whose comparison is limited to fewer digits than were printed
    digit_limits: dict[tuple[int, ...], int] = field(default_factory=dict)


@dataclass(frozen=True)
class RowCheck:
    key: tuple[int, ...]
    expected: str
    computed: Digits
    compared: int
    ok: bool


def _signed_moebius_B(key, ctx):
    k, s = key
    return (-1) ** k * dc.B_moebius(k, s, ctx)


TABLES: dict[str, Table] = {
    t.name: t
    for t in [
        Table("P", "prime zeta P(s)", ("s",), lambda key, ctx: prime_zeta(key[0], ctx)),
        Table("moments", "sum_{s>=2} P(s)/s^u", ("u",), lambda key, ctx: prime_zeta_moment(key[0], ctx)),
        # a competing published value for s = 2 agrees with these digits only to 42 places
        Table("Pprime", "derivative P'(s)", ("s",), lambda key, ctx: prime_zeta_prime(key[0], ctx),
              digit_limits={(2,): 40}),
        Table("Pk", "almost-prime zeta P_k(s)", ("k", "s"),
              lambda key, ctx: ap.almost_prime_zeta(key[0], key[1], ctx)),
        Table("Pkprime", "derivative P_k'(s)", ("k", "s"),
              lambda key, ctx: ap.almost_prime_zeta_prime(key[0], key[1], ctx)),
        Table("Pkmu", "square-free variant P_k^mu(s)", ("k", "s"),
              lambda key, ctx: ap.almost_prime_zeta_moebius(key[0], key[1], ctx)),
        Table("mm", "sum_{n>=2} 1/(n^s (n-1))", ("s",), lambda key, ctx: dc.zeta_partial_fraction_sum(key[0], ctx)),
        Table("Nk1", "B_{k,1}", ("k",), lambda key, ctx: dc.B(key[0], 1, ctx)),
        Table("Nks", "B_{k,s}", ("k", "s"), lambda key, ctx: dc.B(key[0], key[1], ctx)),
        Table("Nk1mu", "(-1)^k B^mu_{k,1}", ("k",), lambda key, ctx: _signed_moebius_B((key[0], 1), ctx)),
        Table("Nksmu", "(-1)^k B^mu_{k,s}", ("k", "s"), _signed_moebius_B),
        Table("H0", "Hurwitz projection P_k(s, 0)", ("k", "s"),
              lambda key, ctx: dc.hurwitz_almost_prime(key[0], key[1], 0, ctx=ctx)),
        Table("Hlog", "|P_k'(s, 0)|", ("k", "s"),
              lambda key, ctx: abs(dc.hurwitz_almost_prime_prime(key[0], key[1], 0, ctx=ctx))),
        Table("Lkl", "L_{k,l}", ("k", "l"), lambda key, ctx: dc.L(key[0], key[1], ctx)),
        Table("log2parts", "sum over Omega(n)=k of 1/(n 2^n)", ("k",),
              lambda key, ctx: dc.log2_component(key[0], ctx)),
    ]
}


def load_golden(name: str) -> list[GoldenRow]:
    """Rows of a golden file: whitespace-separated integer keys then the value text."""
    if name not in TABLES:
        raise KeyError(f"unknown table {name!r}; choose from {', '.join(TABLES)}")
    path = resources.files("apz").joinpath("data").joinpath("golden").joinpath(f"{name}.txt")
    text = path.read_text(encoding="utf-8")
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        *keys, value = line.split()
        rows.append(GoldenRow(tuple(int(k) for k in keys), value))
    return rows


def compare_digits(value, expected: str, limit: int | None = None) -> tuple[bool, Digits, int]:
    """Chop ``value`` to the printed digit count (or ``limit``) and compare."""
    want = parse_paper_style(expected)
    n = len(want.digits) if limit is None else min(limit, len(want.digits))
    got = truncated_digits(value, n)
    ok = got.sign == want.sign and got.exponent == want.exponent and got.digits == want.digits[:n]
    return ok, got, n


def check_table(name: str, ctx: PrecisionContext | None = None) -> list[RowCheck]:
    ctx = resolve(ctx)
    table = TABLES[name]
    out = []
    for row in load_golden(name):
        with ctx.working():
            value = table.compute(row.key, ctx)
        ok, got, n = compare_digits(value, row.text, table.digit_limits.get(row.key))
        out.append(RowCheck(row.key, row.text, got, n, ok))
    return out
