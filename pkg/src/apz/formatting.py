"""Rendering and parsing of tabulated decimal values.

Tabulated numbers carry a mantissa and an optional power-of-ten tag in
parentheses, e.g. ``.9936(-3)`` for 0.9936e-3 or ``3.45(-3)`` for 3.45e-3.
Trailing digits are chopped, never rounded.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import mpmath
from mpmath import mpf

__all__ = [
    "Digits",
    "parse_paper_style",
    "truncated_digits",
    "format_paper_style",
    "format_scientific",
    "format_like",
]

_PAPER_RE = re.compile(r"^\s*([+-]?)(\d*)\.(\d*)\s*(?:\(\s*([+-]?\d+)\s*\))?\s*$")


@dataclass(frozen=True)
class Digits:
    """sign * 0.<digits> * 10**exponent, with a nonzero leading digit (or digits == "0")."""

    sign: int
    digits: str
    exponent: int

    def to_mpf(self) -> mpf:
        return self.sign * mpf("0." + self.digits) * mpf(10) ** self.exponent


def parse_paper_style(text: str) -> Digits:
    """Parse ``[-]int.frac[(exp)]`` into normalized significant digits."""
    m = _PAPER_RE.match(text)
    if not m:
        raise ValueError(f"not a tabulated value: {text!r}")
    sign_s, whole, frac, tag = m.groups()
    if not whole and not frac:
        raise ValueError(f"no digits in {text!r}")
    exp = int(tag) if tag else 0
    raw = whole + frac
    exp += len(whole)
    stripped = raw.lstrip("0")
    exp -= len(raw) - len(stripped)
    if not stripped:
        return Digits(1, "0", 0)
    return Digits(-1 if sign_s == "-" else 1, stripped, exp)


def truncated_digits(x, count: int) -> Digits:
    """The first ``count`` significant digits of x, chopped toward zero.

    x is first rounded to the decimal precision its binary mantissa carries,
    so a value entered as 3.45e-3 chops to 345 rather than 344.
    """
    if count < 1:
        raise ValueError("count must be positive")
    if not isinstance(x, mpf):
        # ints, floats, strings and fractions convert exactly or near enough
        with mpmath.workdps(count + 30):
            x = mpmath.mpmathify(x)
    if not mpmath.isfinite(x):
        raise ValueError(f"cannot format {x}")
    if x == 0:
        return Digits(1, "0" * count, 0)
    sign = -1 if x < 0 else 1
    # decimal digits the mantissa supports, less one for safety
    avail = int(max(x._mpf_[3], 53) * math.log10(2)) - 1
    keep = max(avail, count)
    with mpmath.workdps(keep + 30):
        ax = abs(x)
        exp = int(mpmath.floor(mpmath.log10(ax))) + 1
        scaled = ax * mpf(10) ** (keep - exp)
        n = int(mpmath.nint(scaled)) if avail > count else int(mpmath.floor(scaled))
    text = str(n)
    # log10 can land one off near a power of ten, and rounding can carry
    exp += len(text) - keep
    return Digits(sign, text[:count], exp)


def _tag(exponent: int) -> str:
    return f"({exponent})" if exponent else ""


def format_paper_style(x, digits_shown: int, style: str = "sci") -> str:
    """Render x with ``digits_shown`` chopped significant digits.

    ``style="sci"`` gives ``3.45(-3)``; ``style="dot"`` gives ``.345(-2)``.
    A zero exponent drops the tag.
    """
    d = truncated_digits(x, digits_shown)
    sign = "-" if d.sign < 0 else ""
    if style == "dot":
        return f"{sign}.{d.digits}{_tag(d.exponent)}"
    if style == "sci":
        return f"{sign}{d.digits[0]}.{d.digits[1:]}{_tag(d.exponent - 1)}"
    raise ValueError(f"unknown style {style!r}")


def format_scientific(x, digits_shown: int) -> str:
    """Chopped plain scientific notation such as ``-4.930911e-1``."""
    d = truncated_digits(x, digits_shown)
    sign = "-" if d.sign < 0 else ""
    tail = f".{d.digits[1:]}" if len(d.digits) > 1 else ""
    return f"{sign}{d.digits[0]}{tail}e{d.exponent - 1}"


def format_like(x, template: str, digits_shown: int | None = None) -> str:
    """Render x with the layout of a tabulated value such as ``0.026`` or ``1.4(-1)``.

    The power-of-ten tag, the leading zero and the digit count follow the
    template (the count unless ``digits_shown`` is given).
    """
    m = _PAPER_RE.match(template)
    if not m:
        raise ValueError(f"not a tabulated value: {template!r}")
    whole, tag = m.group(2), int(m.group(4) or 0)
    n = digits_shown or len(parse_paper_style(template).digits)
    d = truncated_digits(x, n)
    sign = "-" if d.sign < 0 else ""
    w = d.exponent - tag
    if w >= 1:
        body = d.digits.ljust(w, "0")
        return f"{sign}{body[:w]}.{body[w:]}{_tag(tag)}"
    lead = "0" if whole == "0" else ""
    return f"{sign}{lead}.{'0' * -w}{d.digits}{_tag(tag)}"
