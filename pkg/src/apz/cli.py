"""``apz`` command line: single values, table regeneration and verification.

``--digits D`` asks for D digits after the leading one (D + 1 significant
digits), computed with the usual guard digits on top.  Settings may also come
from a ``key=value`` file named by the ``APZ_CONFIG`` environment variable;
command-line flags take precedence over the file.

Exit status: 0 success, 2 usage error, 3 domain error, 4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from fractions import Fraction

from . import almost_prime as ap
from . import constants as dc
from .checks import identity_checks, oracle_checks, table_checks
from .errors import DomainError, PrecisionError, ResourceError
from .formatting import format_like, format_paper_style, format_scientific, parse_paper_style
from .oracle import DEFAULT_ORACLE_LIMIT
from .prime_zeta import prime_zeta, prime_zeta_moment, prime_zeta_moment_total, prime_zeta_prime
from .tables import TABLES, load_golden
from .zeta_core import PrecisionContext

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_VERIFY = 0, 2, 3, 4
CONFIG_ENV = "APZ_CONFIG"
DEFAULT_DIGITS = 63
FORMATS = ("plain", "paper", "csv")
SUITES = ("identities", "tables", "oracle")


class UsageError(Exception):
    pass


def _number(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


# command -> (required keys, paper style, evaluator(args, ctx))
def _commands():
    return {
        "P": (("s",), "dot", lambda a, c: prime_zeta(a.s, c)),
        "dP": (("s",), "sci", lambda a, c: prime_zeta_prime(a.s, c)),
        "Pk": (("k", "s"), "sci", lambda a, c: ap.almost_prime_zeta(a.k, a.s, c, method=a.method)),
        "dPk": (("k", "s"), "sci", lambda a, c: ap.almost_prime_zeta_prime(a.k, a.s, c, method=a.method)),
        "Pmu": (("k", "s"), "sci", lambda a, c: ap.almost_prime_zeta_moebius(a.k, a.s, c, method=a.method)),
        "B": (("k", "s"), "dot", lambda a, c: dc.B(a.k, _integer(a.s, "s"), c)),
        "Bmu": (("k", "s"), "dot", lambda a, c: dc.B_moebius(a.k, _integer(a.s, "s"), c)),
        "hurwitz": (("k", "s", "a"), "dot",
                    lambda a, c: dc.hurwitz_almost_prime(a.k, a.s, a.a, variant=a.variant, ctx=c)),
        "dhurwitz": (("k", "s", "a"), "dot", lambda a, c: dc.hurwitz_almost_prime_prime(a.k, a.s, a.a, ctx=c)),
        "L": (("k", "l"), "dot", lambda a, c: dc.L(a.k, a.l, c)),
        "moment": ((), "dot", _moment),
        "log2part": (("k",), "dot", lambda a, c: dc.log2_component(a.k, c)),
    }


def _integer(x: Fraction, name: str) -> int:
    if x.denominator != 1:
        raise DomainError(f"{name} must be an integer here, got {x}")
    return int(x)


def _moment(args, ctx):
    if args.u is None:
        return prime_zeta_moment_total(ctx)
    return prime_zeta_moment(args.u, ctx)


def read_config(path: str) -> dict[str, str]:
    """Parse ``key=value`` lines; blank lines and ``#`` comments are skipped."""
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (part.strip() for part in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--k", type=int, help="almost-prime order")
    parser.add_argument("--s", type=_number, help="exponent s (integer or decimal)")
    parser.add_argument("--l", type=int, help="index l")
    parser.add_argument("--u", type=int, help="moment order u (omit for the total)")
    parser.add_argument("--a", type=_number, help="Hurwitz shift a")
    parser.add_argument("--i", type=int, help="tau row index i (omit for the whole row)")
    parser.add_argument("--digits", type=int, help=f"digits after the leading one (default {DEFAULT_DIGITS})")
    parser.add_argument("--cutoff", type=int, help="largest prime summed directly")
    parser.add_argument("--format", choices=FORMATS, help="output format (default plain)")
    parser.add_argument("--oracle-limit", type=int, help=f"direct-sum limit N (default {DEFAULT_ORACLE_LIMIT})")
    parser.add_argument("--variant", choices=ap.VARIANTS, default=ap.PLAIN, help="Hurwitz variant")
    parser.add_argument("--method", choices=("recurrence", "partitions"), default="recurrence")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="apz", description="Prime and almost-prime zeta constants.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in list(_commands()) + ["tau"]:
        _common(sub.add_parser(name))
    table = sub.add_parser("table", help="regenerate a reference table")
    table.add_argument("name", choices=list(TABLES))
    _common(table)
    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("--suite", choices=SUITES, default="identities")
    verify.add_argument("--table", choices=list(TABLES), action="append", help="restrict the tables suite")
    _common(verify)
    return parser


def _settings(args) -> None:
    """Fill unset flags from the config file, then from built-in defaults."""
    config = {}
    path = os.environ.get(CONFIG_ENV)
    if path:
        try:
            config = read_config(path)
        except OSError as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from exc
    casts = {"digits": int, "cutoff": int, "oracle_limit": int, "format": str}
    for key, cast in casts.items():
        if getattr(args, key) is None and key in config:
            try:
                setattr(args, key, cast(config[key]))
            except ValueError as exc:
                raise UsageError(f"bad config value {key}={config[key]!r}") from exc
    if args.format is None:
        args.format = "plain"
    if args.format not in FORMATS:
        raise UsageError(f"format must be one of {FORMATS}")
    if args.oracle_limit is None:
        args.oracle_limit = DEFAULT_ORACLE_LIMIT


def _context(args) -> PrecisionContext:
    digits = DEFAULT_DIGITS if args.digits is None else args.digits
    if digits < 1:
        raise UsageError("--digits must be positive")
    try:
        return PrecisionContext(digits=max(digits + 1, 10), cutoff=args.cutoff)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _shown(args) -> int:
    return (DEFAULT_DIGITS if args.digits is None else args.digits) + 1


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _key_text(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else repr(float(x))
    return str(x)


def _single(args, out) -> int:
    keys, style, evaluate = _commands()[args.command]
    missing = [k for k in keys if getattr(args, k) is None]
    if missing:
        raise UsageError(f"{args.command} needs --{' --'.join(missing)}")
    ctx = _context(args)
    with ctx.working():
        value = evaluate(args, ctx)
    shown = _shown(args)
    if args.format == "csv":
        cols = list(keys) or (["u"] if args.u is not None else [])
        row = [_key_text(getattr(args, k)) for k in cols] + [format_scientific(value, shown)]
        out.write(_csv(cols + ["value"], [row]))
    elif args.format == "paper":
        out.write(format_paper_style(value, shown, style) + "\n")
    else:
        out.write(format_scientific(value, shown) + "\n")
    return EXIT_OK


def _tau(args, out) -> int:
    if args.l is None:
        raise UsageError("tau needs --l")
    rows = [args.i] if args.i is not None else list(range(2, args.l + 1))
    try:
        values = [(i, dc.tau(i, args.l)) for i in rows]
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    if args.format == "csv":
        out.write(_csv(["i", "l", "value"], [[i, args.l, str(v)] for i, v in values]))
    else:
        for i, v in values:
            out.write(f"tau({i},{args.l}) = {v}\n")
    return EXIT_OK


def _table(args, out) -> int:
    table = TABLES[args.name]
    ctx = _context(args) if args.digits is not None or args.cutoff is not None else PrecisionContext()
    shown = _shown(args) if args.digits is not None else None
    rows = []
    for row in load_golden(args.name):
        with ctx.working():
            value = table.compute(row.key, ctx)
        if args.format == "paper":
            text = format_like(value, row.text, shown)
        else:
            text = format_scientific(value, shown or len(parse_paper_style(row.text).digits))
        rows.append([str(k) for k in row.key] + [text])
    if args.format == "csv":
        out.write(_csv(list(table.keys) + ["value"], rows))
    else:
        for r in rows:
            out.write(" ".join(r) + "\n")
    return EXIT_OK


def _verify(args, out) -> int:
    ctx = _context(args) if args.digits is not None or args.cutoff is not None else PrecisionContext()
    if args.suite == "identities":
        results = identity_checks(ctx)
    elif args.suite == "tables":
        results = table_checks(ctx, args.table)
    else:
        results = oracle_checks(ctx, args.oracle_limit)
    for check in results:
        out.write(check.line() + "\n")
    failed = sum(not c.ok for c in results)
    out.write(f"{len(results) - failed}/{len(results)} checks passed\n")
    return EXIT_OK if not failed else EXIT_VERIFY


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _settings(args)
        if args.command == "tau":
            return _tau(args, out)
        if args.command == "table":
            return _table(args, out)
        if args.command == "verify":
            return _verify(args, out)
        return _single(args, out)
    except UsageError as exc:
        print(f"apz: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, ResourceError, PrecisionError) as exc:
        print(f"apz: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
