from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apz.errors import DomainError, PrecisionError
from apz.zeta_core import (
    PrecisionContext,
    bernoulli,
    digamma,
    evaluate_with_cancellation,
    euler_gamma,
    pochhammer,
    zeta,
    zeta_minus_one,
    zeta_prime,
)

from conftest import rel


@pytest.mark.parametrize("n", range(0, 61))
def test_bernoulli_matches_mpmath(n):
    assert bernoulli(n) == Fraction(*map(int, mpmath.bernfrac(n)))


@pytest.mark.parametrize("s", [2, 3, 4.5, 10, 33, 100, 1.0001])
def test_zeta_matches_mpmath(ctx, s):
    with mpmath.workdps(100):
        assert rel(zeta(s, ctx), mpmath.zeta(s)) < 1e-78
        assert rel(zeta_prime(s, ctx), mpmath.zeta(s, derivative=1)) < 1e-76


def test_zeta_minus_one_keeps_relative_precision(ctx):
    with mpmath.workdps(200):
        exact = mpmath.zeta(200) - 1
    assert rel(zeta_minus_one(200, ctx), exact) < 1e-78


@settings(max_examples=20, deadline=None)
@given(st.floats(min_value=1.05, max_value=60))
def test_zeta_prime_is_slope(s):
    c = PrecisionContext(digits=30)
    h = mpmath.mpf("1e-12")
    with c.working():
        slope = (zeta(s + h, c) - zeta(s - h, c)) / (2 * h)
        assert rel(slope, zeta_prime(s, c)) < 1e-15


def test_known_closed_forms(ctx):
    with ctx.working():
        assert rel(zeta(2, ctx), mpmath.pi ** 2 / 6) < 1e-78
        assert rel(zeta(4, ctx), mpmath.pi ** 4 / 90) < 1e-78


@pytest.mark.parametrize("s", [1, 2, 7, Fraction(5, 2), 0.3, 12.75])
def test_digamma_matches_mpmath(ctx, s):
    with mpmath.workdps(100):
        x = mpmath.mpf(s.numerator) / s.denominator if isinstance(s, Fraction) else mpmath.mpf(s)
        assert rel(digamma(s, ctx), mpmath.digamma(x)) < 1e-76


def test_digamma_at_one_is_minus_gamma(ctx):
    with ctx.working():
        assert digamma(1, ctx) == -euler_gamma(ctx)


def test_pochhammer(ctx):
    assert pochhammer(3, 4, ctx) == 3 * 4 * 5 * 6
    assert pochhammer(2, 0, ctx) == 1


def test_domain():
    with pytest.raises(DomainError):
        zeta(1)
    with pytest.raises(DomainError):
        zeta_prime(0.5)


def test_context_validation():
    with pytest.raises(ValueError):
        PrecisionContext(digits=5)
    with pytest.raises(ValueError):
        PrecisionContext(cutoff=100)
    assert PrecisionContext().prime_cutoff == 101
    esc = PrecisionContext(digits=20).escalated(10)
    assert esc.dps == 20 + 15 + 10 and esc.cutoff == PrecisionContext(digits=20).prime_cutoff


def test_cancellation_escalates():
    c = PrecisionContext(digits=20)

    def evaluate(work):
        with work.working():
            big = mpmath.mpf(10) ** 30
            return (big + mpmath.mpf(1) / 3) - big, big

    with c.working():
        value = evaluate_with_cancellation(c, evaluate)
        assert rel(value, mpmath.mpf(1) / 3) < 1e-30


def test_cancellation_gives_up():
    c = PrecisionContext(digits=20)
    with pytest.raises(PrecisionError):
        evaluate_with_cancellation(c, lambda work: (mpmath.mpf(0), mpmath.mpf(1)), max_rounds=2)
