from fractions import Fraction
from math import comb, factorial

import mpmath
import pytest

from apz.almost_prime import almost_prime_zeta, almost_prime_zeta_moebius
from apz.constants import (
    B,
    B_alternating_hurwitz,
    B_geometric,
    B_moebius,
    L,
    factorial_reciprocal_identity,
    hurwitz_almost_prime,
    hurwitz_almost_prime_prime,
    log2_component,
    squared_prime_constant,
    tau,
    zeta_partial_fraction_sum,
)
from apz.errors import DomainError, ResourceError
from apz.oracle import direct_weighted
from apz.prime_zeta import prime_zeta_moment, prime_zeta_moment_total
from apz.sieve import build_sieve
from apz.tables import compare_digits
from apz.zeta_core import PrecisionContext

from conftest import rel


def matches(value, text, ctx):
    with ctx.working():
        return compare_digits(value, text)[0]


def test_partial_fraction_sum(ctx, golden):
    assert zeta_partial_fraction_sum(1, ctx) == 1
    for s in (2, 10):
        assert matches(zeta_partial_fraction_sum(s, ctx), golden("mm")[(s,)], ctx)
    with pytest.raises(DomainError):
        zeta_partial_fraction_sum(0)


def test_B_examples(ctx, golden):
    assert matches(B(1, 1, ctx), golden("Nk1")[(1,)], ctx)
    assert matches(B(3, 2, ctx), golden("Nks")[(3, 2)], ctx)
    with ctx.working():
        assert rel(B(3, 2, ctx), B(3, 1, ctx) - almost_prime_zeta(3, 2, ctx)) < 1e-78


def test_B_moebius_examples(ctx, golden):
    assert matches(B_moebius(2, 2, ctx), golden("Nksmu")[(2, 2)], ctx)
    assert matches(B_moebius(2, 1, ctx), golden("Nk1mu")[(2,)], ctx)
    with ctx.working():
        assert B_moebius(1, 1, ctx) == -B(1, 1, ctx)


@pytest.mark.parametrize("k", [1, 2])
def test_B_against_oracle(ctx, k):
    assert direct_weighted(k, 1, 10**7, "reciprocal_shift").contains(B(k, 1, ctx))
    assert direct_weighted(k, 2, 10**7, "reciprocal_shift", moebius=True).contains(B_moebius(k, 2, ctx))


def test_B_sum_rule(ctx):
    with ctx.working():
        total = mpmath.fsum(B(k, 2, ctx) for k in range(1, 41))
        assert abs(total - zeta_partial_fraction_sum(2, ctx)) < 1e-20


def test_B_routes(ctx):
    with ctx.working():
        for k in range(1, 5):
            for s in range(1, 5):
                assert rel(B(k, s, ctx), B_geometric(k, s, ctx)) <= ctx.series_tol
        for k, s in ((2, 1), (2, 2), (3, 4)):
            assert rel(B_alternating_hurwitz(k, s, ctx), B(k, s, ctx)) <= 10 * ctx.series_tol
    with pytest.raises(DomainError):
        B_alternating_hurwitz(1, 2)


def test_squared_prime_constant(ctx):
    value = squared_prime_constant(1, ctx)
    assert direct_weighted(1, 1, 10**5, "squared_prime").contains(value)
    with ctx.working():
        two = squared_prime_constant(2, ctx)
        tabulated = mpmath.mpf("0.030291458630973") - mpmath.mpf("0.0078387207792864")
        assert abs(two - tabulated) < 1e-15


def test_hurwitz_examples(ctx, golden):
    assert matches(hurwitz_almost_prime(1, 2, 0, ctx=ctx), golden("H0")[(1, 2)], ctx)
    assert matches(hurwitz_almost_prime(5, 6, 0, ctx=ctx), golden("H0")[(5, 6)], ctx)
    for k, s in ((1, 2), (5, 6)):
        with ctx.working():
            value = hurwitz_almost_prime_prime(k, s, 0, ctx=ctx)
            assert value < 0
            assert compare_digits(-value, golden("Hlog")[(k, s)])[0]


def test_hurwitz_normalisation(ctx):
    from apz.almost_prime import almost_prime_zeta_prime

    with ctx.working():
        for k, s in ((1, 2), (3, 2.5)):
            assert rel(hurwitz_almost_prime(k, s, 1, ctx=ctx), almost_prime_zeta(k, s, ctx)) < 1e-78
            assert rel(hurwitz_almost_prime_prime(k, s, 1, ctx=ctx), almost_prime_zeta_prime(k, s, ctx)) < 1e-78


def test_hurwitz_partition_of_zeta(ctx):
    # 1/2^2 + sum_k P_k(2, 2) = zeta(2, 2) = pi^2/6 - 1
    with ctx.working():
        total = mpmath.mpf(1) / 4 + mpmath.fsum(hurwitz_almost_prime(k, 2, 2, ctx=ctx) for k in range(1, 61))
        assert abs(total - (mpmath.pi ** 2 / 6 - 1)) < 1e-30


def test_hurwitz_moebius_variant_against_direct_sum():
    c = PrecisionContext(digits=20)
    sieve = build_sieve(10**5)
    ns = sieve.select(2, squarefree_only=True)
    with mpmath.workdps(30):
        direct = mpmath.fsum(1 / mpmath.mpf(int(n) - 0.5) ** 3 for n in ns)
        value = hurwitz_almost_prime(2, 3, 0.5, variant="moebius", ctx=c)
        assert abs(value - direct) < 1e-9


def test_hurwitz_derivative_real_s_matches_slope():
    c = PrecisionContext(digits=30)
    h = mpmath.mpf("1e-12")
    with c.working():
        s = mpmath.mpf("2.5")
        slope = (hurwitz_almost_prime(2, s + h, 0, ctx=c) - hurwitz_almost_prime(2, s - h, 0, ctx=c)) / (2 * h)
        assert rel(slope, hurwitz_almost_prime_prime(2, s, 0, ctx=c)) < 1e-15


def test_hurwitz_log_shift_oracle(ctx):
    value = -hurwitz_almost_prime_prime(1, 2, 0, ctx=ctx)
    assert direct_weighted(1, 2, 10**7, "log_shift").contains(value)


def test_hurwitz_domain():
    with pytest.raises(DomainError):
        hurwitz_almost_prime(1, 2, 3)
    with pytest.raises(DomainError):
        hurwitz_almost_prime(1, 1, 0)
    with pytest.raises(ValueError):
        hurwitz_almost_prime(1, 2, 0, variant="odd")
    # wider shifts are fine once 2^k exceeds |1 - a|
    assert hurwitz_almost_prime(3, 2, 5) > 0


def test_tau_values():
    assert tau(2, 2) == Fraction(3, 2)
    assert tau(2, 3) == Fraction(5, 2)
    assert tau(3, 3) == Fraction(-11, 6)
    assert tau(2, 4) == Fraction(7, 2)
    assert tau(3, 4) == Fraction(-13, 3)
    assert tau(4, 4) == Fraction(25, 12)
    with pytest.raises(ValueError):
        tau(1, 3)


@pytest.mark.parametrize("l", range(2, 9))
def test_tau_is_polynomial_part(l):
    # x + (1-x)^l log(1-x) = sum_{i=2}^l tau_{i,l} x^i + O(x^{l+1})
    coeffs = [Fraction(0)] * (l + 1)
    for i in range(1, l + 1):
        coeffs[i] -= Fraction(1, i)  # log(1-x)
    binom = [Fraction((-1) ** j * comb(l, j)) for j in range(l + 1)]
    series = [sum(binom[j] * coeffs[i - j] for j in range(0, i)) for i in range(l + 1)]
    series[1] += 1
    assert series[1] == 0
    for i in range(2, l + 1):
        assert tau(i, l) == series[i]
        assert (factorial(i) * tau(i, l)).denominator == 1


def test_L_examples(ctx, golden):
    assert matches(L(1, 1, ctx), golden("Lkl")[(1, 1)], ctx)
    assert matches(L(3, 4, ctx), golden("Lkl")[(3, 4)], ctx)
    with ctx.working():
        assert rel(L(1, 1, ctx) + prime_zeta_moment(1, ctx), prime_zeta_moment_total(ctx)) < 1e-76


def test_L_against_direct_sum():
    c = PrecisionContext(digits=20)
    sieve = build_sieve(10**5)
    with mpmath.workdps(30):
        terms = [1 / mpmath.mpf(int(n)) + (1 - 1 / mpmath.mpf(int(n))) ** 2 * mpmath.log(1 - 1 / mpmath.mpf(int(n)))
                 for n in sieve.select(2)]
        # terms are O(1/n^2), so the remainder beyond 10^5 is below about 1e-5
        assert abs(mpmath.fsum(terms) - L(2, 2, c)) < 1e-5


def test_log2_components(ctx, golden):
    for k in (1, 4):
        assert matches(log2_component(k, ctx), golden("log2parts")[(k,)], ctx)
    with ctx.working():
        total = mpmath.mpf(1) / 2 + mpmath.fsum(log2_component(k, ctx) for k in range(1, 9))
        assert 0 <= mpmath.log(2) - total < 2 ** -256
    with pytest.raises(ResourceError):
        log2_component(2, ctx, sieve=build_sieve(50))


@pytest.mark.parametrize("k, expected", [(1, Fraction(1)), (2, Fraction(1, 4)), (5, Fraction(1, 600))])
def test_factorial_identity(ctx, k, expected):
    with ctx.working():
        value = factorial_reciprocal_identity(k, ctx)
        assert rel(value, mpmath.mpf(expected.numerator) / expected.denominator) < 1e-75


def test_moebius_B_k4_magnitude_from_direct_sum(ctx, golden):
    # the published k=4 row carries a power-of-ten tag one too small; the
    # mantissa digits agree, and a direct sum pins the magnitude
    r = direct_weighted(4, 1, 10**7, "reciprocal_shift", moebius=True)
    value = B_moebius(4, 1, ctx)
    assert r.contains(value)
    with ctx.working():
        printed = compare_digits(value, golden("Nk1mu")[(4,)])[1]
        assert printed.digits == golden("Nk1mu")[(4,)].lstrip(".")[:62]
        assert printed.exponent == -3


@pytest.mark.parametrize("k", [15, 20, 25])
def test_moebius_B_deep_rows_stable_under_precision_and_method(ctx, k):
    wide = PrecisionContext(digits=110)
    with wide.working():
        reference = B_moebius(k, 1, wide)
        # second route: sum_l P_k^mu(2 + l) with each term from the partition sum
        terms, t = [], 2
        while not terms or abs(terms[-1]) > abs(reference) * mpmath.mpf(10) ** -130:
            terms.append(almost_prime_zeta_moebius(k, t, wide, method="partitions"))
            t += 1
        assert rel(reference, mpmath.fsum(terms)) < 1e-100
    assert rel(B_moebius(k, 1, ctx), reference) < 1e-78
