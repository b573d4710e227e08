import mpmath
import pytest

from apz.almost_prime import almost_prime_zeta
from apz.constants import log2_component
from apz.errors import DomainError, ResourceError
from apz.formatting import parse_paper_style
from apz.oracle import DEFAULT_ORACLE_LIMIT, direct_Pk, direct_Pk_moebius, direct_weighted
from apz.sieve import build_sieve, primes_up_to
from apz.tables import compare_digits
from apz.zeta_core import PrecisionContext


def tabulated(golden, name, key):
    return parse_paper_style(golden(name)[key]).to_mpf()


def test_small_explicit_sum():
    r = direct_Pk(1, 4, 100)
    with mpmath.workdps(30):
        expected = mpmath.fsum(mpmath.mpf(p) ** -4 for p in primes_up_to(100))
        assert r.terms_used == 25
        assert abs(r.partial_sum - expected) < 1e-28
        assert abs(r.tail_bound - mpmath.mpf(100) ** -3 / 3) < 1e-36


def test_semiprimes_at_default_limit(golden):
    r = direct_Pk(2, 2)
    with mpmath.workdps(30):
        assert abs(r.partial_sum - tabulated(golden, "Pk", (2, 2))) < 1e-7
        assert r.contains(tabulated(golden, "Pk", (3, 2))) is False
    assert direct_Pk(3, 2).contains(tabulated(golden, "Pk", (3, 2)))


def test_moebius_examples(golden):
    r = direct_Pk_moebius(2, 2)
    with mpmath.workdps(30):
        assert abs(r.partial_sum - tabulated(golden, "Pkmu", (2, 2))) < 1e-7
    assert direct_Pk_moebius(4, 3, 10**6).contains(tabulated(golden, "Pkmu", (4, 3)))
    a, b = direct_Pk(1, 3, 10**5), direct_Pk_moebius(1, 3, 10**5)
    with mpmath.workdps(60):
        assert a.partial_sum == -b.partial_sum


def test_weighted_examples(golden):
    b = direct_weighted(1, 1, DEFAULT_ORACLE_LIMIT, "reciprocal_shift")
    with mpmath.workdps(30):
        assert abs(b.partial_sum - tabulated(golden, "Nk1", (1,))) < 2e-7
    h = direct_weighted(1, 2, DEFAULT_ORACLE_LIMIT, "log_shift")
    assert h.contains(tabulated(golden, "Hlog", (1, 2)))


def test_log2_component_to_full_precision(golden):
    c = PrecisionContext(digits=64)
    r = direct_weighted(2, 0, 500, "pow2", ctx=c)
    with c.working():
        assert compare_digits(r.partial_sum, golden("log2parts")[(2,)])[0]
        assert abs(r.partial_sum - log2_component(2, c)) <= r.tail_bound + c.series_tol


def test_partial_sums_grow_with_N():
    sieve = build_sieve(10**5)
    sums = [direct_Pk(2, 2, n, sieve=sieve).partial_sum for n in (100, 1000, 10**4, 10**5)]
    assert all(a <= b for a, b in zip(sums, sums[1:]))


def test_bracket_shrinks_onto_accelerated_value():
    value = almost_prime_zeta(2, 3)
    sieve = build_sieve(10**5)
    for n in (10**3, 10**4, 10**5):
        assert direct_Pk(2, 3, n, sieve=sieve).contains(value)


def test_errors():
    sieve = build_sieve(1000)
    with pytest.raises(ResourceError):
        direct_Pk(2, 2, 5000, sieve=sieve)
    with pytest.raises(DomainError):
        direct_Pk(2, 1, 100)
    with pytest.raises(ValueError):
        direct_weighted(2, 2, 100, "cubic")
    with pytest.raises(DomainError):
        direct_weighted(2, 2, 100, "squared_prime")
