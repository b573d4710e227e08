from math import factorial

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apz.partitions import (
    cycle_index_eval,
    cycle_index_explicit,
    cycle_type_weight,
    partitions_of,
)

from conftest import rel

PARTITION_COUNTS = [1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]


@pytest.mark.parametrize(
    "k, weights", [(1, [1]), (2, [1, 1]), (3, [1, 3, 2]), (4, [1, 6, 3, 8, 6])]
)
def test_small_weight_sets(k, weights):
    assert sorted(p.weight for p in partitions_of(k)) == sorted(weights)


@pytest.mark.parametrize("k", range(1, 13))
def test_weights_count_permutations(k):
    parts = partitions_of(k)
    assert sum(p.weight for p in parts) == factorial(k)
    assert len(parts) == PARTITION_COUNTS[k - 1]
    for p in parts:
        assert sum(p.cycle_lengths()) == k


def test_weight_formula():
    # transpositions in S_5: one 2-cycle, three fixed points
    assert cycle_type_weight((3, 1, 0, 0, 0)) == 10


def test_range():
    with pytest.raises(ValueError):
        partitions_of(0)
    with pytest.raises(ValueError):
        partitions_of(65)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=1, max_value=12), st.floats(min_value=-3, max_value=3))
def test_recurrence_matches_explicit(k, a):
    def x(m):
        return mpmath.mpf(a) / m + mpmath.mpf(1) / (m * m + 1)

    r = cycle_index_eval(k, x)
    e = cycle_index_explicit(k, x)
    assert abs(r - e) <= 1e-60 * max(1, abs(e))


def test_all_ones_gives_one():
    # Z(S_k)(1, 1, ...) counts orbits: exactly one
    for k in range(1, 15):
        assert rel(cycle_index_eval(k, lambda m: mpmath.mpf(1)), 1) < 1e-70
