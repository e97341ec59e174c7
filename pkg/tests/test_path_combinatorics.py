import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pam_moments.errors import DomainError, SizeError, ValidationError
from pam_moments.path_combinatorics import (
    ExponentVector,
    LatticePath,
    diagonal_touch_points,
    enumerate_exponent_vectors,
    expand_and_verify_identity,
    exponent_matrix,
    exponent_of,
    move_down,
    path_of,
)


def test_cardinality_is_2_pow_n_minus_1():
    for n in range(1, 17):
        assert len(enumerate_exponent_vectors(n)) == 2 ** (n - 1)


def test_n1_convention():
    assert [tuple(a) for a in enumerate_exponent_vectors(1)] == [(1,)]


def test_n4_digit_strings():
    got = ["".join(map(str, a)) for a in enumerate_exponent_vectors(4)]
    assert got == ["1111", "1120", "1201", "1210", "2011", "2020", "2101", "2110"]


def test_enumeration_sorted_and_unique():
    for n in (3, 6, 9):
        vecs = [tuple(a) for a in enumerate_exponent_vectors(n)]
        assert vecs == sorted(set(vecs))


def test_structural_invariants():
    # entries in {0,1,2}, first entry >= 1, total sum n, partial sums
    # stay ahead of the diagonal
    for n in (2, 5, 8, 11):
        for a in enumerate_exponent_vectors(n):
            t = tuple(a)
            assert all(v in (0, 1, 2) for v in t)
            assert t[0] >= 1
            assert sum(t) == n
            run = 0
            for k, v in enumerate(t, start=1):
                run += v
                assert run >= k


def test_validation_rejects_outsiders():
    for bad in [(0, 2), (1, 1, 2), (3, 0, 0), (2, 2, -1), (1, 0, 2)]:
        with pytest.raises(ValidationError):
            ExponentVector(bad)


def test_size_cap():
    with pytest.raises(SizeError):
        enumerate_exponent_vectors(25)


def test_identity_exact_small_cases():
    # n = 2: x1 (x2 + x1) = x1 x2 + x1^2 <-> A_2 = {(1,1), (2,0)}
    lhs, rhs = expand_and_verify_identity([Fraction(3, 7), Fraction(5, 2)])
    assert lhs == rhs == Fraction(3, 7) * Fraction(5, 2) + Fraction(9, 49)


def test_identity_random_rationals():
    rng = random.Random(99)
    for n in range(2, 13):
        for _ in range(25):
            xs = [Fraction(rng.randint(1, 15), rng.randint(1, 15)) for _ in range(n)]
            lhs, rhs = expand_and_verify_identity(xs)
            assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(
    st.lists(
        st.fractions(min_value=Fraction(1, 50), max_value=Fraction(50)),
        min_size=2,
        max_size=9,
    )
)
def test_identity_property(xs):
    lhs, rhs = expand_and_verify_identity(xs)
    assert lhs == rhs


def test_exponent_matrix_matches_enumeration():
    m = exponent_matrix(6)
    vecs = enumerate_exponent_vectors(6)
    assert m.shape == (32, 6)
    assert [tuple(r) for r in m.tolist()] == [tuple(a) for a in vecs]


def test_path_bijection_roundtrip_n8():
    for a in enumerate_exponent_vectors(8):
        p = path_of(a)
        assert isinstance(p, LatticePath)
        assert tuple(exponent_of(p)) == tuple(a)


def test_path_heights_law():
    # h_1 = 1 and h_{k+1} = h_k + 2 - a_k, with h_k in {k, k+1}
    for a in enumerate_exponent_vectors(7):
        h = path_of(a).heights
        assert h[0] == 1
        for k in range(1, len(h)):
            assert h[k] == h[k - 1] + 2 - a[k - 1]
            assert h[k] in (k, k + 1)


def test_touch_points_example():
    assert diagonal_touch_points((2, 0, 1, 1)) == [2, 3]
    # the all-ones path runs along the diagonal, every interior index works
    assert diagonal_touch_points((1,) * 6) == [1, 2, 3, 4, 5]
    # the bottom path never returns to the diagonal
    assert diagonal_touch_points((2, 1, 1, 0)) == []


def test_move_down_endpoint_rule():
    # touching at i = n-1 moves mass from the last slot to the previous one
    a = (2, 0, 1, 1)
    assert tuple(move_down(a, 3)) == (2, 0, 2, 0)
    assert tuple(move_down(a, 2)) == (2, 1, 0, 1)


def test_move_down_stays_in_family():
    for n in range(2, 11):
        members = {tuple(a) for a in enumerate_exponent_vectors(n)}
        for a in enumerate_exponent_vectors(n):
            for i in diagonal_touch_points(a):
                assert tuple(move_down(a, i)) in members


def test_move_down_rejects_non_touch_points():
    with pytest.raises(DomainError):
        move_down((2, 1, 1, 0), 2)


def test_all_ones_reachable_to_everything():
    # repeatedly undoing moves: every member is reachable from all-ones by
    # a chain of legal moves (BFS over the move graph)
    for n in range(2, 11):
        members = {tuple(a) for a in enumerate_exponent_vectors(n)}
        seen = {(1,) * n}
        frontier = [(1,) * n]
        while frontier:
            nxt = []
            for a in frontier:
                for i in diagonal_touch_points(a):
                    b = tuple(move_down(a, i))
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        assert seen == members
