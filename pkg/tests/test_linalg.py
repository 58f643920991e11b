from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from defcat.linalg import Field
from oracles import rank_mod_p, rank_rational

F5, Q = Field(5), Field(0)


def matrices(max_side=5, lo=-4, hi=4):
    return st.integers(1, max_side).flatmap(
        lambda r: st.integers(1, max_side).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)))


@given(matrices())
def test_rank_matches_plain_elimination_mod_5(rows):
    assert F5.rank(F5.array(rows)) == rank_mod_p(rows, 5)


@given(matrices(4))
def test_rank_matches_plain_elimination_over_q(rows):
    assert Q.rank(Q.array(rows)) == rank_rational(rows)


@pytest.mark.parametrize("field", [F5, Q], ids=["F5", "Q"])
@given(rows=matrices())
def test_nullspace_is_kernel_with_complementary_dimension(field, rows):
    a = field.array(rows)
    ns = field.nullspace(a)
    assert field.is_zero(field.dot(a, ns))
    assert ns.shape[1] + field.rank(a) == a.shape[1]
    assert field.rank(ns) == ns.shape[1]


@pytest.mark.parametrize("field", [F5, Q], ids=["F5", "Q"])
@given(seed=st.integers(0, 10_000), n=st.integers(1, 5))
def test_inverse_is_two_sided(field, seed, n):
    rng = np.random.default_rng(seed)
    a = field.random(rng, (n, n))
    inv = field.inverse(a)
    if field.rank(a) < n:
        assert inv is None
    else:
        assert np.array_equal(field.dot(a, inv), field.eye(n))
        assert np.array_equal(field.dot(inv, a), field.eye(n))


@pytest.mark.parametrize("field", [F5, Q], ids=["F5", "Q"])
@given(seed=st.integers(0, 10_000))
def test_solve_returns_solution_when_consistent(field, seed):
    rng = np.random.default_rng(seed)
    a = field.random(rng, (3, 4))
    x = field.random(rng, 4)
    b = field.dot(a, x)
    y = field.solve(a, b)
    assert y is not None and np.array_equal(field.dot(a, y), b)


@given(seed=st.integers(0, 10_000))
def test_rational_einsum_agrees_with_fraction_einsum(seed):
    rng = np.random.default_rng(seed)
    a = Q.array([[Fraction(int(rng.integers(-9, 9)), int(rng.integers(1, 7))) for _ in range(3)] for _ in range(4)])
    b = Q.array(rng.integers(-5, 5, size=(3, 2, 2)))
    got = Q.einsum("ij,jkl->ikl", a, b)
    want = np.einsum("ij,jkl->ikl", a, b)
    assert np.array_equal(got, want)


def test_rational_einsum_handles_large_entries_without_overflow():
    big = Q.array([[Fraction(2 ** 61 + 1, 3), Fraction(-(2 ** 60), 7)]])
    col = Q.array([[Fraction(2 ** 62 - 1, 5)], [Fraction(3, 2 ** 40)]])
    assert np.array_equal(Q.dot(big, col), big @ col)


@given(seed=st.integers(0, 10_000))
def test_pairwise_einsum_mod_p_matches_numpy(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (F5.random(rng, s) for s in [(3, 4), (4, 2, 3), (3, 2)])
    got = F5.einsum("ij,jkl,lm->ikm", a, b, c)
    assert np.array_equal(got, np.einsum("ij,jkl,lm->ikm", a, b, c) % 5)


def test_field_rejects_composite_characteristic():
    with pytest.raises(ValueError):
        Field(6)


def test_fractions_reduce_into_prime_field():
    assert F5.scalar(Fraction(1, 2)) == 3
    assert F5.inv(2) == 3
    with pytest.raises(ZeroDivisionError):
        Q.inv(0)
