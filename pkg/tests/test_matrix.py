import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nnru.errors import DimensionError, NotInvertibleError
from nnru.matrix import (
    MulCounter,
    identity_matrix,
    is_short,
    mat_add,
    mat_centered_l2,
    mat_coeff_std,
    mat_inverse_mod_2e,
    mat_inverse_mod_prime,
    mat_mul,
    mat_mul_strassen,
    mat_reduce,
    mat_sub,
    mat_width_inf,
    scalar_matrix,
    zero_matrix,
)
from nnru.ring import ring_mul_schoolbook
from nnru.scheme import sample_key_matrix
from nnru.streams import derive_rng


def naive_mat_mul(A, B):
    k, _, n = A.shape
    out = np.zeros_like(A)
    for i in range(k):
        for j in range(k):
            for l in range(k):
                for s in range(n):
                    for t in range(n):
                        out[i, j, (s + t) % n] += A[i, l, s] * B[l, j, t]
    return out


@st.composite
def matrices(draw, max_k=4, max_n=6, count=2, lo=-20, hi=20):
    k = draw(st.integers(1, max_k))
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    return tuple(rng.integers(lo, hi + 1, size=(k, k, n)) for _ in range(count))


@given(matrices())
def test_mul_matches_naive(pair):
    A, B = pair
    expected = naive_mat_mul(A, B)
    np.testing.assert_array_equal(mat_mul(A, B), expected)
    np.testing.assert_array_equal(mat_mul(A, B, mul=ring_mul_schoolbook), expected)


@given(matrices(count=3))
def test_ring_axioms(triple):
    A, B, C = triple
    np.testing.assert_array_equal(mat_mul(mat_mul(A, B), C), mat_mul(A, mat_mul(B, C)))
    np.testing.assert_array_equal(mat_mul(A, mat_add(B, C)), mat_add(mat_mul(A, B), mat_mul(A, C)))
    np.testing.assert_array_equal(mat_sub(mat_add(A, B), B), A)
    k, _, n = A.shape
    np.testing.assert_array_equal(mat_add(A, zero_matrix(k, n)), A)
    np.testing.assert_array_equal(mat_add(A, -A), zero_matrix(k, n))
    np.testing.assert_array_equal(mat_mul(A, identity_matrix(k, n)), A)
    np.testing.assert_array_equal(mat_mul(identity_matrix(k, n), A), A)


def test_matrix_ring_is_not_commutative():
    rng = np.random.default_rng(0)
    A, B = rng.integers(-3, 4, size=(2, 2, 2, 5))
    assert not np.array_equal(mat_mul(A, B), mat_mul(B, A))


def test_dimension_errors():
    with pytest.raises(DimensionError):
        mat_add(zero_matrix(2, 3), zero_matrix(2, 4))
    with pytest.raises(DimensionError):
        mat_mul(zero_matrix(2, 3), zero_matrix(3, 3))


@settings(max_examples=60)
@given(matrices(max_k=8, max_n=5))
def test_strassen_matches_mat_mul(pair):
    A, B = pair
    if A.shape[0] < 2:
        return
    np.testing.assert_array_equal(mat_mul_strassen(A, B), mat_mul(A, B))
    k, _, n = A.shape
    np.testing.assert_array_equal(mat_mul_strassen(A, identity_matrix(k, n)), A)


@pytest.mark.parametrize("k,expected", [(2, 7), (3, 49), (4, 49), (8, 343)])
def test_strassen_multiplication_count(k, expected):
    A = np.ones((k, k, 3), dtype=np.int64)
    counter = MulCounter()
    mat_mul_strassen(A, A, counter=counter)
    assert counter.count == expected
    if k & (k - 1) == 0:
        assert expected == 7 ** int(math.log2(k))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_schoolbook_multiplication_count(k):
    A = np.ones((k, k, 3), dtype=np.int64)
    counter = MulCounter()
    mat_mul(A, A, counter=counter)
    assert counter.count == k**3


def test_reduce_examples():
    assert not mat_reduce(zero_matrix(2, 3), 8, centered=True).any()
    assert (mat_reduce(np.full((2, 2, 3), 7), 8, centered=True) == -1).all()


def test_inverse_examples():
    I = identity_matrix(3, 5)
    np.testing.assert_array_equal(mat_inverse_mod_prime(I, 3), I)
    np.testing.assert_array_equal(mat_inverse_mod_2e(I, 11), I)
    A = sample_key_matrix(2, 5, 2, derive_rng(0))
    A[1] = 0
    with pytest.raises(NotInvertibleError):
        mat_inverse_mod_prime(A, 3)
    with pytest.raises(NotInvertibleError):
        mat_inverse_mod_2e(scalar_matrix(2, 5, 2), 8)


@settings(max_examples=40)
@given(st.integers(1, 4), st.sampled_from([5, 7, 11, 13]), st.integers(0, 2**32 - 1))
def test_inverses_are_two_sided(k, n, seed):
    A = sample_key_matrix(k, n, 2, derive_rng(seed))
    I = identity_matrix(k, n)
    for prime in (2, 3, 257):
        try:
            B = mat_inverse_mod_prime(A, prime)
        except NotInvertibleError:
            continue
        np.testing.assert_array_equal(mat_reduce(mat_mul(A, B), prime), I)
        np.testing.assert_array_equal(mat_reduce(mat_mul(B, A), prime), I)
    try:
        B = mat_inverse_mod_2e(A, 11)
    except NotInvertibleError:
        return
    np.testing.assert_array_equal(mat_reduce(mat_mul(A, B), 2048), I)
    np.testing.assert_array_equal(mat_reduce(mat_mul(B, A), 2048), I)


def test_non_invertible_mod_prime_has_no_inverse_by_determinant():
    # k = 2, n = 1: the ring is F_3 and invertibility is det != 0
    A = np.array([[[1], [2]], [[2], [1]]])  # det = 1 - 4 = -3 = 0 mod 3
    with pytest.raises(NotInvertibleError):
        mat_inverse_mod_prime(A, 3)
    A = np.array([[[1], [1]], [[2], [1]]])  # det = -1
    B = mat_inverse_mod_prime(A, 3)
    np.testing.assert_array_equal(mat_reduce(mat_mul(A, B), 3), identity_matrix(2, 1))


def test_width_examples():
    assert mat_width_inf(zero_matrix(2, 3)) == 0
    A = zero_matrix(2, 2)
    A[0, 1] = [2, -1]
    assert mat_width_inf(A) == 3
    assert mat_width_inf(np.full((2, 2, 4), 5)) == 0


def test_is_short_examples():
    A = sample_key_matrix(3, 7, 2, derive_rng(1))
    assert is_short(A, 3)
    assert is_short(zero_matrix(2, 4), 3)
    B = zero_matrix(1, 2)
    B[0, 0] = [-3, 3]
    assert not is_short(B, 3)


def test_centered_norm_examples():
    assert mat_centered_l2(zero_matrix(2, 3)) == 0
    assert mat_centered_l2(np.array([[[1, -1]]])) == pytest.approx(math.sqrt(2))
    assert mat_centered_l2(np.array([[[3, 1]]])) == pytest.approx(math.sqrt(2))


@given(matrices(count=1), st.integers(-1000, 1000))
def test_centered_norm_matches_definition(single, shift):
    (A,) = single
    # one mean over all n k^2 coefficients
    expected = math.sqrt(((A - A.mean()) ** 2).sum())
    assert mat_centered_l2(A) == pytest.approx(expected, rel=1e-9, abs=1e-9)
    assert mat_centered_l2(A + shift) == pytest.approx(mat_centered_l2(A), rel=1e-9, abs=1e-9)
    assert mat_coeff_std(A) == pytest.approx(float(np.std(A)), rel=1e-9, abs=1e-9)
