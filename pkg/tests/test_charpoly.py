import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from mcgpairs.charpoly import char_poly, char_poly_mod, is_reciprocal, poly_eval, poly_mul, poly_str
from mcgpairs.nielsen import PRIMES


def bareiss_det(rows):
    """Fraction-free determinant, used as an independent oracle."""
    A = [list(r) for r in rows]
    n = len(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[-1][-1]


square = st.integers(1, 7).flatmap(
    lambda n: st.lists(st.lists(st.integers(-30, 30), min_size=n, max_size=n), min_size=n, max_size=n))


@given(square)
def test_against_determinant_at_points(M):
    p = char_poly(M)
    n = len(M)
    for x in (-3, 0, 2, 11):
        shifted = [[(x if i == j else 0) - M[i][j] for j in range(n)] for i in range(n)]
        assert poly_eval(p, x) == bareiss_det(shifted)


@given(square)
def test_against_sympy(M):
    lam = sympy.Symbol("lam")
    expected = sympy.Matrix(M).charpoly(lam).all_coeffs()
    assert list(char_poly(M)) == [int(c) for c in expected]


@given(square)
def test_modular_agrees(M):
    for p in PRIMES:
        assert char_poly_mod(np.array(M), p) == tuple(c % p for c in char_poly(M))


def test_primes_are_prime():
    assert all(sympy.isprime(p) and p < 2 ** 28 for p in PRIMES)


def test_known_values():
    assert char_poly([[1, 1], [0, 1]]) == (1, -2, 1)
    assert char_poly(np.identity(16, dtype=int)) == tuple(sympy.Poly((sympy.Symbol("x") - 1) ** 16).all_coeffs())
    assert char_poly([[0, -1], [1, 0]]) == (1, 0, 1)


def test_helpers():
    assert is_reciprocal((1, -3, 1)) and not is_reciprocal((1, -3, -1))
    assert poly_mul((1, -1), (1, 1)) == (1, 0, -1)
    assert poly_str((1, -3, 1)) == "x^2 - 3x + 1"
    assert poly_str((0,)) == "0"


def test_non_square():
    with pytest.raises(ValueError):
        char_poly([[1, 2, 3], [4, 5, 6]])
