import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lie2coh.exactla import (Matrix, alternating_expansion, enumerate_combos, inverse, kernel_basis,
                             permutation_sign, rank, rank_cross_check, solve, to_rational)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    return Matrix.from_rows([[draw(rationals) for _ in range(c)] for _ in range(r)], c)


def test_parse_rationals():
    assert to_rational("3/6") == Fraction(1, 2)
    assert to_rational(" -4 ") == -4
    with pytest.raises(TypeError):
        to_rational(0.5)
    with pytest.raises(TypeError):
        to_rational(True)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_nullity_and_kernel(m):
    ker = kernel_basis(m)
    assert len(ker) + rank(m) == m.cols
    for v in ker:
        assert not any(m.apply(v))


@settings(max_examples=60, deadline=None)
@given(matrices(), st.integers(0, 2 ** 16))
def test_rank_agrees_modulo_random_primes(m, seed):
    assert rank_cross_check(m, random.Random(seed))


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_solve_reproduces_image(m):
    x = [Fraction(k - 1, 2) for k in range(m.cols)]
    b = m.apply(x)
    y = solve(m, b)
    assert y is not None and m.apply(y) == b


def test_solve_detects_inconsistency():
    m = Matrix.from_rows([[1, 2], [2, 4]])
    assert solve(m, [1, 3]) is None


def test_inverse_of_hilbert_matrix_is_exact():
    n = 4
    h = Matrix.from_rows([[Fraction(1, i + j + 1) for j in range(n)] for i in range(n)])
    assert h @ inverse(h) == Matrix.identity(n)
    assert inverse(Matrix.from_rows([[1, 2], [2, 4]])) is None


def test_combinatorics():
    assert enumerate_combos(4, 2) == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    assert permutation_sign([2, 1, 0]) == -1
    assert permutation_sign([1, 2, 0]) == 1
    # e1 ^ e0 = -(e0 ^ e1)
    assert alternating_expansion([[0, 1], [1, 0]]) == {(0, 1): -1}
