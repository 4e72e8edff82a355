from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alpha_cut.exact import (
    DimensionError,
    affine_rank,
    det,
    format_rational,
    null_vector,
    orient,
    segment_flat_intersection,
    solve_linear,
    to_rational,
)

small = st.integers(-20, 20)
rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


def test_det_examples():
    assert det([[1, 0], [0, 1]]) == 1
    assert det([[0, 1], [1, 0]]) == -1
    assert det([[0, 1, Fraction(1, 2)], [0, 0, 2], [1, 1, 1]]) == 2
    assert det([]) == 1


def test_det_rejects_non_square():
    with pytest.raises(DimensionError):
        det([[1, 2, 3], [4, 5, 6]])


def test_affine_rank_examples():
    assert affine_rank([(1, 1)]) == 0
    assert affine_rank([(0, 0, 0), (1, 0, 0), (2, 0, 0)]) == 1
    assert affine_rank([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]) == 3
    with pytest.raises(ValueError):
        affine_rank([])


def test_solve_linear_examples():
    assert solve_linear([[1, 0], [0, 1]], [3, 4]) == [3, 4]
    assert solve_linear([[1, 1], [1, 1]], [1, 2]) is None
    # segment (0,0)->(1,1) against the line x + y = 1, as λ·(1,1) on the line
    assert solve_linear([[1, -1], [1, 1]], [0, 1]) == [Fraction(1, 2), Fraction(1, 2)]


def test_segment_flat_examples():
    x_axis = ((0, 0), [(1, 0)])
    assert segment_flat_intersection((0, -1), (0, 1), x_axis) == ((0, 0), Fraction(1, 2))
    assert segment_flat_intersection((0, 1), (1, 2), x_axis) is None
    z, lam = segment_flat_intersection((0, 0), (3, 3), ((0, 2), [(3, -2)]))
    assert lam == Fraction(2, 5) and z == (Fraction(6, 5), Fraction(6, 5))
    assert segment_flat_intersection((0, 0), (2, 0), x_axis) == "contained"
    with pytest.raises(ValueError):
        segment_flat_intersection((1, 1), (1, 1), x_axis)


def test_rationals_parse_and_print():
    assert to_rational("3/6") == Fraction(1, 2)
    assert to_rational("4/2") == 2 and isinstance(to_rational("4/2"), int)
    assert format_rational(Fraction(-3, 4)) == "-3/4"
    assert format_rational(Fraction(8, 4)) == "2"
    for bad in ("7/0", "x", True, 1.5):
        with pytest.raises(ValueError):
            to_rational(bad)


@given(square(3), st.integers(0, 2), st.integers(0, 2))
def test_det_flips_sign_on_column_swap(m, i, j):
    swapped = [list(row) for row in m]
    for row in swapped:
        row[i], row[j] = row[j], row[i]
    assert det(swapped) == (det(m) if i == j else -det(m))


@given(square(3), square(3))
def test_det_is_multiplicative(a, b):
    prod = [[sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    assert det(prod) == det(a) * det(b)


@given(st.lists(st.tuples(small, small, small), min_size=1, max_size=6), st.tuples(small, small, small))
def test_affine_rank_ignores_translation(pts, shift):
    moved = [tuple(a + b for a, b in zip(p, shift)) for p in pts]
    assert affine_rank(moved) == affine_rank(pts)
    assert affine_rank(pts) <= min(3, len(pts) - 1)


@given(square(3), st.lists(rationals, min_size=3, max_size=3))
def test_solve_linear_is_exact(a, b):
    sol = solve_linear(a, b)
    if det(a) == 0:
        return
    assert [sum(Fraction(c) * x for c, x in zip(row, sol)) for row in a] == b


@settings(max_examples=50)
@given(st.lists(st.tuples(small, small), min_size=4, max_size=4))
def test_null_vector_is_an_affine_dependence(pts):
    rows = [[p[k] for p in pts] for k in range(2)] + [[1] * 4]
    v = null_vector(rows)
    assert any(v)
    assert all(sum(c * x for c, x in zip(row, v)) == 0 for row in rows)


def test_orient_matches_turn_direction():
    assert orient([(0, 0), (1, 0), (0, 1)]) > 0
    assert orient([(0, 0), (0, 1), (1, 0)]) < 0
    assert orient([(0, 0), (1, 1), (2, 2)]) == 0
