"""Tests for exact rational linear algebra."""

from fractions import Fraction as F

import pytest
from sympy import Matrix, Rational

from frechet.errors import ValidationError
from frechet.utils.linalg import (
    IncrementalBasis,
    RatMatrix,
    format_rat,
    integer_rank,
    null_space,
    parse_rat,
    rank,
    rref,
    solve,
)


def _sympy(matrix: RatMatrix) -> Matrix:
    return Matrix(
        [[Rational(x.numerator, x.denominator) for x in row] for row in matrix.to_rows()]
    )


@pytest.mark.parametrize(
    "text, value",
    [("3", F(3)), ("-2/4", F(-1, 2)), (" 7 / 3 ", F(7, 3)), ("+0", F(0)), ("10/5", F(2))],
)
def test_parse_rat(text, value):
    assert parse_rat(text) == value


@pytest.mark.parametrize("text", ["", "1/0", "a/b", "1.5", "2/-3", "1//2"])
def test_parse_rat_rejects(text):
    with pytest.raises(ValidationError) as info:
        parse_rat(text)
    assert info.value.constraint == "rational"


def test_format_rat():
    assert format_rat(F(4, 2)) == "2"
    assert format_rat(F(-3, 9)) == "-1/3"
    assert format_rat(F(0)) == "0"


def test_rank_against_sympy():
    m = RatMatrix.from_rows([[1, 2, 3], [2, 4, 6], [F(1, 2), 0, -1], [0, 1, F(2, 3)]])
    assert rank(m) == _sympy(m).rank()


def test_rank_of_zero_and_empty():
    assert rank(RatMatrix.from_rows([[0, 0], [0, 0]])) == 0
    assert integer_rank([]) == 0


def test_integer_rank_large_entries():
    rows = [[10**12, 3, 7], [2 * 10**12, 6, 14], [1, 1, 1]]
    assert integer_rank(rows) == 2


def test_rref_pivots():
    m = RatMatrix.from_rows([[0, 2, 4], [1, 1, 1], [1, 3, 5]])
    reduced, pivots = rref(m)
    assert pivots == [0, 1]
    expected = _sympy(m).rref()[0]
    for i, row in enumerate(reduced):
        assert [Rational(x.numerator, x.denominator) for x in row] == list(expected.row(i))


def test_null_space_is_canonical_and_annihilates():
    m = RatMatrix.from_rows([[1, 1, 1, 1], [0, 1, 2, 3]])
    basis = null_space(m)
    assert basis == [(F(1), F(-2), F(1), F(0)), (F(2), F(-3), F(0), F(1))]
    for vec in basis:
        assert m.mul_vector(vec) == (0, 0)


def test_null_space_full_rank_is_empty():
    assert null_space(RatMatrix.identity(3)) == []


def test_solve_consistent():
    m = RatMatrix.from_rows([[1, 1], [1, -1]])
    assert solve(m, [3, 1]) == (F(2), F(1))


def test_solve_free_variables_are_zero():
    m = RatMatrix.from_rows([[1, 1, 1]])
    assert solve(m, [5]) == (F(5), F(0), F(0))


def test_solve_inconsistent_returns_none():
    m = RatMatrix.from_rows([[1, 1], [2, 2]])
    assert solve(m, [1, 3]) is None


def test_submatrix_and_vstack():
    m = RatMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
    sub = m.submatrix([1], [0, 2])
    assert sub.to_rows() == [[4, 6]]
    stacked = m.vstack(RatMatrix.identity(3))
    assert stacked.rows == 5
    assert stacked.row(4) == (0, 0, 1)


def test_ragged_rows_rejected():
    with pytest.raises(ValidationError):
        RatMatrix.from_rows([[1, 2], [3]])


def test_incremental_basis_relation():
    basis = IncrementalBasis()
    for column in [(1, 0, 1), (0, 1, 1)]:
        residual, combo = basis.reduce(column)
        assert any(residual)
        basis = basis.extend(residual, combo)
    residual, combo = basis.reduce((2, 3, 5))
    assert not any(residual)
    # 2*c1 + 3*c2 - c3 = 0 up to a common factor.
    weights = [F(x, combo[-1]) for x in combo]
    assert weights == [F(-2), F(-3), F(1)]
