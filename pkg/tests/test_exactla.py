from fractions import Fraction

import pytest

from services.exactla import (
    Matrix, Subspace, determinant, image, intersect, kernel, quotient, rank, rref, solve, sum_spaces,
    vector,
)
from utils.exceptions import InputError, ParseError


def test_span_is_canonical():
    a = Subspace.span(3, [(1, 2, 3), (2, 4, 6), (0, 1, 1)])
    b = Subspace.span(3, [(0, 1, 1), (1, 3, 4)])
    assert a == b
    assert a.basis == ((1, 0, 1), (0, 1, 1))
    assert a.pivots == (0, 1)


def test_rref_and_rank():
    m = Matrix.from_rows([[1, 2, 1], [2, 4, 0], [3, 6, 1]])
    reduced, pivots = rref(m)
    assert pivots == (0, 2)
    assert reduced.row(0) == (1, 2, 0)
    assert rank(m) == 2


def test_inverse_and_determinant_are_exact():
    m = Matrix.from_rows([["1/2", 1], [1, 3]])
    assert determinant(m) == Fraction(1, 2)
    inv = m.inverse()
    assert inv == Matrix.from_rows([[6, -2], [-2, 1]])
    assert m @ inv == Matrix.identity(2)


def test_singular_inverse_raises():
    with pytest.raises(InputError):
        Matrix.from_rows([[1, 2], [2, 4]]).inverse()


def test_solve_consistent_and_inconsistent():
    a = Matrix.from_rows([[1, 1], [2, 2]])
    assert solve(a, (1, 3)) is None
    solution = solve(a, (1, 2))
    assert solution.particular == (1, 0)
    assert solution.kernel.dim == 1
    assert solution.kernel.contains((1, -1))


def test_rank_nullity():
    m = Matrix.from_rows([[1, 0, 2, -1], [0, 1, 1, 1], [1, 1, 3, 0]])
    assert kernel(m).dim + image(m).dim == 4
    for v in kernel(m).basis:
        assert m.apply(v) == (0, 0, 0)


def test_intersection_and_sum():
    u = Subspace.span(3, [(1, 0, 0), (0, 1, 0)])
    v = Subspace.span(3, [(0, 1, 0), (0, 0, 1)])
    assert intersect(u, v) == Subspace.span(3, [(0, 1, 0)])
    assert sum_spaces(u, v) == Subspace.full(3)
    assert intersect(u, Subspace.zero(3)).dim == 0


def test_quotient_representatives():
    u = Subspace.span(3, [(1, 1, 0)])
    q = quotient(3, u)
    assert q.dim == 2
    assert q.complement_indices == (1, 2)
    assert q.project((1, 1, 0)) == (0, 0)
    assert q.same_class((1, 0, 0), (0, -1, 0))
    assert q.project(q.lift((3, 5))) == (3, 5)
    assert q.projection_matrix().shape == (2, 3)


def test_coordinates_round_trip():
    u = Subspace.span(4, [(1, 2, 0, 1), (0, 0, 1, -1)])
    x = u.element(("1/3", 2))
    assert u.coordinates(x) == (Fraction(1, 3), 2)
    with pytest.raises(InputError):
        u.coordinates((0, 1, 0, 0))


def test_rationals_from_strings():
    assert vector(["1/2", "-3", 4]) == (Fraction(1, 2), Fraction(-3), Fraction(4))
    with pytest.raises(ParseError):
        vector(["1/0"])
    with pytest.raises(InputError):
        vector([0.5])


def test_power_and_vectorize():
    j = Matrix.from_rows([[1, 1], [0, 1]])
    assert j.power(3) == Matrix.from_rows([[1, 3], [0, 1]])
    assert Matrix.from_vector(j.vectorize(), 2, 2) == j
