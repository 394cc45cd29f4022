from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from monadlab.exactalg import (QQ, ExactMatrix, GF, MalformedInputError, PrimeField, cokernel_data,
                               column_space_basis, field_from_tag, kernel_matrix, rank, rref, solve)

small_ints = st.integers(-6, 6)


def int_matrices(max_rows=6, max_cols=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_prime_field_validation():
    with pytest.raises(ValueError):
        PrimeField(100)
    with pytest.raises(ValueError):
        PrimeField(2**31 + 11)
    assert GF(7).inv(3) * 3 % 7 == 1


def test_rationals_reject_floats():
    with pytest.raises(MalformedInputError):
        QQ(0.5)
    assert QQ("3/6") == Fraction(1, 2)


def test_field_tags_round_trip():
    assert field_from_tag("Q") is QQ
    assert field_from_tag("Fq:101") == GF(101)
    assert field_from_tag(GF(2147483647).tag).q == 2147483647
    with pytest.raises(MalformedInputError):
        field_from_tag("R")


@given(int_matrices())
def test_rational_rank_matches_float_rank(rows):
    # small integer entries: floating point rank is reliable here
    m = ExactMatrix.from_rows(QQ, rows)
    assert rank(m) == np.linalg.matrix_rank(np.array(rows, dtype=float))


@given(int_matrices())
def test_rank_of_transpose(rows):
    for field in (QQ, GF(101)):
        m = ExactMatrix.from_rows(field, rows)
        assert rank(m) == rank(m.T)


@given(int_matrices())
def test_kernel_is_kernel(rows):
    for field in (QQ, GF(7)):
        m = ExactMatrix.from_rows(field, rows)
        k = kernel_matrix(m)
        assert k.ncols == m.ncols - rank(m)
        assert (m @ k).is_zero()
        assert rank(k) == k.ncols


@given(int_matrices())
def test_rref_is_reduced(rows):
    m = ExactMatrix.from_rows(QQ, rows)
    r, pivots, rk = rref(m)
    assert rk == len(pivots)
    data = r.tolist()
    for i, c in enumerate(pivots):
        assert data[i][c] == 1
        assert all(data[j][c] == 0 for j in range(len(data)) if j != i)


@given(int_matrices())
def test_cokernel_dimension_and_projection(rows):
    m = ExactMatrix.from_rows(GF(101), rows)
    cok = cokernel_data(m)
    assert cok.dim == m.nrows - rank(m)
    assert (cok.projection @ m).is_zero()
    assert rank(cok.projection) == cok.dim


@given(int_matrices(), st.lists(small_ints, min_size=6, max_size=6))
def test_solve_recovers_a_solution(rows, xs):
    m = ExactMatrix.from_rows(QQ, rows)
    x = ExactMatrix.from_rows(QQ, [[v] for v in xs[: m.ncols]])
    b = m @ x
    y = solve(m, b)
    assert y is not None and m @ y == b


def test_solve_inconsistent():
    m = ExactMatrix.from_rows(QQ, [[1, 1], [1, 1]])
    assert solve(m, ExactMatrix.from_rows(QQ, [[1], [2]])) is None


@given(st.lists(st.integers(0, 2**31 - 2), min_size=9, max_size=9),
       st.lists(st.integers(0, 2**31 - 2), min_size=9, max_size=9))
def test_large_prime_matmul_has_no_overflow(a, b):
    q = 2147483647
    F = GF(q)
    A = ExactMatrix.from_rows(F, [a[0:3], a[3:6], a[6:9]])
    B = ExactMatrix.from_rows(F, [b[0:3], b[3:6], b[6:9]])
    want = [[sum(a[3 * i + k] * b[3 * k + j] for k in range(3)) % q for j in range(3)] for i in range(3)]
    assert (A @ B).tolist() == want


def test_column_space_basis():
    m = ExactMatrix.from_rows(QQ, [[1, 2, 3], [2, 4, 6], [0, 0, 1]])
    basis = column_space_basis(m)
    assert basis.ncols == 2
    assert rank(basis.hstack(m)) == 2
