from math import comb

import pytest
from hypothesis import given, strategies as st

from monadlab.exactalg import QQ, GF
from monadlab.polyring import (DegreeError, HomogeneousPoly, PolySyntaxError, dim_S, evaluate,
                               format_poly, monomial_basis, multiplication_matrix, multiply, parse_poly)

from conftest import F101


def polys(field, degree):
    n = dim_S(degree)
    coeff = st.integers(-5, 5)
    return st.lists(coeff, min_size=n, max_size=n).map(
        lambda cs: HomogeneousPoly(field, degree, tuple(field(c) for c in cs)))


@pytest.mark.parametrize("d", range(-2, 7))
def test_dim_S(d):
    assert dim_S(d) == (comb(d + 3, 3) if d >= 0 else 0)
    assert len(monomial_basis(max(d, 0))) == dim_S(max(d, 0))


def test_monomial_order():
    assert monomial_basis(1) == ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
    assert monomial_basis(2)[:2] == ((2, 0, 0, 0), (1, 1, 0, 0))


def test_parse_aliases_and_coefficients():
    f = parse_poly("x*y - 3/2 z^2 + w*x")
    g = parse_poly("x0*x1 - 3/2*x2^2 + x0*x3")
    assert f == g and f.degree == 2
    assert format_poly(parse_poly("2 x3^2 + x0 x1")) == "x0*x1 + 2*x3^2"
    assert parse_poly("0", degree=3).is_zero()


def test_parse_errors_report_column():
    with pytest.raises(PolySyntaxError) as exc:
        parse_poly("x0 + x5")
    assert exc.value.column == 6
    with pytest.raises(PolySyntaxError):
        parse_poly("x0 +")
    with pytest.raises(PolySyntaxError, match="not homogeneous"):
        parse_poly("x0 + x1^2")
    with pytest.raises(DegreeError):
        parse_poly("x0", degree=2)


def test_finite_field_printing_uses_symmetric_representative():
    f = parse_poly("-x0", GF(7))
    assert format_poly(f) == "-x0"
    assert parse_poly(format_poly(f), GF(7)) == f


@given(polys(QQ, 2))
def test_format_parse_round_trip(f):
    assert parse_poly(format_poly(f), QQ, degree=2) == f


@given(polys(F101, 1), polys(F101, 2), st.tuples(*[st.integers(0, 100)] * 4))
def test_evaluation_is_multiplicative(f, g, pt):
    assert evaluate(multiply(f, g), pt) == evaluate(f, pt) * evaluate(g, pt) % 101


@given(polys(QQ, 1), polys(QQ, 2))
def test_multiplication_commutes(f, g):
    assert f * g == g * f


@given(polys(QQ, 2), polys(QQ, 1))
def test_multiplication_matrix_matches_product(f, g):
    mat = multiplication_matrix(f, 1)
    vec = mat.tolist()
    prod = f * g
    got = [sum(row[j] * g.coeffs[j] for j in range(4)) for row in vec]
    assert tuple(got) == prod.coeffs


def test_variables():
    x = [HomogeneousPoly.variable(QQ, i) for i in range(4)]
    assert format_poly(x[0] * x[1] - x[1] * x[0]) == "0"
    assert format_poly(x[2] * x[2]) == "x2^2"
