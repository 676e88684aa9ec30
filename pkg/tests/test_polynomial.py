"""Sparse polynomial arithmetic against sympy, plus parsing round trips."""
import sympy
from hypothesis import given

import pytest
from conftest import endomorphisms, polynomials

from ddeg.errors import ParseError, ResourceLimitError
from ddeg.polynomial import Budget, Endomorphism, Polynomial, is_dominant, iterate, jacobian_determinant
from ddeg.textio import format_endomorphism, format_polynomial, parse_endomorphism, parse_polynomial

X = sympy.symbols("x1:4")


def to_sympy(p: Polynomial):
    return sympy.Add(*[c * sympy.Mul(*[X[i] ** e for i, e in enumerate(m)]) for m, c in p.items()])


@given(polynomials(), polynomials())
def test_product_matches_sympy(p, q):
    assert sympy.expand(to_sympy(p * q) - to_sympy(p) * to_sympy(q)) == 0


@given(polynomials(), polynomials())
def test_sum_and_difference(p, q):
    assert sympy.expand(to_sympy(p + q) - to_sympy(p) - to_sympy(q)) == 0
    assert (p - q) + q == p


@given(endomorphisms(), polynomials(max_terms=3, max_exp=2))
def test_substitution_matches_sympy(f, p):
    got = p.compose(list(f))
    want = to_sympy(p).subs({X[i]: to_sympy(f[i]) for i in range(3)}, simultaneous=True)
    assert sympy.expand(to_sympy(got) - want) == 0


@given(endomorphisms(max_terms=2), endomorphisms(max_terms=2), endomorphisms(max_terms=2))
def test_composition_is_associative(f, g, h):
    assert (f @ g) @ h == f @ (g @ h)


def test_degrees():
    p = parse_polynomial("x1^3*x2 + x2^2*x3^4 - 7", 3)
    assert p.total_degree() == 6
    assert p.degree_in(2) == 4
    assert p.partial_degree([0, 1]) == 4
    assert Polynomial.zero(3).total_degree() == float("-inf")


def test_iterate_matches_repeated_composition():
    f = parse_endomorphism("(x3 + x1*x2, x2 + x1^3, x1)")
    assert iterate(f, 3) == f @ f @ f
    assert [iterate(f, r).degree() for r in range(1, 6)] == [3, 6, 15, 33, 78]


def test_iterate_budget_reports_partial():
    f = parse_endomorphism("(x1^2 + x2^2 + x3^2 + x1 + 1, x1*x2 + x3 + x2, x3^2 + x1)")
    with pytest.raises(ResourceLimitError) as info:
        iterate(f, 8, Budget(max_terms=500))
    k, partial = info.value.partial
    assert k >= 1 and partial == iterate(f, k)


def test_period_three_map():
    for n in (2, 3, 4):
        f = parse_endomorphism(f"(x3 - x2^{n}, x1, x2 + x1^{n})")
        assert iterate(f, 3) == Endomorphism.identity(3)


def test_jacobian_against_sympy():
    f = parse_endomorphism("(x3 + x1*x2, x2 + x1^3, x1)")
    M = sympy.Matrix([[sympy.diff(to_sympy(c), v) for v in X] for c in f])
    assert sympy.expand(M.det() - to_sympy(jacobian_determinant(f))) == 0
    assert is_dominant(f)
    assert not is_dominant(parse_endomorphism("(x1, x1^2)"))


@given(endomorphisms())
def test_format_parse_round_trip(f):
    assert parse_endomorphism(format_endomorphism(f)) == f


def test_parse_grammar():
    assert parse_polynomial("2x1x2", 2) == parse_polynomial("2*x1*x2", 2)
    assert parse_polynomial("(x1+1)**2", 1) == parse_polynomial("x1^2 + 2*x1 + 1", 1)
    assert format_polynomial(parse_polynomial("x1/2 - 3/4", 1)) == "1/2*x1 - 3/4"
    with pytest.raises(ParseError) as info:
        parse_endomorphism("(x1, x1^^2)")
    assert info.value.position == 8
    with pytest.raises(ParseError):
        parse_polynomial("x1/x2", 2)


def test_relabel_and_restrict():
    f = parse_endomorphism("(x2 + x1^2, x1, x4, x3 + x1^2)")
    g = f.relabel([2, 3, 0, 1])
    assert g == parse_endomorphism("(x2, x1 + x3^2, x4 + x3^2, x3)")
    assert f.restrict([0, 1]) == parse_endomorphism("(x2 + x1^2, x1)")
