"""Real algebraic numbers checked against sympy root isolation and numpy roots."""
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from ddeg.algebraic import (NumberField, RealAlgebraicNumber, Verdict, char_poly, compare,
                            conjugates_within_modulus, isolate_real_roots, largest_real_root)
from ddeg.errors import DomainError

x = sympy.Symbol("x")

int_polys = st.lists(st.integers(-6, 6), min_size=2, max_size=6).filter(lambda c: c[-1] != 0)


@given(int_polys)
def test_root_isolation_matches_sympy(coeffs):
    expr = sum(c * x**i for i, c in enumerate(coeffs))
    want = sorted(set(sympy.Poly(expr, x).real_roots()), key=lambda r: float(r))
    got = isolate_real_roots(tuple(coeffs))
    assert len(got) == len(want)
    for r, w in zip(got, want):
        assert r.lo <= w <= r.hi
        assert abs(float(r) - float(w)) < 1e-9


def test_sqrt2_arithmetic():
    r2 = largest_real_root((-2, 0, 1))
    assert compare(r2.power(2), RealAlgebraicNumber.from_rational(2)) == 0
    assert r2.approx(20) == "1.4142135623730950488"
    golden = largest_real_root((-1, -1, 1))
    assert compare(golden, r2) > 0
    assert r2.is_integer() is False
    assert largest_real_root((-9, 0, 1)).rational_value() == 3


def test_number_field_operations():
    theta = largest_real_root((-3, -1, 1))  # (1 + sqrt 13)/2
    K = NumberField(theta)
    t = K.theta()
    assert (t * t - t - 3).is_zero()
    inv = t.inverse()
    assert (inv * t - 1).is_zero()
    assert abs(float(inv) - 1 / float(theta)) < 1e-12
    assert (t - 2).sign() > 0 and (t - Fraction(5, 2)).sign() < 0
    assert abs(float(t ** 3) - float(((1 + sympy.sqrt(13)) / 2) ** 3)) < 1e-12


def test_char_poly_against_sympy():
    M = [[1, 2, 0], [0, 1, 3], [4, 0, 1]]
    want = sympy.Matrix(M).charpoly(x).all_coeffs()[::-1]
    assert list(char_poly(M)) == [int(c) for c in want]


@given(int_polys)
def test_modulus_test_matches_numpy(coeffs):
    p = tuple(coeffs)
    lam = largest_real_root(p)
    if lam is None or float(lam) < 1:
        return
    sq = sympy.Poly(sum(c * x**i for i, c in enumerate(coeffs)), x).sqf_part()
    roots = np.roots([float(c) for c in sq.all_coeffs()])
    lv = float(lam)
    others = [z for z in roots if abs(z - lv) > 1e-7]
    rep = conjugates_within_modulus(p, lam, strict=False)
    margin = [abs(z) - abs(lv) for z in others]
    if all(m < -1e-6 for m in margin):
        assert rep.verdict is Verdict.YES
    elif any(m > 1e-6 for m in margin):
        assert rep.verdict is Verdict.NO


def test_modulus_ties():
    # x^2 - 2: conjugate -sqrt2 ties
    r2 = largest_real_root((-2, 0, 1))
    assert conjugates_within_modulus((-2, 0, 1), r2, strict=False).verdict is Verdict.YES
    assert conjugates_within_modulus((-2, 0, 1), r2, strict=True).verdict is Verdict.NO
    # x^3 - 2 has complex conjugates of the same modulus as the real root
    c2 = largest_real_root((-2, 0, 0, 1))
    assert conjugates_within_modulus((-2, 0, 0, 1), c2, strict=False).verdict is Verdict.YES
    assert conjugates_within_modulus((-2, 0, 0, 1), c2, strict=True).verdict is Verdict.NO
    with pytest.raises(DomainError):
        conjugates_within_modulus((-3, 0, 1), r2, strict=False)


def test_record_round_trip():
    v = largest_real_root((-1, -3, 1))
    assert compare(RealAlgebraicNumber.from_record(v.to_record()), v) == 0
