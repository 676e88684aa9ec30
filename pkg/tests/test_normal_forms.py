"""Shapes, Bruhat conjugation, closed forms and the A3 reduction loop."""
import random
from fractions import Fraction

import pytest
import sympy

from ddeg.algebraic import RealAlgebraicNumber, compare, largest_real_root
from ddeg.errors import DomainError
from ddeg.normal_forms import (AffineMap, a3_unstable_shape, affine_triangular_A3_dynamical_degree,
                               affine_triangular_factor, bruhat_conjugate, bruhat_decomposition, classify_shape,
                               enumerate_shiftlike_set_A3, enumerate_theorem1_set, perm_elem_dynamical_degree,
                               perm_elem_normal_form, reduce_A3_step)
from ddeg.oracle import oracle_degree_sequence
from ddeg.polynomial import Endomorphism, Polynomial, iterate
from ddeg.stability import dynamical_degree
from ddeg.textio import parse_endomorphism

ONE = RealAlgebraicNumber.from_rational(1)


@pytest.mark.parametrize("text, kind", [
    ("(x2, x3, x1)", "permutation"),
    ("(x1 + x2, x2 - 1)", "affine"),
    ("(x3 + x1^3, x1, x2)", "shift-like"),
    ("(x1, x2, 2*x3 + x1*x2)", "elementary"),
    ("(x1, x2 + x1^2, x3 + x1*x2)", "triangular"),
    ("(x2, 3*x1 + x2^2*x3, x3)", "permutation-elementary"),
    ("(x3 + x1*x2, x2 + x1^3, x1)", "permutation-triangular"),
    ("(x1 + x2 + x1^2, x2 + x1^2 + x3 + x2^2, x3 + x2^2)", "affine-triangular"),
    ("(x1*x2, x2 + x3^3, x3 + x1)", "other"),
])
def test_classify_shape(text, kind):
    assert classify_shape(parse_endomorphism(text)).kind == kind


def _ranks(M, i, j):
    return sympy.Matrix(M)[:i, j:].rank() if i and j < len(M) else 0


def test_bruhat_decomposition_invariants():
    rng = random.Random(2)
    for _ in range(40):
        n = rng.choice([2, 3, 4])
        while True:
            L = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
            if sympy.Matrix(L).det() != 0:
                break
        beta, sigma, gamma = bruhat_decomposition(L)
        P = [[int(sigma[i] == j) for j in range(n)] for i in range(n)]
        B, G = sympy.Matrix(beta), sympy.Matrix(gamma)
        assert B * sympy.Matrix(P) * G == sympy.Matrix(L)
        assert B.is_lower and G.is_lower
        for i in range(n + 1):
            for j in range(n):
                assert _ranks(L, i, j) == _ranks(P, i, j)


def _random_affine_triangular(rng):
    while True:
        L = [[rng.randint(-1, 1) for _ in range(3)] for _ in range(3)]
        if sympy.Matrix(L).det() != 0:
            break
    t = [rng.randint(-1, 1) for _ in range(3)]
    x = [Polynomial.variable(3, i) for i in range(3)]
    tau = [x[0] + rng.randint(-1, 1),
           x[1] * rng.choice([1, -1, 2]) + Polynomial.monomial((rng.randint(0, 3), 0, 0)),
           x[2] + Polynomial.monomial((rng.randint(0, 2), rng.randint(0, 2), 0))]
    alpha = AffineMap(tuple(map(tuple, map(lambda r: tuple(Fraction(v) for v in r), L))),
                      tuple(Fraction(v) for v in t))
    return alpha, Endomorphism(tau)


def test_bruhat_conjugate_gives_permutation_triangular():
    rng = random.Random(9)
    for _ in range(20):
        alpha, tau = _random_affine_triangular(rng)
        f = alpha.to_endomorphism() @ tau
        beta, pt = bruhat_conjugate(alpha, tau)
        b = beta.to_endomorphism()
        b_inv = beta.inverse().to_endomorphism()
        assert b_inv @ f @ b == pt.endomorphism()
        assert beta.is_lower_triangular()


def test_conjugation_invariance_of_driver():
    rng = random.Random(13)
    for _ in range(8):
        alpha, tau = _random_affine_triangular(rng)
        f = alpha.to_endomorphism() @ tau
        beta, pt = bruhat_conjugate(alpha, tau)
        a = dynamical_degree(f, oracle=False).value
        b = dynamical_degree(pt.endomorphism(), oracle=False).value
        assert compare(a, b) == 0


def test_affine_triangular_factor_recovers_map():
    f = parse_endomorphism("(x1 + x2 + x1^2, x2 + x1^2 + x3 + x2^2, x3 + x2^2)")
    alpha, tau = affine_triangular_factor(f)
    assert tau.is_triangular()
    assert alpha.to_endomorphism() @ tau == f


def test_perm_elementary_normal_form_and_value():
    f = parse_endomorphism("(x2, x3, x1 + x2^2 + x3)")
    nf = perm_elem_normal_form(f)
    assert nf.m == 0
    lam, info = perm_elem_dynamical_degree(nf)
    assert compare(lam, largest_real_root((-2, 0, 1))) == 0
    # with a cycle of fixed coordinates in front
    g = parse_endomorphism("(x2, x1, x4, x5, x3 + x1*x4^2*x5)")
    nf = perm_elem_normal_form(g)
    assert nf.m == 2
    lam, _ = perm_elem_dynamical_degree(nf)
    rep = oracle_degree_sequence(g, 8)
    assert abs(rep.estimate - float(lam)) < 1e-6
    with pytest.raises(DomainError):
        perm_elem_normal_form(parse_endomorphism("(x1*x2, x1)"))


def test_perm_elementary_linear_in_cycle_is_one():
    f = parse_endomorphism("(x2, x1, x3 + x1^5*x2^3)")
    lam, info = perm_elem_dynamical_degree(perm_elem_normal_form(f))
    assert compare(lam, ONE) == 0


@pytest.mark.parametrize("n", [2, 3, 4])
def test_reduction_examples(n):
    for text, case in ((f"(x3 - x2^{n}, x1, x2 + x1^{n})", "i"),
                       (f"(x2 - x1^{n}, x3 + (x2 - x1^{n})^{n}, x1)", "ii")):
        f = parse_endomorphism(text)
        assert a3_unstable_shape(f)[0] == case
        step = reduce_A3_step(f)
        assert step.kind == "reduced"
        assert reduce_A3_step(step.f).kind == "already-good"
        res = affine_triangular_A3_dynamical_degree(f)
        assert compare(res.value, ONE) == 0
        assert iterate(f, 3) == Endomorphism.identity(3)


def test_strict_mode_rejects_other_maps():
    with pytest.raises(DomainError):
        affine_triangular_A3_dynamical_degree(parse_endomorphism("(x1*x2, x2 + x3^3, x3 + x1)"), strict=True)


def test_small_enumerations():
    vals = [e.value for e in enumerate_theorem1_set(2)]
    assert [v.approx(10) for v in vals] == ["1.0", "1.414213562", "1.618033989", "2.0"]
    assert [e.new for e in enumerate_theorem1_set(2)] == [False, True, True, True]
    shift = enumerate_shiftlike_set_A3(3)
    assert {e.value.approx(8) for e in shift if e.new} == {"1.7320508", "2.4142136", "3.0"}
    assert enumerate_theorem1_set(1)[0].witnesses[0].startswith("(x3 + x1^")
