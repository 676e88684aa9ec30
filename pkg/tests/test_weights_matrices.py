"""Weighted degrees, contained matrices and maximal eigenvectors."""
import itertools
import random
from fractions import Fraction

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from conftest import polynomials, random_small_map
from ddeg.algebraic import compare
from ddeg.matrices import (contained_matrices, frobenius_normal_form, maximal_eigenvalue, maximal_eigenvector,
                           spectral_radius, support_family, verify_maximal_eigenvector)
from ddeg.polynomial import iterate
from ddeg.textio import parse_endomorphism
from ddeg.weights import (NEG_INF, WeightVector, graded_pieces, mu_degree_endo, mu_degree_poly,
                          mu_homogeneous_part, mu_leading_endo)

weights = st.lists(st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=5), min_size=3, max_size=3)


def _num(v):
    return float("-inf") if v == NEG_INF else float(v)


@given(polynomials(), polynomials(), weights)
def test_valuation_laws(p, q, w):
    mu = WeightVector(w)
    dp, dq = mu_degree_poly(p, mu), mu_degree_poly(q, mu)
    prod = mu_degree_poly(p * q, mu)
    if p.is_zero() or q.is_zero():
        assert prod == NEG_INF
    else:
        assert (prod - dp - dq).is_zero()
    s = mu_degree_poly(p + q, mu)
    assert _num(s) <= max(_num(dp), _num(dq)) + 1e-12
    if _num(dp) != _num(dq):
        assert abs(_num(s) - max(_num(dp), _num(dq))) < 1e-12


@given(polynomials(), weights)
def test_graded_pieces_reassemble(p, w):
    mu = WeightVector(w)
    pieces = graded_pieces(p, mu)
    total = sum((piece for _, piece in pieces), p - p)
    assert total == p
    for v, piece in pieces:
        assert mu_homogeneous_part(p, mu, v) == piece


def test_leading_part_iteration_identity():
    rng = random.Random(7)
    checked = 0
    for _ in range(100):
        f = random_small_map(rng)
        mu = WeightVector([Fraction(rng.randint(1, 4), rng.randint(1, 3)) for _ in range(3)])
        theta = mu_degree_endo(f, mu)
        if theta.sign() <= 0:
            continue
        g = mu_leading_endo(f, mu, theta)
        for r in (1, 2, 3):
            fr, gr = iterate(f, r), iterate(g, r)
            for i in range(3):
                assert mu_homogeneous_part(fr[i], mu, theta ** r * mu[i]) == gr[i]
            assert float(mu_degree_endo(fr, mu)) <= float(theta) ** r + 1e-9
        checked += 1
    assert checked >= 90


def _brute_theta(f):
    fam = support_family(f)
    best = 0.0
    for combo in itertools.product(*fam):
        best = max(best, max(abs(np.linalg.eigvals(np.array(combo, dtype=float)))))
    return best


def test_maximal_eigenvalue_matches_brute_force():
    rng = random.Random(3)
    for _ in range(25):
        f = random_small_map(rng, terms=3, max_exp=3)
        data = maximal_eigenvalue(f)
        assert abs(float(data.theta) - _brute_theta(f)) < 1e-9
        assert compare(spectral_radius(data.witness), data.theta) == 0


def test_spectral_radius_against_numpy():
    rng = random.Random(11)
    for _ in range(40):
        M = [[rng.randint(0, 4) for _ in range(3)] for _ in range(3)]
        want = max(abs(np.linalg.eigvals(np.array(M, dtype=float))))
        assert abs(float(spectral_radius(M)) - want) < 1e-8


def test_contained_matrix_count():
    f = parse_endomorphism("(x3 + x1*x2, x2 + x1^3, x1)")
    assert len(list(contained_matrices(f))) == 2 * 2 * 1


def test_maximal_eigenvectors_of_known_maps():
    cases = {
        "(x3 + x1*x2, x2 + x1^3, x1)": 2.302775637731995,
        "(x2 + x1^2, x1, x3 + (x3 + x4)^2, x4 - (x3 + x4)^2)": 2.0,
        "(x3 - x2^2, x1, x2 + x1^2)": 2 ** 0.5,
        "(x3 + x1*x2^2, x1, x2)": 2.0,
    }
    for text, theta in cases.items():
        f = parse_endomorphism(text)
        data = maximal_eigenvector(f, all_candidates=True)
        assert abs(float(data.theta) - theta) < 1e-12
        assert data.candidates
        K = data.theta_nf
        for mu in data.candidates:
            assert verify_maximal_eigenvector(f, mu, K)
            # independent float check of deg_mu(f_i) = theta mu_i on positive rows
            fl = mu.floats()
            for i in mu.positive():
                top = max(sum(e * w for e, w in zip(m, fl)) for m in f[i].support())
                assert abs(top - theta * fl[i]) < 1e-9


def test_four_dimensional_candidates():
    f = parse_endomorphism("(x1^2 + x2, x1, x3 + (x3 + x4)^2, x4 - (x3 + x4)^2)")
    data = maximal_eigenvector(f, all_candidates=True)
    first = data.candidates[0]
    assert first.same_direction(WeightVector([0, 0, 1, 1]))


def test_frobenius_form_blocks():
    M = [[1, 1, 0], [0, 1, 1], [0, 0, 2]]
    form = frobenius_normal_form(M)
    assert sorted(len(b) for b in form.blocks) == [1, 1, 1]
