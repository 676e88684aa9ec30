"""Acceptance criteria 1-9.

Each test prints one line ``criterion N: PASS|FAIL ...`` and then asserts.
All tolerances and runtime limits are pinned below.
"""
import random
import time
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import polynomials, random_small_map
from ddeg.algebraic import RealAlgebraicNumber, compare, largest_real_root
from ddeg.normal_forms import (AffineMap, affine_triangular_A3_dynamical_degree, bruhat_conjugate,
                               enumerate_shiftlike_set_A3, enumerate_theorem1_set)
from ddeg.oracle import oracle_degree_sequence
from ddeg.perron import (AlgebraicCandidate, Answer, examplerst_family, is_handelman, is_weak_perron,
                         minimal_dimension_quadratic, realize_weak_perron)
from ddeg.polynomial import Endomorphism, Polynomial, iterate
from ddeg.stability import Status, Verdict, dynamical_degree, stability_test
from ddeg.textio import parse_endomorphism
from ddeg.weights import NEG_INF, WeightVector, mu_degree_endo, mu_degree_poly, mu_homogeneous_part, mu_leading_endo

ORACLE_TOL = 1e-3          # oracle growth estimate versus exact value
ORACLE_DEPTH = 8
LIMIT = {1: 5, 2: 5, 3: 120, 4: 120, 5: 10, 6: 5, 7: 120, 8: 30, 9: 300}  # seconds


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail, elapsed):
        ok = ok and elapsed < LIMIT[n]
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} ({detail}; {elapsed:.1f}s, limit {LIMIT[n]}s)")
        return ok
    return emit


def quad(a, c, den):
    """(a + sqrt c)/den as an exact real algebraic number."""
    if den == 1:
        return largest_real_root((a * a - c, -2 * a, 1))
    assert den == 2 and (a * a - c) % 4 == 0
    return largest_real_root(((a * a - c) // 4, -a, 1))


def integer(k):
    return RealAlgebraicNumber.from_rational(k)


def same_set(got, want):
    if len(got) != len(want):
        return False
    return all(sum(compare(g, w) == 0 for g in got) == 1 for w in want)


# values appearing for the first time at each degree
NEW_AT = {
    1: [integer(1)],
    2: [quad(0, 2, 1), quad(1, 5, 2), integer(2)],
    3: [quad(0, 3, 1), quad(1, 13, 2), quad(1, 2, 1), quad(0, 6, 1), quad(1, 17, 2), quad(1, 3, 1), integer(3)],
    4: [quad(0, 8, 1), quad(1, 5, 1), quad(3, 13, 2), quad(1, 33, 2), quad(0, 12, 1), quad(1, 37, 2),
        quad(3, 17, 2), quad(1, 7, 1), quad(3, 21, 2), integer(4)],
}


def test_criterion_1_affine_triangular_tables(report):
    t = time.time()
    results = {}
    for d in range(1, 5):
        entries = enumerate_theorem1_set(d)
        new = [e.value for e in entries if e.new] if d > 1 else [e.value for e in entries]
        results[d] = same_set(new, NEW_AT[d])
    ok = report(1, all(results.values()), f"new-at-degree sets match for d={sorted(k for k, v in results.items() if v)}",
                time.time() - t)
    assert ok


def test_criterion_2_shiftlike_strictness(report):
    t = time.time()
    good = []
    for d in range(3, 7):
        lam = largest_real_root((-d, -1, 1))  # (1 + sqrt(1 + 4d))/2
        in_thm = any(compare(e.value, lam) == 0 for e in enumerate_theorem1_set(d, mark_new=False))
        in_shift = any(compare(e.value, lam) == 0 for e in enumerate_shiftlike_set_A3(d, mark_new=False))
        good.append(in_thm and not in_shift)
    ok = report(2, all(good), f"d=3..6 strict: {good}", time.time() - t)
    assert ok


def test_criterion_3_witness_pipeline(report):
    t = time.time()
    failures, count, worst = [], 0, 0.0
    for a in range(4):
        for b in range(4 - a):
            for c in range(4):
                if a == 0 and b * c == 0:
                    continue
                want = largest_real_root((-b * c, -a, 1))
                f = parse_endomorphism(f"(x3 + x1^{a}*x2^{b}, x2 + x1^{c}, x1)")
                res = dynamical_degree(f, oracle=False)
                rep = oracle_degree_sequence(f, ORACLE_DEPTH)
                diff = abs(rep.estimate - float(want))
                worst = max(worst, diff)
                count += 1
                if res.value is None or compare(res.value, want) != 0 or diff > ORACLE_TOL:
                    failures.append((a, b, c))
    ok = report(3, not failures, f"{count} triples exact, worst oracle gap {worst:.1e}, failures {failures}",
                time.time() - t)
    assert ok


def test_criterion_4_monomial_maps(report):
    t = time.time()
    rng = random.Random(1234)
    failures, worst, done = [], 0.0, 0
    while done < 50:
        M = [[rng.randint(0, 4) for _ in range(3)] for _ in range(3)]
        if sympy.Matrix(M).det() == 0:
            continue
        done += 1
        f = Endomorphism.from_matrix(M)
        res = dynamical_degree(f, oracle=False)
        # independent route: sympy characteristic polynomial, numpy spectrum
        cp = [int(c) for c in sympy.Matrix(M).charpoly().all_coeffs()[::-1]]
        rho = largest_real_root(tuple(cp))
        num = max(abs(np.linalg.eigvals(np.array(M, dtype=float))))
        rep = oracle_degree_sequence(f, ORACLE_DEPTH)
        diff = abs(rep.estimate - num)
        worst = max(worst, diff)
        if compare(res.value, rho) != 0 or abs(float(rho) - num) > 1e-9 or diff > ORACLE_TOL:
            failures.append(M)
    ok = report(4, not failures, f"50 matrices exact, worst oracle gap {worst:.1e}, failures {len(failures)}",
                time.time() - t)
    assert ok


def test_criterion_5_reduction_loop(report):
    t = time.time()
    good = []
    for n in (2, 3, 4):
        for text in (f"(x3 - x2^{n}, x1, x2 + x1^{n})", f"(x2 - x1^{n}, x3 + (x2 - x1^{n})^{n}, x1)"):
            f = parse_endomorphism(text)
            res = affine_triangular_A3_dynamical_degree(f, strict=True)
            final_theta_one = res.certificate["final_check"].get("reason") == "theta = 1"
            good.append(final_theta_one and compare(res.value, integer(1)) == 0
                        and iterate(f, 3) == Endomorphism.identity(3))
    ok = report(5, all(good), f"6 maps reduce to theta = 1 with f^3 = id: {good}", time.time() - t)
    assert ok


def test_criterion_6_instability_yet_equal(report):
    t = time.time()
    f = parse_endomorphism("(x1^2 + x2, x1, x3 + (x3 + x4)^2, x4 - (x3 + x4)^2)")
    st_rep = stability_test(f, WeightVector([0, 0, 1, 1]))
    res = dynamical_degree(f)
    ok = (st_rep.verdict is Verdict.UNSTABLE_AT and st_rep.r == 2 and res.status is Status.PROVEN
          and compare(res.value, integer(2)) == 0)
    chosen = res.certificate["routes"][res.certificate["chosen_route"]]
    ok = ok and "split" in chosen
    ok = report(6, ok, f"stability {st_rep.label()}, driver {res.value} ({res.status.value}) via split",
                time.time() - t)
    assert ok


EXAMPLERST = [((1, 1, 1), quad(3, 5, 2)), ((1, 1, 2), quad(2, 3, 1)), ((1, 1, 3), quad(5, 21, 2)),
              ((1, 2, 1), quad(2, 2, 1)), ((1, 2, 2), quad(5, 17, 2)), ((1, 3, 1), quad(5, 13, 2)),
              ((2, 3, 1), quad(3, 3, 1))]


def test_criterion_7_examplerst_table(report):
    t = time.time()
    bad = []
    for rst, want in EXAMPLERST:
        plan = examplerst_family(*rst)
        res = dynamical_degree(plan.automorphism)
        ok = (compare(plan.predicted, want) == 0 and res.value is not None and compare(res.value, want) == 0
              and abs(res.oracle.estimate - float(want)) <= ORACLE_TOL)
        if not ok:
            bad.append(rst)
    ok = report(7, not bad, f"7 rows exact with oracle agreement, failures {bad}", time.time() - t)
    assert ok


def test_criterion_8_classification_and_realization(report):
    t = time.time()
    c = AlgebraicCandidate.from_text("x^2 - 3*x + 1")
    plan = realize_weak_perron(c)
    first = (is_weak_perron(c) is Answer.YES and is_handelman(c).answer is Answer.NO
             and minimal_dimension_quadratic(c) == 4
             and plan.automorphism == parse_endomorphism("(x3 + x1*x2, x4 + x1*x2^2, x1, x2)")
             and plan.verified and plan.verification["match"] == "exact")
    d = AlgebraicCandidate.from_text("x^2 - x - 3")
    plan2 = realize_weak_perron(d)
    second = (is_handelman(d).answer is Answer.YES and minimal_dimension_quadratic(d) == 3
              and plan2.tag == "A3-shiftlike" and plan2.dimension == 3 and plan2.verified)
    ok = report(8, first and second, f"(3+sqrt5)/2 in dimension 4: {first}; (1+sqrt13)/2 in dimension 3: {second}",
                time.time() - t)
    assert ok


# ---------------------------------------------------------------------------
# criterion 9: property suites

weight_lists = st.lists(st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=5), min_size=3,
                        max_size=3)


def _valuation_laws():
    failures = []

    @settings(max_examples=100, deadline=None, database=None)
    @given(polynomials(), polynomials(), weight_lists)
    def check(p, q, w):
        mu = WeightVector(w)
        dp, dq, dpq = mu_degree_poly(p, mu), mu_degree_poly(q, mu), mu_degree_poly(p * q, mu)
        if p.is_zero() or q.is_zero():
            assert dpq == NEG_INF
        else:
            assert (dpq - dp - dq).is_zero()
        fl = lambda v: float("-inf") if v == NEG_INF else float(v)  # noqa: E731
        assert fl(mu_degree_poly(p + q, mu)) <= max(fl(dp), fl(dq)) + 1e-12

    try:
        check()
    except AssertionError as exc:  # pragma: no cover - reported through the criterion line
        failures.append(str(exc))
    return not failures


def _leading_part_and_growth():
    rng = random.Random(99)
    for _ in range(100):
        f = random_small_map(rng)
        mu = WeightVector([Fraction(rng.randint(1, 4), rng.randint(1, 3)) for _ in range(3)])
        theta = mu_degree_endo(f, mu)
        if theta.sign() <= 0:
            continue
        g = mu_leading_endo(f, mu, theta)
        for r in (1, 2, 3):
            fr, gr = iterate(f, r), iterate(g, r)
            if any(mu_homogeneous_part(fr[i], mu, theta ** r * mu[i]) != gr[i] for i in range(3)):
                return False
            if not (theta ** r - mu_degree_endo(fr, mu)).sign() >= 0:
                return False
    return True


def _power_law():
    for text in ("(x3 + x1*x2, x2 + x1^3, x1)", "(x3 + x1^2, x1, x2)", "(x1^2*x2, x1*x2)", "(x2 + x1^2, x1)",
                 "(x2, x3, x1 + x2^2 + x3)"):
        f = parse_endomorphism(text)
        lam = dynamical_degree(f, oracle=False).value
        for d in (2, 3):
            if compare(dynamical_degree(iterate(f, d), oracle=False).value, lam.power(d)) != 0:
                return False
    return True


def _handelman_weak_perron():
    rng = random.Random(5)
    for _ in range(100):
        N = rng.randint(1, 5)
        a = [rng.randint(0, 4) for _ in range(N)]
        a[0] = max(a[0], 1)
        poly = tuple(-x for x in a) + (1,)
        c = AlgebraicCandidate(poly, largest_real_root(poly))
        if is_handelman(c).answer is not Answer.YES or is_weak_perron(c) is not Answer.YES:
            return False
    return True


def _bruhat_invariance():
    rng = random.Random(21)
    for _ in range(10):
        while True:
            L = [[rng.randint(-1, 1) for _ in range(3)] for _ in range(3)]
            if sympy.Matrix(L).det() != 0:
                break
        x = [Polynomial.variable(3, i) for i in range(3)]
        tau = Endomorphism([x[0], x[1] + Polynomial.monomial((rng.randint(1, 3), 0, 0)),
                            x[2] + Polynomial.monomial((rng.randint(0, 2), rng.randint(0, 2), 0))])
        alpha = AffineMap(tuple(tuple(Fraction(v) for v in r) for r in L),
                          tuple(Fraction(rng.randint(-1, 1)) for _ in range(3)))
        f = alpha.to_endomorphism() @ tau
        beta, pt = bruhat_conjugate(alpha, tau)
        if beta.inverse().to_endomorphism() @ f @ beta.to_endomorphism() != pt.endomorphism():
            return False
        a = dynamical_degree(f, oracle=False).value
        b = dynamical_degree(pt.endomorphism(), oracle=False).value
        if compare(a, b) != 0:
            return False
    return True


def test_criterion_9_property_suites(report):
    t = time.time()
    parts = {"valuation": _valuation_laws(), "leading-part/growth": _leading_part_and_growth(),
             "power law": _power_law(), "Handelman => weak Perron": _handelman_weak_perron(),
             "Bruhat invariance": _bruhat_invariance()}
    ok = report(9, all(parts.values()), ", ".join(f"{k} {'ok' if v else 'FAILED'}" for k, v in parts.items()),
                time.time() - t)
    assert ok
