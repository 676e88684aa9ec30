"""Stability test, split recursion and the dynamical degree driver."""
import pytest

from ddeg.algebraic import RealAlgebraicNumber, compare, largest_real_root
from ddeg.errors import DomainError
from ddeg.polynomial import iterate
from ddeg.stability import Status, Verdict, dinh_nguyen_split, dynamical_degree, stability_test
from ddeg.textio import parse_endomorphism
from ddeg.weights import WeightVector

FOUR = "(x1^2 + x2, x1, x3 + (x3 + x4)^2, x4 - (x3 + x4)^2)"


def test_unstable_at_two_on_split_example():
    f = parse_endomorphism(FOUR)
    rep = stability_test(f, WeightVector([0, 0, 1, 1]))
    assert rep.verdict is Verdict.UNSTABLE_AT and rep.r == 2
    g = rep.leading_part
    assert all(c.is_zero() for c in iterate(g, 2)[2:])


def test_stable_monomial_leading_part():
    f = parse_endomorphism("(x3 + x1*x2^2, x1, x2)")
    theta = largest_real_root((-2, 1))
    mu = WeightVector([4, 2, 1])
    rep = stability_test(f, mu)
    assert rep.verdict is Verdict.STABLE_PROVEN
    assert compare(theta, RealAlgebraicNumber.from_rational(2)) == 0


def test_stability_domain_errors():
    f = parse_endomorphism("(x1 + x2, x2)")
    with pytest.raises(DomainError):
        stability_test(f, WeightVector([1, 1]))  # deg_mu = 1
    with pytest.raises(DomainError):
        stability_test(parse_endomorphism("(x2^2, x1 + x2)"), WeightVector([0, 1]))  # infinite


def test_split_recursion_structure():
    f = parse_endomorphism(FOUR)
    split = dinh_nguyen_split(f, first=[0, 1])
    assert split.hat == parse_endomorphism("(x1^2 + x2, x1)")
    with pytest.raises(DomainError):
        dinh_nguyen_split(f, first=[2])


def test_driver_split_route_is_exact():
    res = dynamical_degree(parse_endomorphism(FOUR))
    assert res.status is Status.PROVEN
    assert compare(res.value, RealAlgebraicNumber.from_rational(2)) == 0
    route = res.certificate["routes"][res.certificate["chosen_route"]]
    assert route["stability"]["verdict"] == "UnstableAt(2)"


@pytest.mark.parametrize("text, poly", [
    ("(x3 + x1*x2, x2 + x1^3, x1)", (-3, -1, 1)),
    ("(x1^2*x2, x1*x2)", (1, -3, 1)),
    ("(x2, x3, x1 + x2^2 + x3)", (-2, 0, 1)),
    ("(x1*x2, x2 + x3^3, x3 + x1)", None),
])
def test_driver_values(text, poly):
    f = parse_endomorphism(text)
    res = dynamical_degree(f)
    assert res.value is not None
    assert res.agreement.ok
    if poly is not None:
        assert compare(res.value, largest_real_root(poly)) == 0


def test_non_dominant_rejected():
    with pytest.raises(DomainError):
        dynamical_degree(parse_endomorphism("(x1, x1^2)"))


@pytest.mark.parametrize("text", ["(x3 + x1*x2, x2 + x1^3, x1)", "(x3 + x1^2, x1, x2)", "(x1^2*x2, x1*x2)",
                                  "(x2 + x1^2, x1)"])
def test_power_law(text):
    f = parse_endomorphism(text)
    lam = dynamical_degree(f, oracle=False).value
    for d in (2, 3):
        lam_d = dynamical_degree(iterate(f, d), oracle=False).value
        assert compare(lam_d, lam.power(d)) == 0
