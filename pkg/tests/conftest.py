import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ddeg.polynomial import Endomorphism, Polynomial

settings.register_profile("ddeg", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ddeg")


@st.composite
def polynomials(draw, arity=3, max_terms=4, max_exp=3, coeff=5):
    n_terms = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n_terms):
        m = tuple(draw(st.integers(0, max_exp)) for _ in range(arity))
        c = draw(st.integers(-coeff, coeff))
        if c:
            terms[m] = c
    return Polynomial(arity, terms)


@st.composite
def endomorphisms(draw, arity=3, max_terms=3, max_exp=2):
    comps = [draw(polynomials(arity, max_terms, max_exp)) for _ in range(arity)]
    return Endomorphism(comps)


def random_small_map(rng: random.Random, n=3, terms=3, max_exp=2):
    comps = []
    for _ in range(n):
        t = {}
        for _ in range(rng.randint(1, terms)):
            m = tuple(rng.randint(0, max_exp) for _ in range(n))
            t[m] = rng.choice([-2, -1, 1, 1, 2, 3])
        comps.append(Polynomial(n, t))
    return Endomorphism(comps)


@pytest.fixture
def rng():
    return random.Random(20240611)
