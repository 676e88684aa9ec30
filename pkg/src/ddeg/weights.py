"""Monomial valuations deg_mu, homogeneous decompositions and leading parts.

Weights live in a single :class:`NumberField`; rational weight vectors use
the field Q.  The markers ``INF`` and ``NEG_INF`` stand for the infinite
mu-degree of an endomorphism and the degree of the zero polynomial.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from . import upoly
from .algebraic import NumberField, NumberFieldElement, rational_field
from .errors import DomainError, StructuralError
from .polynomial import Endomorphism, Polynomial

INF = math.inf
NEG_INF = -math.inf


class WeightVector:
    """A non-negative, non-zero weight vector with entries in one number field."""

    __slots__ = ("field", "entries", "_floats")

    def __init__(self, entries: Sequence, field: NumberField | None = None):
        entries = list(entries)
        if not entries:
            raise StructuralError("empty weight vector")
        if field is None:
            fields = {id(e.field): e.field for e in entries if isinstance(e, NumberFieldElement)}
            if len(fields) > 1:
                raise DomainError("weight entries come from different number fields")
            field = next(iter(fields.values())) if fields else rational_field()
        conv = []
        for e in entries:
            if isinstance(e, NumberFieldElement):
                if e.field is not field:
                    raise DomainError("weight entry from a foreign number field")
                conv.append(e)
            else:
                conv.append(field.rational(Fraction(e)))
        signs = [e.sign() for e in conv]
        if any(s < 0 for s in signs):
            raise DomainError("weights must be non-negative")
        if not any(signs):
            raise DomainError("weight vector must be non-zero")
        self.field = field
        self.entries = tuple(conv)
        self._floats = None

    @classmethod
    def ones(cls, n):
        return cls([1] * n)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def floats(self):
        if self._floats is None:
            self._floats = tuple(float(e) for e in self.entries)
        return self._floats

    def positive(self):
        """Zero-based indices with positive weight."""
        return [i for i, e in enumerate(self.entries) if e.sign() > 0]

    def zeros(self):
        return [i for i, e in enumerate(self.entries) if e.sign() == 0]

    def is_positive(self):
        return not self.zeros()

    def normalized(self):
        """Scale so that the last positive entry equals 1."""
        k = self.positive()[-1]
        s = self.entries[k]
        return WeightVector([e / s for e in self.entries], self.field)

    def same_direction(self, other: "WeightVector") -> bool:
        """Exact test for proportionality."""
        if len(self) != len(other):
            return False
        k = self.positive()[0]
        if other.entries[k].sign() == 0:
            return False
        ratio_num, ratio_den = self.entries[k], other.entries[k]
        f = self.field
        if other.field is not f:
            return [e.sign() for e in self] == [e.sign() for e in other] and all(
                abs(a / self.floats()[k] - b / other.floats()[k]) < 1e-12
                for a, b in zip(self.floats(), other.floats()))
        return all((a * ratio_den - b * ratio_num).is_zero() for a, b in zip(self, other))

    def to_record(self, digits=30):
        rec = {"entries": [e.approx(digits) for e in self.entries]}
        if self.field.degree > 1:
            rec["field"] = self.field.root.to_record(digits)
            rec["reps"] = [[str(c) for c in self.field.reduce(e.rep)] for e in self.entries]
        return rec

    def __repr__(self):
        return "WeightVector(" + ", ".join(e.approx(8) for e in self.entries) + ")"


def _monomial_value(m, mu: WeightVector) -> NumberFieldElement:
    rep = ()
    for a, e in zip(m, mu.entries):
        if a:
            rep = upoly.add(rep, upoly.scale(e.rep, a))
    return NumberFieldElement(mu.field, rep)


def _float_value(m, fl):
    return sum(a * w for a, w in zip(m, fl) if a)


def _check(p: Polynomial, mu: WeightVector):
    if p.arity != len(mu):
        raise StructuralError("weight vector and polynomial have different arities")


def _top_monomials(p: Polynomial, mu: WeightVector):
    """(value, [monomials attaining it]) with exact tie grouping."""
    fl = mu.floats()
    vals = {m: _float_value(m, fl) for m in p.support()}
    best_f = max(vals.values())
    tol = 1e-9 * max(1.0, abs(best_f)) + 1e-9
    cands = [m for m in p.support() if vals[m] >= best_f - 8 * tol]
    exact = [(m, _monomial_value(m, mu)) for m in cands]
    best = exact[0][1]
    for _, v in exact[1:]:
        if v > best:
            best = v
    top = [m for m, v in exact if (v - best).is_zero()]
    return best, top


def mu_degree_poly(p: Polynomial, mu: WeightVector):
    """deg_mu(p): the largest weighted exponent sum, NEG_INF for p = 0."""
    _check(p, mu)
    if p.is_zero():
        return NEG_INF
    return _top_monomials(p, mu)[0]


def mu_homogeneous_part(p: Polynomial, mu: WeightVector, value) -> Polynomial:
    """Sum of the terms of p whose weighted degree equals ``value`` exactly."""
    _check(p, mu)
    if value in (INF, NEG_INF):
        raise DomainError("homogeneous part needs a finite degree")
    if not isinstance(value, NumberFieldElement):
        value = mu.field.rational(Fraction(value))
    fl = mu.floats()
    target = float(value)
    tol = 1e-6 * max(1.0, abs(target)) + 1e-9
    keep = {}
    for m, c in p.items():
        if abs(_float_value(m, fl) - target) <= tol and (_monomial_value(m, mu) - value).is_zero():
            keep[m] = c
    return Polynomial(p.arity, keep)


def is_mu_homogeneous(p: Polynomial, mu: WeightVector, value=None) -> bool:
    if p.is_zero():
        return True
    if value is None:
        value = mu_degree_poly(p, mu)
    return mu_homogeneous_part(p, mu, value) == p


def graded_pieces(p: Polynomial, mu: WeightVector):
    """List of (degree, piece) for the mu-grading of p, increasing degree."""
    _check(p, mu)
    fl = mu.floats()
    groups = []  # list of [value, float, {m: c}]
    for m, c in p.sorted_terms():
        v = _monomial_value(m, mu)
        fv = _float_value(m, fl)
        for g in groups:
            if abs(g[1] - fv) <= 1e-6 * max(1.0, abs(fv)) + 1e-9 and (g[0] - v).is_zero():
                g[2][m] = c
                break
        else:
            groups.append([v, fv, {m: c}])
    groups.sort(key=lambda g: g[1])
    # float ordering is only a hint; fix it exactly
    ordered = []
    for g in groups:
        k = len(ordered)
        while k > 0 and ordered[k - 1][0] > g[0]:
            k -= 1
        ordered.insert(k, g)
    return [(g[0], Polynomial(p.arity, g[2])) for g in ordered]


def mu_degree_endo(f: Endomorphism, mu: WeightVector):
    """deg_mu(f) for an endomorphism: finite value, or INF."""
    if f.arity != len(mu):
        raise StructuralError("weight vector and endomorphism have different arities")
    pos = set(mu.positive())
    best = None
    for i, c in enumerate(f):
        if i not in pos:
            if c.variables() & pos:
                return INF
            continue
        if c.is_zero():
            continue
        d = mu_degree_poly(c, mu) / mu.entries[i]
        if best is None or d > best:
            best = d
    if best is None or best.sign() < 0:
        return mu.field.zero()
    return best


def mu_leading_endo(f: Endomorphism, mu: WeightVector, theta=None) -> Endomorphism:
    """The mu-leading part: g_j is the homogeneous part of f_j of degree theta*mu_j."""
    if theta is None:
        theta = mu_degree_endo(f, mu)
    if theta == INF:
        raise DomainError("mu-degree is infinite")
    if not isinstance(theta, NumberFieldElement):
        theta = mu.field.rational(Fraction(theta))
    return Endomorphism([mu_homogeneous_part(c, mu, theta * mu.entries[j]) for j, c in enumerate(f)])


def is_mu_homogeneous_endo(h: Endomorphism, mu: WeightVector, theta) -> bool:
    if theta in (INF, NEG_INF):
        raise DomainError("theta must be finite")
    if not isinstance(theta, NumberFieldElement):
        theta = mu.field.rational(Fraction(theta))
    return all(is_mu_homogeneous(c, mu, theta * mu.entries[i]) for i, c in enumerate(h))


def decompose_endo(f: Endomorphism, mu: WeightVector, theta):
    """Write f as a sum of mu-homogeneous endomorphisms g_xi with 0 <= xi <= theta.

    Components with zero weight go entirely into the xi = 0 piece.  Returns a
    list of (xi, g_xi) sorted by increasing xi.
    """
    if not isinstance(theta, NumberFieldElement):
        theta = mu.field.rational(Fraction(theta))
    d = mu_degree_endo(f, mu)
    if d == INF or d > theta:
        raise DomainError("deg_mu(f) exceeds theta")
    n = f.arity
    pieces = []  # [xi, {component: poly}]

    def slot(xi):
        for entry in pieces:
            if (entry[0] - xi).is_zero():
                return entry[1]
        comp = {}
        pieces.append([xi, comp])
        return comp

    zero = mu.field.zero()
    for i, c in enumerate(f):
        if c.is_zero():
            continue
        if mu.entries[i].sign() == 0:
            slot(zero)[i] = c
            continue
        for value, part in graded_pieces(c, mu):
            slot(value / mu.entries[i])[i] = part
    pieces.sort(key=lambda e: float(e[0]))
    out = []
    for xi, comp in pieces:
        out.append((xi, Endomorphism([comp.get(i, Polynomial.zero(n)) for i in range(n)])))
    return out
