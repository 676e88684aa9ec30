"""Text grammar for polynomials and endomorphisms.

Grammar (whitespace ignored)::

    endo    := "(" expr ("," expr)* ")"
    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/" | <juxtaposition>) unary)*
    unary   := ("+" | "-") unary | power
    power   := atom (("^" | "**") INT)?
    atom    := INT | VAR | "(" expr ")"

Variables are ``x1 .. xn``.  In univariate mode the bare name ``x`` is also
accepted and means ``x1``.  Division is only allowed by non-zero constants.
The printer emits terms in descending graded lexicographic order, and
``parse(format(p)) == p`` holds exactly.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError
from .polynomial import Endomorphism, Polynomial

_TOKEN = re.compile(r"\s*(?:(\d+)|(x\d*)|(\*\*|[-+*/^(),]))")


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start, text)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            out.append(("num", int(m.group(1)), start))
        elif m.group(2) is not None:
            out.append(("var", m.group(2), start))
        else:
            out.append(("op", m.group(3), start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text, univariate=False):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.univariate = univariate
        self.max_var = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            found = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"expected {op!r}, found {found}", pos, self.text)

    # expressions are built as dicts {exponent-tuple-with-var-index: coeff}
    # over a growing variable list; we use sparse dicts keyed by frozenset-free
    # tuples of (var, exp) pairs so the arity can be fixed at the end.
    def expr(self):
        acc = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-" and len(val) == 1:
                self.take()
                rhs = self.term()
                acc = _add(acc, rhs if val == "+" else _neg(rhs))
            else:
                return acc

    def _starts_atom(self):
        kind, val, _ = self.peek()
        return kind in ("num", "var") or (kind == "op" and val == "(")

    def term(self):
        acc = self.unary()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = _mul(acc, self.unary())
            elif kind == "op" and val == "/":
                self.take()
                rhs = self.unary()
                c = _as_constant(rhs)
                if c is None:
                    raise ParseError("division is only allowed by constants", pos, self.text)
                if c == 0:
                    raise ParseError("division by zero", pos, self.text)
                acc = _scale(acc, Fraction(1) / c)
            elif self._starts_atom():
                acc = _mul(acc, self.power())
            else:
                return acc

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val in ("-", "+"):
            self.take()
            inner = self.unary()
            return _neg(inner) if val == "-" else inner
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val in ("^", "**"):
            self.take()
            k2, v2, p2 = self.take()
            if k2 != "num":
                raise ParseError("exponent must be a non-negative integer", p2, self.text)
            return _pow(base, v2)
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return {(): Fraction(val)}
        if kind == "var":
            if val == "x":
                if not self.univariate:
                    raise ParseError("variables must be written x1, x2, ...", pos, self.text)
                idx = 1
            else:
                idx = int(val[1:])
                if idx < 1:
                    raise ParseError("variable indices start at 1", pos, self.text)
            self.max_var = max(self.max_var, idx)
            return {((idx, 1),): Fraction(1)}
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        found = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"unexpected {found}", pos, self.text)


def _canon(mono):
    d = {}
    for v, e in mono:
        d[v] = d.get(v, 0) + e
    return tuple(sorted((v, e) for v, e in d.items() if e))


def _add(a, b):
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) + c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _neg(a):
    return {m: -c for m, c in a.items()}


def _scale(a, c):
    return {m: v * c for m, v in a.items() if v * c}


def _mul(a, b):
    out = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = _canon(m1 + m2)
            out[m] = out.get(m, 0) + c1 * c2
    return {m: c for m, c in out.items() if c}


def _pow(a, e):
    out = {(): Fraction(1)}
    for _ in range(e):
        out = _mul(out, a)
    return out


def _as_constant(a):
    if not a:
        return Fraction(0)
    if list(a) == [()]:
        return a[()]
    return None


def _to_polynomial(a, arity):
    terms = {}
    for m, c in a.items():
        exps = [0] * arity
        for v, e in m:
            exps[v - 1] += e
        terms[tuple(exps)] = c
    return Polynomial(arity, terms)


def parse_polynomial(text: str, arity: int | None = None, univariate: bool = False) -> Polynomial:
    """Parse a polynomial; the arity defaults to the largest variable index used."""
    p = _Parser(text, univariate=univariate)
    tree = p.expr()
    kind, val, pos = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected {val!r}", pos, text)
    n = arity if arity is not None else max(p.max_var, 1)
    if p.max_var > n:
        raise ParseError(f"variable x{p.max_var} exceeds arity {n}", None, text)
    return _to_polynomial(tree, n)


def parse_endomorphism(text: str) -> Endomorphism:
    p = _Parser(text)
    kind, val, pos = p.peek()
    if kind != "op" or val != "(":
        raise ParseError("an endomorphism must start with '('", pos, text)
    p.take()
    trees = [p.expr()]
    while True:
        kind, val, pos = p.take()
        if kind == "op" and val == ",":
            trees.append(p.expr())
        elif kind == "op" and val == ")":
            break
        else:
            found = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"expected ',' or ')', found {found}", pos, text)
    kind, val, pos = p.peek()
    if kind != "end":
        raise ParseError(f"trailing input {val!r}", pos, text)
    n = len(trees)
    if p.max_var > n:
        raise ParseError(f"variable x{p.max_var} used in an endomorphism of arity {n}", None, text)
    return Endomorphism([_to_polynomial(t, n) for t in trees])


def _fmt_coeff(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_monomial(m, names):
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(names(i))
        elif e:
            parts.append(f"{names(i)}^{e}")
    return "*".join(parts)


def format_polynomial(p: Polynomial, names=None) -> str:
    if names is None:
        names = lambda i: f"x{i + 1}"  # noqa: E731
    if p.is_zero():
        return "0"
    pieces = []
    for k, (m, c) in enumerate(p.sorted_terms()):
        neg = c < 0
        a = -c if neg else c
        mono = _fmt_monomial(m, names)
        if not mono:
            body = _fmt_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_fmt_coeff(a)}*{mono}"
        if k == 0:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append((" - " if neg else " + ") + body)
    return "".join(pieces)


def format_univariate(coeffs, var="x") -> str:
    """Format a dense coefficient list (lowest degree first)."""
    terms = {(i,): c for i, c in enumerate(coeffs) if c}
    return format_polynomial(Polynomial(1, terms), names=lambda i: var)


def format_endomorphism(f: Endomorphism) -> str:
    return "(" + ", ".join(format_polynomial(c) for c in f) + ")"
