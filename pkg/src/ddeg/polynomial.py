"""Sparse multivariate polynomials over the rationals and endomorphisms of affine space.

Polynomials are immutable maps from exponent tuples to non-zero rational
coefficients.  Coefficients are stored as ``int`` when integral and as
``fractions.Fraction`` otherwise, so that equality and hashing are canonical.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from operator import add
from typing import Iterable, Mapping, Sequence

import flint

from .errors import DomainError, ResourceLimitError, StructuralError

NEG_INF = float("-inf")

# primes used for certified non-vanishing tests (a non-zero value modulo p
# proves the polynomial is non-zero)
PRIMES = (2**61 - 1, 2**31 - 1, 1000000007)


def _norm(c):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return c
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


_FLINT_THRESHOLD = 400


def _to_fmpq(c):
    return flint.fmpq(c.numerator, c.denominator) if isinstance(c, Fraction) else flint.fmpq(c)


def _from_fmpq(c):
    p, q = int(c.p), int(c.q)
    return p if q == 1 else Fraction(p, q)


def _flint_mul(a, b, arity):
    """Product of two term dictionaries through flint's sparse multivariate arithmetic."""
    ctx = flint.fmpq_mpoly_ctx.get(("x", max(arity, 1)), "lex")
    pad = () if arity else (0,)
    pa = ctx.from_dict({m + pad: _to_fmpq(c) for m, c in a.items()})
    pb = ctx.from_dict({m + pad: _to_fmpq(c) for m, c in b.items()})
    return {tuple(int(e) for e in m[:arity]): _from_fmpq(c) for m, c in (pa * pb).to_dict().items()}


def _grlex_key(m):
    return (sum(m), m)


@dataclass(frozen=True)
class Budget:
    """Size caps for symbolic computations; ``None`` disables a cap."""

    max_terms: int | None = 200_000
    max_bits: int | None = None

    def check(self, terms: Mapping, what="polynomial"):
        if self.max_terms is not None and len(terms) > self.max_terms:
            raise ResourceLimitError(
                f"{what} exceeds the term budget ({len(terms)} > {self.max_terms})")
        if self.max_bits is not None:
            for c in terms.values():
                if isinstance(c, Fraction):
                    bits = max(c.numerator.bit_length(), c.denominator.bit_length())
                else:
                    bits = c.bit_length()
                if bits > self.max_bits:
                    raise ResourceLimitError(
                        f"{what} has a coefficient of {bits} bits (budget {self.max_bits})")


UNLIMITED = Budget(None, None)


class Polynomial:
    """Exact sparse polynomial in ``arity`` variables ``x1..xn``."""

    __slots__ = ("_arity", "_terms", "_hash")

    def __init__(self, arity: int, terms: Mapping[tuple, object] | None = None, *, _trusted=False):
        if not isinstance(arity, int) or arity < 1:
            raise StructuralError("arity must be a positive integer")
        self._arity = arity
        self._hash = None
        if _trusted:
            self._terms = terms
            return
        clean = {}
        for m, c in (terms or {}).items():
            m = tuple(int(e) for e in m)
            if len(m) != arity:
                raise StructuralError(f"monomial {m} does not have arity {arity}")
            if any(e < 0 for e in m):
                raise StructuralError(f"negative exponent in {m}")
            c = _norm(c)
            if c:
                clean[m] = _norm(clean.get(m, 0) + c)
                if not clean[m]:
                    del clean[m]
        self._terms = clean

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, arity):
        return cls(arity, {}, _trusted=True)

    @classmethod
    def constant(cls, arity, c):
        c = _norm(c)
        return cls(arity, {(0,) * arity: c} if c else {}, _trusted=True)

    @classmethod
    def variable(cls, arity, i):
        """The coordinate function x_{i+1} (``i`` is zero-based)."""
        if not 0 <= i < arity:
            raise StructuralError(f"variable index {i} out of range for arity {arity}")
        m = [0] * arity
        m[i] = 1
        return cls(arity, {tuple(m): 1}, _trusted=True)

    @classmethod
    def monomial(cls, exponents: Sequence[int], coeff=1):
        exponents = tuple(exponents)
        return cls(len(exponents), {exponents: coeff})

    # basic accessors ----------------------------------------------------
    @property
    def arity(self) -> int:
        return self._arity

    @property
    def terms(self) -> Mapping[tuple, object]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self):
        """Exponent tuples in increasing lexicographic order."""
        return sorted(self._terms)

    def sorted_terms(self):
        """Terms in descending graded lexicographic order."""
        return sorted(self._terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def __len__(self):
        return len(self._terms)

    def is_zero(self):
        return not self._terms

    def is_constant(self):
        return not self._terms or list(self._terms) == [(0,) * self._arity]

    def is_monomial(self):
        """True for a single term with non-zero coefficient."""
        return len(self._terms) == 1

    def constant_term(self):
        return self._terms.get((0,) * self._arity, 0)

    def coefficient(self, exponents):
        return self._terms.get(tuple(exponents), 0)

    def variables(self):
        used = set()
        for m in self._terms:
            for i, e in enumerate(m):
                if e:
                    used.add(i)
        return used

    def total_degree(self):
        if not self._terms:
            return NEG_INF
        return max(sum(m) for m in self._terms)

    def partial_degree(self, variables: Iterable[int]):
        """Degree with respect to the given zero-based variable indices."""
        idx = tuple(variables)
        if not idx:
            raise DomainError("partial_degree needs a non-empty variable set")
        if not self._terms:
            return NEG_INF
        return max(sum(m[i] for i in idx) for m in self._terms)

    def degree_in(self, i: int):
        return self.partial_degree((i,))

    def rename(self, positions: Sequence[int], arity: int) -> "Polynomial":
        """Send x_j to x_{positions[j]} in a ring of the given arity (unused variables may collide)."""
        out = {}
        for m, c in self._terms.items():
            e = [0] * arity
            for j, a in enumerate(m):
                if a:
                    e[positions[j]] += a
            key = tuple(e)
            out[key] = out.get(key, 0) + c
        return Polynomial(arity, out)

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial(self._arity, {m: c for m, c in self._terms.items() if sum(m) == d},
                          _trusted=True)

    def coefficient_in(self, i: int, e: int) -> "Polynomial":
        """Coefficient of x_{i+1}^e when the polynomial is viewed in x_{i+1}."""
        out = {}
        for m, c in self._terms.items():
            if m[i] == e:
                mm = list(m)
                mm[i] = 0
                out[tuple(mm)] = c
        return Polynomial(self._arity, out, _trusted=True)

    # equality -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._arity == other._arity and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_term() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._arity, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        from .textio import format_polynomial
        return f"Polynomial({format_polynomial(self)!r})"

    def __str__(self):
        from .textio import format_polynomial
        return format_polynomial(self)

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other._arity != self._arity:
                raise StructuralError("arity mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self._arity, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = _norm(v)
            else:
                out.pop(m, None)
        return Polynomial(self._arity, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self._arity, {m: -c for m, c in self._terms.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c):
        c = _norm(c)
        if not c:
            return Polynomial.zero(self._arity)
        return Polynomial(self._arity, {m: _norm(v * c) for m, v in self._terms.items()},
                          _trusted=True)

    def mul(self, other: "Polynomial", budget: Budget = UNLIMITED) -> "Polynomial":
        if other._arity != self._arity:
            raise StructuralError("arity mismatch")
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        if not b:
            return Polynomial.zero(self._arity)
        if len(b) == 1:
            ((m2, c2),) = b.items()
            if not any(m2):
                return self.scale(c2) if a is self._terms else other.scale(c2)
            out = {tuple(map(add, m1, m2)): _norm(c1 * c2) for m1, c1 in a.items()}
            budget.check(out)
            return Polynomial(self._arity, out, _trusted=True)
        cap = budget.max_terms
        if len(a) * len(b) >= _FLINT_THRESHOLD:
            out = _flint_mul(a, b, self._arity)
            budget.check(out)
            return Polynomial(self._arity, out, _trusted=True)
        out = {}
        get = out.get
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = tuple(map(add, m1, m2))
                out[m] = get(m, 0) + c1 * c2
            if cap is not None and len(out) > cap:
                raise ResourceLimitError(
                    f"product exceeds the term budget ({len(out)} > {cap})")
        out = {m: _norm(c) for m, c in out.items() if c}
        budget.check(out)
        return Polynomial(self._arity, out, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, Polynomial):
            return self.mul(other)
        return NotImplemented

    __rmul__ = __mul__

    def pow(self, e: int, budget: Budget = UNLIMITED) -> "Polynomial":
        if e < 0:
            raise DomainError("negative exponent")
        result = Polynomial.constant(self._arity, 1)
        base = self
        while e:
            if e & 1:
                result = result.mul(base, budget)
            e >>= 1
            if e:
                base = base.mul(base, budget)
        return result

    def __pow__(self, e):
        return self.pow(e)

    def derivative(self, i: int) -> "Polynomial":
        out = {}
        for m, c in self._terms.items():
            if m[i]:
                mm = list(m)
                mm[i] -= 1
                out[tuple(mm)] = _norm(c * m[i])
        return Polynomial(self._arity, out, _trusted=True)

    # evaluation and substitution ----------------------------------------
    def evaluate(self, point: Sequence, modulus: int | None = None):
        """Evaluate at a point; with ``modulus`` the arithmetic is done mod a prime."""
        if len(point) != self._arity:
            raise StructuralError("point has the wrong dimension")
        total = 0
        if modulus is None:
            for m, c in self._terms.items():
                v = c
                for x, e in zip(point, m):
                    if e:
                        v *= x ** e
                total += v
            return _norm(total) if isinstance(total, (int, Fraction)) else total
        p = modulus
        for m, c in self._terms.items():
            v = coeff_mod(c, p)
            for x, e in zip(point, m):
                if e:
                    v = v * pow(x, e, p) % p
            total += v
        return total % p

    def compose(self, inner: Sequence["Polynomial"], budget: Budget = UNLIMITED,
                _cache=None) -> "Polynomial":
        """Substitute ``inner[i]`` for x_{i+1}."""
        if len(inner) != self._arity:
            raise StructuralError("substitution needs one polynomial per variable")
        if not inner:
            raise StructuralError("empty substitution")
        arity = inner[0].arity
        if any(q.arity != arity for q in inner):
            raise StructuralError("inner polynomials must share an arity")
        powers = _cache if _cache is not None else _PowerCache(inner, budget)
        return _substitute(self._terms, 0, self._arity, powers, arity, budget)


def coeff_mod(c, p):
    if isinstance(c, Fraction):
        den = c.denominator % p
        if den == 0:
            raise ZeroDivisionError("denominator divisible by modulus")
        return c.numerator * pow(den, -1, p) % p
    return c % p


class _PowerCache:
    """Memoized powers of the substituted polynomials."""

    def __init__(self, inner, budget):
        self.inner = inner
        self.budget = budget
        self.table = [{1: q} for q in inner]

    def power(self, i, e):
        tab = self.table[i]
        if e in tab:
            return tab[e]
        if e == 0:
            return Polynomial.constant(self.inner[i].arity, 1)
        half = self.power(i, e // 2)
        res = half.mul(half, self.budget)
        if e % 2:
            res = res.mul(self.inner[i], self.budget)
        tab[e] = res
        return res


def _substitute(terms, var, nvars, powers, arity, budget):
    # Horner-style: group by the exponent of the current variable and recurse
    if var == nvars:
        (c,) = terms.values()
        return Polynomial.constant(arity, c)
    if not terms:
        return Polynomial.zero(arity)
    groups = {}
    for m, c in terms.items():
        groups.setdefault(m[0], {})[m[1:]] = c
    result = Polynomial.zero(arity)
    for e in sorted(groups):
        inner = _substitute(groups[e], var + 1, nvars, powers, arity, budget)
        if e:
            inner = inner.mul(powers.power(var, e), budget)
        result = result + inner
        budget.check(result._terms)
    return result


class Endomorphism:
    """An n-tuple of polynomials in n variables, acting on affine n-space."""

    __slots__ = ("_components", "_hash")

    def __init__(self, components: Sequence[Polynomial]):
        comps = tuple(components)
        if not comps:
            raise StructuralError("an endomorphism needs at least one component")
        n = len(comps)
        for c in comps:
            if not isinstance(c, Polynomial):
                raise StructuralError("components must be Polynomial instances")
            if c.arity != n:
                raise StructuralError(
                    f"component arity {c.arity} does not match the number of components {n}")
        self._components = comps
        self._hash = None

    @classmethod
    def identity(cls, n):
        return cls([Polynomial.variable(n, i) for i in range(n)])

    @classmethod
    def from_matrix(cls, M: Sequence[Sequence[int]]):
        """The monomial endomorphism whose i-th component is x^{row i}."""
        return cls([Polynomial.monomial(row) for row in M])

    @property
    def arity(self):
        return len(self._components)

    @property
    def components(self):
        return self._components

    def __getitem__(self, i):
        return self._components[i]

    def __iter__(self):
        return iter(self._components)

    def __len__(self):
        return len(self._components)

    def __eq__(self, other):
        if not isinstance(other, Endomorphism):
            return NotImplemented
        return self._components == other._components

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._components)
        return self._hash

    def __repr__(self):
        from .textio import format_endomorphism
        return f"Endomorphism({format_endomorphism(self)!r})"

    def __str__(self):
        from .textio import format_endomorphism
        return format_endomorphism(self)

    def degree(self):
        return max(c.total_degree() for c in self._components)

    def term_count(self):
        return sum(len(c) for c in self._components)

    def compose(self, inner: "Endomorphism", budget: Budget = UNLIMITED) -> "Endomorphism":
        """Return ``self ∘ inner``."""
        return compose(self, inner, budget)

    def __matmul__(self, inner):
        return compose(self, inner)

    def evaluate(self, point, modulus=None):
        return tuple(c.evaluate(point, modulus) for c in self._components)

    def is_triangular(self):
        return all(max(c.variables(), default=-1) <= i for i, c in enumerate(self._components))

    def is_monomial(self):
        return all(c.is_monomial() for c in self._components)

    def monomial_matrix(self):
        """Exponent matrix of a monomial endomorphism (coefficients ignored)."""
        if not self.is_monomial():
            raise DomainError("not a monomial endomorphism")
        return tuple(c.support()[0] for c in self._components)

    def relabel(self, order: Sequence[int]) -> "Endomorphism":
        """Conjugate by the coordinate permutation y_k = x_{order[k]}."""
        n = self.arity
        if sorted(order) != list(range(n)):
            raise StructuralError("order must be a permutation of the coordinates")
        pos = [0] * n
        for k, j in enumerate(order):
            pos[j] = k
        return Endomorphism([self._components[j].rename(pos, n) for j in order])

    def restrict(self, indices: Sequence[int]) -> "Endomorphism":
        """The sub-endomorphism (f_i)_{i in indices}; each f_i must only use those variables."""
        indices = list(indices)
        keep = set(indices)
        pos = {j: k for k, j in enumerate(indices)}
        comps = []
        for j in indices:
            c = self._components[j]
            if not c.variables() <= keep:
                raise DomainError(f"component {j + 1} depends on variables outside the chosen set")
            comps.append(c.rename([pos.get(v, 0) for v in range(self.arity)], len(indices)))
        return Endomorphism(comps)


def compose(outer: Endomorphism, inner: Endomorphism, budget: Budget = UNLIMITED) -> Endomorphism:
    if outer.arity != inner.arity:
        raise StructuralError(f"arity mismatch: {outer.arity} vs {inner.arity}")
    cache = _PowerCache(inner.components, budget)
    return Endomorphism([c.compose(inner.components, budget, _cache=cache) for c in outer])


def iterate(f: Endomorphism, r: int, budget: Budget = UNLIMITED) -> Endomorphism:
    """f^r by sequential composition f ∘ f^{r-1}.

    On a budget overflow the raised ``ResourceLimitError`` carries
    ``partial = (k, f^k)`` for the largest k that was completed.
    """
    if r < 1:
        raise DomainError("iterate needs r >= 1")
    current = f
    for k in range(2, r + 1):
        try:
            current = compose(f, current, budget)
        except ResourceLimitError as exc:
            raise ResourceLimitError(f"f^{k}: {exc}", partial=(k - 1, current)) from None
    return current


def total_degree(p: Polynomial):
    return p.total_degree()


def degree(f: Endomorphism):
    return f.degree()


def partial_degree(p: Polynomial, variables: Iterable[int]):
    return p.partial_degree(variables)


def _det_mod(rows, p):
    a = [list(r) for r in rows]
    n = len(a)
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] % p), None)
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det = det * a[col][col] % p
        inv = pow(a[col][col], -1, p)
        for r in range(col + 1, n):
            if a[r][col] % p:
                t = a[r][col] * inv % p
                a[r] = [(x - t * y) % p for x, y in zip(a[r], a[col])]
    return det % p


def jacobian(f: Endomorphism):
    return [[c.derivative(j) for j in range(f.arity)] for c in f]


def jacobian_determinant(f: Endomorphism, budget: Budget = UNLIMITED) -> Polynomial:
    """Symbolic Jacobian determinant via cofactor expansion over column subsets."""
    J = jacobian(f)
    n = f.arity
    # minors of the last k rows indexed by column bitmask
    minors = {0: Polynomial.constant(n, 1)}
    for k in range(1, n + 1):
        row = J[n - k]
        nxt = {}
        for mask, minor in minors.items():
            if minor.is_zero():
                continue
            # expand along `row`; the sign is the position of j among mask | {j}
            for j in range(n):
                if mask >> j & 1:
                    continue
                entry = row[j]
                if entry.is_zero():
                    continue
                term = entry.mul(minor, budget)
                if bin(mask & ((1 << j) - 1)).count("1") % 2:
                    term = -term
                key = mask | 1 << j
                nxt[key] = nxt.get(key, Polynomial.zero(n)) + term
        minors = nxt
    return minors.get((1 << n) - 1, Polynomial.zero(n))


def is_dominant(f: Endomorphism, seed: int = 0, trials: int = 4) -> bool:
    """Dominance test: non-vanishing Jacobian determinant.

    Triangular inputs use deg_{x_i}(f_i) >= 1.  Otherwise the Jacobian is
    evaluated at random points modulo large primes; a non-zero value certifies
    dominance.  If every sample vanishes the determinant is expanded
    symbolically, which decides the question exactly.
    """
    if f.is_triangular():
        return all(c.degree_in(i) >= 1 for i, c in enumerate(f))
    J = jacobian(f)
    rng = random.Random(seed)
    for t in range(trials):
        p = PRIMES[t % len(PRIMES)]
        pt = [rng.randrange(1, p) for _ in range(f.arity)]
        try:
            rows = [[e.evaluate(pt, p) for e in row] for row in J]
        except ZeroDivisionError:
            continue
        if _det_mod(rows, p):
            return True
    return not jacobian_determinant(f).is_zero()
