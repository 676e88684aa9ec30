"""Certified real algebraic numbers and arithmetic in Q(theta).

A :class:`RealAlgebraicNumber` is a squarefree primitive integer polynomial
together with a rational open interval holding exactly one of its real roots.
Equality is decided exactly with the gcd-in-interval test, order by interval
refinement.  :class:`NumberField` gives exact arithmetic on polynomial
expressions in a fixed real algebraic number; the defining polynomial need not
be irreducible.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from . import upoly
from .errors import DomainError, InternalError

IntPolynomial = tuple  # integer coefficients, lowest degree first


# ---------------------------------------------------------------------------
# real algebraic numbers


@dataclass(frozen=True, eq=False)
class RealAlgebraicNumber:
    defining: tuple
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not self.lo < self.hi:
            raise InternalError("empty isolating interval")

    # construction --------------------------------------------------------
    @classmethod
    def from_rational(cls, r) -> "RealAlgebraicNumber":
        r = Fraction(r)
        return cls((-r.numerator, r.denominator), r - 1, r + 1)

    @classmethod
    def from_interval(cls, p, lo, hi) -> "RealAlgebraicNumber":
        """Wrap the unique root of ``p`` in (lo, hi), shrinking if an endpoint is a root."""
        p = upoly.squarefree(p)
        lo, hi = Fraction(lo), Fraction(hi)
        if upoly.evaluate(p, lo) == 0 or upoly.evaluate(p, hi) == 0:
            raise InternalError("interval endpoint is a root")
        if upoly.count_roots(p, lo, hi) != 1:
            raise InternalError("interval does not isolate a single root")
        return cls(p, lo, hi)

    # basic properties ---------------------------------------------------
    @property
    def degree(self):
        return upoly.deg(self.defining)

    def rational_value(self):
        """The exact value if the number is rational, else None."""
        if self.degree == 1:
            return Fraction(-self.defining[0], self.defining[1])
        # rational roots of the defining polynomial divide the constant term
        for r in _rational_roots(self.defining):
            if self.lo < r < self.hi:
                return r
        return None

    def is_integer(self):
        r = self.rational_value()
        return r is not None and r.denominator == 1

    def refine(self, width=Fraction(1, 2**64)) -> "RealAlgebraicNumber":
        """Return an equivalent number whose interval is no wider than ``width``."""
        p, lo, hi = self.defining, self.lo, self.hi
        width = Fraction(width)
        slo = upoly.sign(upoly.evaluate(p, lo))
        while hi - lo > width:
            mid = (lo + hi) / 2
            v = upoly.evaluate(p, mid)
            if v == 0:
                # rational root: centre a small interval on it
                d = width / 4
                while upoly.count_roots(p, mid - d, mid + d) != 1 or \
                        upoly.evaluate(p, mid - d) == 0 or upoly.evaluate(p, mid + d) == 0:
                    d /= 2
                return RealAlgebraicNumber(p, mid - d, mid + d)
            if upoly.sign(v) == slo:
                lo = mid
            else:
                hi = mid
        return RealAlgebraicNumber(p, lo, hi)

    def approx(self, digits=30) -> str:
        """Decimal string correct to about ``digits`` significant digits."""
        width = Fraction(1, 10 ** (digits + 3))
        scale = max(abs(self.lo), abs(self.hi), Fraction(1))
        r = self.refine(width * scale)
        with mpmath.workdps(digits + 10):
            v = mpmath.mpf(r.lo.numerator) / r.lo.denominator
            v2 = mpmath.mpf(r.hi.numerator) / r.hi.denominator
            return mpmath.nstr((v + v2) / 2, digits)

    def __float__(self):
        r = self.refine(Fraction(1, 2**60) * max(1, abs(self.lo)))
        return float((r.lo + r.hi) / 2)

    def mpf(self, bits=256):
        r = self.refine(Fraction(1, 2 ** (bits + 4)) * max(1, abs(self.lo)))
        with mpmath.workprec(bits + 20):
            return (mpmath.mpf(r.lo.numerator) / r.lo.denominator
                    + mpmath.mpf(r.hi.numerator) / r.hi.denominator) / 2

    # comparisons --------------------------------------------------------
    def compare(self, other) -> int:
        return compare(self, other)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RealAlgebraicNumber.from_rational(other)
        if not isinstance(other, RealAlgebraicNumber):
            return NotImplemented
        return compare(self, other) == 0

    def __lt__(self, other):
        return compare(self, _ran(other)) < 0

    def __le__(self, other):
        return compare(self, _ran(other)) <= 0

    def __gt__(self, other):
        return compare(self, _ran(other)) > 0

    def __ge__(self, other):
        return compare(self, _ran(other)) >= 0

    __hash__ = None

    def __neg__(self):
        return RealAlgebraicNumber(upoly.primitive(upoly.mirror(self.defining)), -self.hi, -self.lo)

    def sign(self) -> int:
        return compare(self, RealAlgebraicNumber.from_rational(0))

    def power(self, k: int) -> "RealAlgebraicNumber":
        """self**k for k >= 1 (defining polynomial from a companion-matrix power)."""
        if k < 1:
            raise DomainError("power needs k >= 1")
        if k == 1:
            return self
        C = companion_matrix(self.defining)
        P = matrix_power(C, k)
        q = upoly.squarefree(upoly.char_poly(P))
        x = self
        while True:
            lo, hi = _interval_pow(x.lo, x.hi, k)
            if lo < hi and upoly.evaluate(q, lo) and upoly.evaluate(q, hi) \
                    and upoly.count_roots(q, lo, hi) == 1:
                return RealAlgebraicNumber(q, lo, hi)
            x = x.refine((x.hi - x.lo) / 16)

    def to_record(self, digits=30):
        return {
            "defining": [int(c) for c in self.defining],
            "interval": [_fmt_frac(self.lo), _fmt_frac(self.hi)],
            "approx": self.approx(digits),
        }

    @classmethod
    def from_record(cls, rec):
        lo, hi = (Fraction(s) for s in rec["interval"])
        return cls.from_interval(tuple(int(c) for c in rec["defining"]), lo, hi)

    def __repr__(self):
        return f"RealAlgebraicNumber({self.approx(12)}; {format_int_poly(self.defining)})"

    def __str__(self):
        r = self.rational_value()
        if r is not None:
            return str(r)
        return self.approx(12)


def _fmt_frac(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _interval_pow(lo, hi, k):
    vals = (lo ** k, hi ** k)
    a, b = min(vals), max(vals)
    if lo < 0 < hi and k % 2 == 0:
        a = Fraction(0)
    return a, b


def _ran(x):
    if isinstance(x, RealAlgebraicNumber):
        return x
    if isinstance(x, (int, Fraction)):
        return RealAlgebraicNumber.from_rational(x)
    raise TypeError(f"cannot compare with {type(x).__name__}")


def _rational_roots(p):
    """Rational roots of an integer polynomial (small-degree helper)."""
    p = upoly.primitive(p)
    if not p:
        return []
    roots = []
    if p[0] == 0:
        roots.append(Fraction(0))
        k = next(i for i, c in enumerate(p) if c)
        p = p[k:]
    a0, an = abs(p[0]), abs(p[-1])
    if upoly.deg(p) == 0:
        return roots
    if a0 > 10**12 or an > 10**12:
        return roots + _rational_roots_by_isolation(p)
    for q in _divisors(an):
        for r in _divisors(a0):
            for s in (1, -1):
                x = Fraction(s * r, q)
                if x not in roots and upoly.evaluate(p, x) == 0:
                    roots.append(x)
    return roots


def _rational_roots_by_isolation(p):
    out = []
    for r in isolate_real_roots(p):
        rr = r.refine(Fraction(1, 2**80))
        c = Fraction((rr.lo + rr.hi) / 2).limit_denominator(abs(p[-1]))
        if upoly.evaluate(p, c) == 0:
            out.append(c)
    return out


def _divisors(n):
    small = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def format_int_poly(p, var="x"):
    from .textio import format_univariate
    return format_univariate(p, var)


def isolate_real_roots(p: Sequence[int]) -> list[RealAlgebraicNumber]:
    """Sorted isolating intervals for the distinct real roots of ``p``."""
    p = upoly.trim(p)
    if not p:
        raise DomainError("the zero polynomial has no isolated roots")
    q = upoly.squarefree(p)
    if upoly.deg(q) < 1:
        return []
    B = upoly.cauchy_bound(q)
    out = []
    stack = [(-B, B)]
    while stack:
        lo, hi = stack.pop()
        n = upoly.count_roots(q, lo, hi)
        if n == 0:
            continue
        if n == 1 and upoly.evaluate(q, hi) != 0:
            out.append(RealAlgebraicNumber(q, lo, hi))
            continue
        mid = (lo + hi) / 2
        if upoly.evaluate(q, mid) == 0:
            d = (hi - lo) / 4
            while upoly.count_roots(q, mid - d, mid + d) != 1 or \
                    upoly.evaluate(q, mid - d) == 0 or upoly.evaluate(q, mid + d) == 0:
                d /= 2
            out.append(RealAlgebraicNumber(q, mid - d, mid + d))
            stack.append((lo, mid - d))
            stack.append((mid + d, hi))
        else:
            stack.append((lo, mid))
            stack.append((mid, hi))
    out.sort(key=lambda r: r.lo)
    return out


def largest_real_root(p: Sequence[int]) -> RealAlgebraicNumber | None:
    """The maximum real root of ``p`` or None if there is none."""
    p = upoly.trim(p)
    if not p:
        raise DomainError("the zero polynomial has no largest root")
    roots = isolate_real_roots(p)
    return roots[-1] if roots else None


def compare(a: RealAlgebraicNumber, b: RealAlgebraicNumber) -> int:
    """Exact trichotomy: -1, 0 or 1."""
    if a.hi <= b.lo:
        return -1
    if b.hi <= a.lo:
        return 1
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    g = upoly.gcd(a.defining, b.defining)
    if upoly.deg(g) >= 1 and upoly.count_roots(g, lo, hi) - (upoly.evaluate(g, hi) == 0) > 0:
        return 0
    while True:
        a = a.refine((a.hi - a.lo) / 4)
        b = b.refine((b.hi - b.lo) / 4)
        if a.hi <= b.lo:
            return -1
        if b.hi <= a.lo:
            return 1


def max_number(values):
    best = None
    for v in values:
        if best is None or compare(v, best) > 0:
            best = v
    return best


# ---------------------------------------------------------------------------
# matrices over the integers


def companion_matrix(p):
    """Companion matrix of a monic (or primitive) polynomial; eigenvalues = roots."""
    p = tuple(Fraction(c) for c in p)
    n = upoly.deg(p)
    lc = p[-1]
    C = [[Fraction(0)] * n for _ in range(n)]
    for i in range(1, n):
        C[i][i - 1] = Fraction(1)
    for i in range(n):
        C[i][n - 1] = -p[i] / lc
    return C


def matrix_mul(A, B):
    n, m, k = len(A), len(B), len(B[0])
    return [[sum(A[i][t] * B[t][j] for t in range(m)) for j in range(k)] for i in range(n)]


def matrix_power(A, k):
    n = len(A)
    R = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    while k:
        if k & 1:
            R = matrix_mul(R, A)
        k >>= 1
        if k:
            A = matrix_mul(A, A)
    return R


def char_poly(M) -> IntPolynomial:
    """Exact characteristic polynomial of a square integer matrix."""
    M = [list(row) for row in M]
    if any(isinstance(x, Fraction) and x.denominator != 1 for row in M for x in row):
        # rational matrix: scale to integers and rescale the variable
        den = 1
        for row in M:
            for x in row:
                den = den * Fraction(x).denominator // _igcd(den, Fraction(x).denominator)
        P = upoly.char_poly([[int(Fraction(x) * den) for x in row] for row in M])
        n = len(M)
        return upoly.primitive(tuple(Fraction(c) / Fraction(den) ** (n - i) for i, c in enumerate(P)))
    return upoly.char_poly([[int(x) for x in row] for row in M])


def _igcd(a, b):
    from math import gcd
    return gcd(a, b)


def kronecker_square(A):
    n = len(A)
    return [[A[i // n][j // n] * A[i % n][j % n] for j in range(n * n)] for i in range(n * n)]


# ---------------------------------------------------------------------------
# number fields Q(theta)


class NumberField:
    """Arithmetic in Q(theta) for a real algebraic number theta.

    Elements are rational polynomials in theta reduced modulo a defining
    polynomial.  The defining polynomial may be reducible; whenever a
    computation meets a non-trivial factor, the factor vanishing at theta is
    kept (dynamic evaluation).  This only changes internal representatives,
    never values.
    """

    def __init__(self, root: RealAlgebraicNumber):
        self.root = root
        self._modulus = tuple(Fraction(c) for c in upoly.monic(root.defining))
        self._theta = root

    @property
    def modulus(self):
        return self._modulus

    @property
    def degree(self):
        return upoly.deg(self._modulus)

    def _theta_interval(self, width):
        if self._theta.hi - self._theta.lo > width:
            self._theta = self._theta.refine(width)
        return self._theta.lo, self._theta.hi

    def _keep_factor(self, g):
        """Replace the modulus by the factor g or modulus/g, whichever vanishes at theta."""
        g = upoly.monic(g)
        lo, hi = self.root.lo, self.root.hi
        if upoly.count_roots(g, lo, hi) > 0:
            self._modulus = g
        else:
            self._modulus = upoly.monic(upoly.divmod_(self._modulus, g)[0])

    def reduce(self, rep):
        rep = upoly.trim(Fraction(c) for c in rep)
        if len(rep) > self.degree:
            rep = upoly.rem(rep, self._modulus)
        return rep

    def element(self, rep) -> "NumberFieldElement":
        return NumberFieldElement(self, self.reduce(rep))

    def rational(self, c) -> "NumberFieldElement":
        c = Fraction(c)
        return NumberFieldElement(self, (c,) if c else ())

    def theta(self) -> "NumberFieldElement":
        return self.element((0, 1))

    def zero(self):
        return NumberFieldElement(self, ())

    def one(self):
        return self.rational(1)

    def is_zero(self, rep) -> bool:
        rep = self.reduce(rep)
        if not rep:
            return True
        g = upoly.gcd(rep, self._modulus)
        if upoly.deg(g) < 1:
            return False
        self._keep_factor(g)
        return not self.reduce(rep)

    def sign(self, rep) -> int:
        rep = self.reduce(rep)
        if not rep:
            return 0
        if len(rep) == 1:
            return upoly.sign(rep[0])
        width = Fraction(1, 2**64)
        lo, hi = self._theta_interval(width)
        a, b = upoly.interval_eval(rep, lo, hi)
        if a > 0:
            return 1
        if b < 0:
            return -1
        if self.is_zero(rep):
            return 0
        while True:
            width /= 2**32
            lo, hi = self._theta_interval(width)
            a, b = upoly.interval_eval(rep, lo, hi)
            if a > 0:
                return 1
            if b < 0:
                return -1

    def inverse(self, rep):
        rep = self.reduce(rep)
        if self.is_zero(rep):
            raise ZeroDivisionError("inverse of zero in Q(theta)")
        while True:
            g, s, _ = upoly.ext_gcd(rep, self._modulus)
            if upoly.deg(g) == 0:
                return self.reduce(s)
            self._keep_factor(g)
            rep = self.reduce(rep)

    def interval(self, rep, width=Fraction(1, 2**64)):
        lo, hi = self._theta_interval(width)
        return upoly.interval_eval(self.reduce(rep), lo, hi)


class NumberFieldElement:
    """An element rep(theta) of a :class:`NumberField`."""

    __slots__ = ("field", "rep")

    def __init__(self, field_: NumberField, rep):
        self.field = field_
        self.rep = rep

    def _lift(self, other):
        if isinstance(other, NumberFieldElement):
            if other.field is not self.field:
                raise DomainError("elements belong to different number fields")
            return other.rep
        if isinstance(other, (int, Fraction)):
            return (Fraction(other),) if other else ()
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return NumberFieldElement(self.field, upoly.add(self.rep, o))

    __radd__ = __add__

    def __neg__(self):
        return NumberFieldElement(self.field, upoly.scale(self.rep, -1))

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return NumberFieldElement(self.field, upoly.sub(self.rep, o))

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return NumberFieldElement(self.field, upoly.sub(o, self.rep))

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.field.element(upoly.mul(self.rep, o))

    __rmul__ = __mul__

    def inverse(self):
        return NumberFieldElement(self.field, self.field.inverse(self.rep))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return NumberFieldElement(self.field, upoly.scale(self.rep, Fraction(1) / Fraction(other)))
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * NumberFieldElement(self.field, self.field.inverse(o))

    def __pow__(self, k):
        result = self.field.one()
        for _ in range(k):
            result = result * self
        return result

    def sign(self):
        return self.field.sign(self.rep)

    def is_zero(self):
        return self.field.is_zero(self.rep)

    def _cmp(self, other):
        o = self._lift(other)
        if o is None:
            raise TypeError("incomparable")
        return self.field.sign(upoly.sub(self.rep, o))

    def __eq__(self, other):
        if isinstance(other, (NumberFieldElement, int, Fraction)):
            return self._cmp(other) == 0
        return NotImplemented

    __hash__ = None

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def rational_value(self):
        rep = self.field.reduce(self.rep)
        if len(rep) <= 1:
            return rep[0] if rep else Fraction(0)
        return None

    def interval(self, width=Fraction(1, 2**64)):
        return self.field.interval(self.rep, width)

    def __float__(self):
        a, b = self.interval(Fraction(1, 2**70))
        return float((a + b) / 2)

    def approx(self, digits=30):
        r = self.rational_value()
        if r is not None:
            r = Fraction(r)
            if r.denominator == 1:
                return str(r.numerator)
        a, b = self.interval(Fraction(1, 10 ** (digits + 6)))
        with mpmath.workdps(digits + 10):
            v = (mpmath.mpf(a.numerator) / a.denominator + mpmath.mpf(b.numerator) / b.denominator) / 2
            return mpmath.nstr(v, digits)

    def to_algebraic(self) -> RealAlgebraicNumber:
        """The value as a standalone real algebraic number."""
        r = self.rational_value()
        if r is not None:
            return RealAlgebraicNumber.from_rational(r)
        # minimal-ish polynomial from the multiplication matrix
        n = self.field.degree
        basis_images = []
        for k in range(n):
            prod = self.field.reduce(upoly.mul(self.rep, (0,) * k + (1,)))
            basis_images.append([prod[i] if i < len(prod) else Fraction(0) for i in range(n)])
        M = [[basis_images[j][i] for j in range(n)] for i in range(n)]
        q = upoly.squarefree(char_poly(M))
        width = Fraction(1, 2**32)
        while True:
            a, b = self.interval(width)
            lo, hi = a - width, b + width
            if upoly.evaluate(q, lo) and upoly.evaluate(q, hi) and upoly.count_roots(q, lo, hi) == 1:
                return RealAlgebraicNumber(q, lo, hi)
            width /= 2**16

    def to_record(self, digits=30):
        return {
            "rep": [_fmt_frac(c) for c in self.field.reduce(self.rep)],
            "approx": self.approx(digits),
        }

    def __repr__(self):
        return f"NF({self.approx(10)})"


_RATIONAL_FIELD = None


def rational_field() -> NumberField:
    """Q viewed as Q(0)."""
    global _RATIONAL_FIELD
    if _RATIONAL_FIELD is None:
        _RATIONAL_FIELD = NumberField(RealAlgebraicNumber((0, 1), Fraction(-1), Fraction(1)))
    return _RATIONAL_FIELD


# ---------------------------------------------------------------------------
# conjugate modulus test


class Verdict(enum.Enum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"


@dataclass
class ModulusReport:
    verdict: Verdict
    precision_bits: int
    detail: str = ""
    moduli: list = field(default_factory=list)


def _roots_with_disks(p, bits):
    """Approximate all complex roots and return (z, r) inclusion disks.

    Durand-Kerner simultaneous iteration via mpmath, followed by the
    a-posteriori bound: every disk of radius n*|p(z_i)/(lc*prod(z_i-z_j))|
    contains a root, and disjoint disks contain exactly one each.
    """
    n = upoly.deg(p)
    with mpmath.workprec(bits + 32):
        coeffs = [mpmath.mpf(int(c)) for c in reversed(p)]
        try:
            zs = mpmath.polyroots(coeffs, maxsteps=200 + 4 * bits, extraprec=2 * bits)
        except mpmath.libmp.libhyper.NoConvergence:
            return None
        if n == 1:
            zs = [zs] if not isinstance(zs, list) else zs
        lc = mpmath.mpf(int(p[-1]))
        disks = []
        for i, z in enumerate(zs):
            val = mpmath.polyval(coeffs, z)
            den = lc
            for j, w in enumerate(zs):
                if j != i:
                    den *= z - w
            if den == 0:
                return None
            rad = n * abs(val / den) * (1 + mpmath.mpf(2) ** (-bits // 2)) + mpmath.mpf(2) ** (-bits)
            disks.append((mpmath.mpc(z), rad))
        for i in range(n):
            for j in range(i + 1, n):
                if abs(disks[i][0] - disks[j][0]) <= disks[i][1] + disks[j][1]:
                    return None
        return disks


def conjugates_within_modulus(p: Sequence[int], lam: RealAlgebraicNumber, strict: bool,
                              precision_cap: int = 256) -> ModulusReport:
    """Decide whether every root of ``p`` other than ``lam`` has modulus < lam (or <=)."""
    p = upoly.squarefree(p)
    reals = isolate_real_roots(p)
    if not any(compare(r, lam) == 0 for r in reals):
        raise DomainError("lambda is not a root of the given polynomial")
    neg_lam = -lam
    for r in reals:
        if compare(r, lam) == 0:
            continue
        c1 = compare(r, lam)
        c2 = compare(r, neg_lam)
        if c1 > 0 or c2 < 0:
            return ModulusReport(Verdict.NO, 0, "a real conjugate exceeds lambda in modulus")
        if strict and (c1 == 0 or c2 == 0):
            return ModulusReport(Verdict.NO, 0, "a real conjugate ties with lambda in modulus")
    n_complex = upoly.deg(p) - len(reals)
    if n_complex == 0:
        return ModulusReport(Verdict.YES, 0, "all conjugates real")

    pair_poly = None
    lam_sq = None
    bits = 64
    last = None
    while bits <= precision_cap:
        disks = _roots_with_disks(p, bits)
        if disks is None:
            bits *= 2
            continue
        nonreal = [(z, r) for z, r in disks if abs(z.imag) > r]
        if len(nonreal) != n_complex:
            bits *= 2
            continue
        with mpmath.workprec(bits + 32):
            lam_v = lam.mpf(bits)
            lam_err = mpmath.mpf(2) ** (-bits)
            undecided = []
            moduli = []
            for z, r in nonreal:
                m = abs(z)
                moduli.append(m)
                if m + r < lam_v - lam_err:
                    continue
                if m - r > lam_v + lam_err:
                    return ModulusReport(Verdict.NO, bits, "a complex conjugate exceeds lambda",
                                         [mpmath.nstr(x, 15) for x in moduli])
                undecided.append((z, r))
        if not undecided:
            return ModulusReport(Verdict.YES, bits, "complex conjugates separated",
                                 [mpmath.nstr(x, 15) for x in moduli])
        # possible tie: |mu|^2 = mu * conj(mu) is a root of the pair-product polynomial
        if pair_poly is None:
            C = companion_matrix(p)
            pair_poly = upoly.squarefree(char_poly(kronecker_square(C)))
            lam_sq = lam.power(2)
        resolved = True
        for z, r in undecided:
            tie = _modulus_tie(pair_poly, lam_sq, z, r, bits)
            if tie is None:
                resolved = False
                break
            if tie == 0:
                if strict:
                    return ModulusReport(Verdict.NO, bits, "a complex conjugate ties with lambda")
            elif tie > 0:
                return ModulusReport(Verdict.NO, bits, "a complex conjugate exceeds lambda")
        if resolved:
            return ModulusReport(Verdict.YES, bits, "ties resolved exactly")
        last = bits
        bits *= 2
    return ModulusReport(Verdict.INCONCLUSIVE, last or precision_cap,
                         "precision cap reached before the modulus comparison was decided")


def _modulus_tie(pair_poly, lam_sq, z, r, bits):
    """Compare |z|^2 with lam^2 exactly, or None if the disk is still too coarse."""
    with mpmath.workprec(bits + 32):
        m = abs(z)
        lo_v, hi_v = max(m - r, 0) ** 2, (m + r) ** 2
        lo = Fraction(int(mpmath.floor(lo_v * 2**bits))) / 2**bits - Fraction(1, 2**bits)
        hi = Fraction(int(mpmath.ceil(hi_v * 2**bits))) / 2**bits + Fraction(1, 2**bits)
    # |z|^2 is a real root of pair_poly inside [lo, hi]; identify it once the
    # window meets a single (refined) isolating interval
    roots = [x.refine((hi - lo) / 4) for x in _isolated(pair_poly)]
    hits = [x for x in roots if x.hi > lo and x.lo < hi]
    if len(hits) != 1:
        return None
    return compare(hits[0], lam_sq)


_ISOLATED = {}


def _isolated(p):
    if p not in _ISOLATED:
        _ISOLATED[p] = isolate_real_roots(p)
    return _ISOLATED[p]
