"""Perron, weak Perron and Handelman numbers, and maps realizing them as dynamical degrees."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

import flint
import networkx as nx
import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from . import upoly
from .algebraic import (RealAlgebraicNumber, Verdict, char_poly, companion_matrix, compare,
                        conjugates_within_modulus, format_int_poly, isolate_real_roots, largest_real_root,
                        matrix_power)
from .config import DEFAULT, JobConfig
from .errors import DomainError, ParseError
from .matrices import spectral_radius
from .polynomial import Endomorphism, Polynomial

OPEN_QUESTION = "realization in 3-space unknown (open question)"


def _int_coeffs(p):
    out = []
    for c in p:
        c = Fraction(c)
        if c.denominator != 1:
            raise DomainError("polynomial must have integer coefficients")
        out.append(int(c))
    return tuple(out)


def minimal_polynomial(p, lam: RealAlgebraicNumber):
    """The irreducible integer factor of p vanishing at lam, made monic (lam is then an algebraic integer)."""
    fac = flint.fmpz_poly(list(p)).factor()[1]
    for g, _ in fac:
        q = tuple(int(c) for c in g.coeffs())
        if q[-1] < 0:
            q = tuple(-c for c in q)
        if any(compare(r, lam) == 0 for r in isolate_real_roots(q)):
            return q
    raise DomainError("selected number is not a root of the polynomial")


@dataclass
class AlgebraicCandidate:
    """A real root lam >= 1 of a monic integer polynomial."""

    defining: tuple
    root: RealAlgebraicNumber
    minimal: tuple = field(init=False)

    def __post_init__(self):
        self.defining = _int_coeffs(upoly.trim(self.defining))
        if not self.defining or self.defining[-1] != 1:
            raise DomainError("defining polynomial must be monic")
        if upoly.deg(self.defining) < 1:
            raise DomainError("defining polynomial must be non-constant")
        if compare(self.root, RealAlgebraicNumber.from_rational(1)) < 0:
            raise DomainError("selected root is below 1")
        self.minimal = minimal_polynomial(self.defining, self.root)
        if self.minimal[-1] != 1:
            raise DomainError("selected number is not an algebraic integer")

    @classmethod
    def from_polynomial(cls, p, selector="largest"):
        """selector: 'largest', a 1-based index into the real roots in increasing order, or a decimal near the root."""
        p = _int_coeffs(p)
        roots = isolate_real_roots(upoly.squarefree(p))
        if not roots:
            raise DomainError("polynomial has no real root")
        if selector in (None, "largest"):
            root = roots[-1]
        elif isinstance(selector, int):
            if not 1 <= selector <= len(roots):
                raise DomainError(f"root index must lie in 1..{len(roots)}")
            root = roots[selector - 1]
        else:
            target = float(selector)
            root = min(roots, key=lambda r: abs(float(r) - target))
        return cls(p, root)

    @classmethod
    def from_text(cls, text: str, selector="largest"):
        from .textio import parse_polynomial
        poly = parse_polynomial(text, univariate=True)
        if poly.arity != 1:
            raise ParseError("expected a polynomial in one variable", 0, text)
        coeffs = [0] * (poly.total_degree() + 1)
        for (e,), c in poly.items():
            coeffs[e] = c
        return cls.from_polynomial(coeffs, selector)

    @classmethod
    def integer(cls, k: int):
        return cls((-k, 1), RealAlgebraicNumber.from_rational(k))

    @property
    def degree(self):
        return upoly.deg(self.minimal)

    def other_real_conjugates(self):
        return [r for r in isolate_real_roots(self.minimal) if compare(r, self.root) != 0]

    def to_record(self, digits=30):
        return {"defining": format_int_poly(self.defining), "minimal": format_int_poly(self.minimal),
                "root": self.root.to_record(digits)}


# ---------------------------------------------------------------------------
# classification


class Answer(enum.Enum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"
    UNKNOWN = "unknown"


_FROM_VERDICT = {Verdict.YES: Answer.YES, Verdict.NO: Answer.NO, Verdict.INCONCLUSIVE: Answer.INCONCLUSIVE}


def is_weak_perron(c: AlgebraicCandidate) -> Answer:
    return _FROM_VERDICT[conjugates_within_modulus(c.minimal, c.root, strict=False).verdict]


def is_perron(c: AlgebraicCandidate) -> Answer:
    return _FROM_VERDICT[conjugates_within_modulus(c.minimal, c.root, strict=True).verdict]


@dataclass
class HandelmanCertificate:
    """x^N - sum a_i x^i with every a_i >= 0, a_0 >= 1, vanishing at the number."""

    poly: tuple  # low to high

    def __post_init__(self):
        if self.poly[-1] != 1 or any(c > 0 for c in self.poly[:-1]) or self.poly[0] == 0:
            raise DomainError("not a certificate polynomial")

    @property
    def subtracted(self):
        return [-c for c in self.poly[:-1]]

    def companion(self):
        """Non-negative companion matrix whose characteristic polynomial is the certificate."""
        N = len(self.poly) - 1
        A = [[0] * N for _ in range(N)]
        for j in range(N):
            A[0][j] = -self.poly[N - 1 - j]
        for i in range(1, N):
            A[i][i - 1] = 1
        return A

    def to_record(self):
        return {"polynomial": format_int_poly(self.poly), "coefficients": list(self.poly)}


@dataclass
class HandelmanResult:
    answer: Answer
    certificate: HandelmanCertificate | None = None
    degree_cap: int | None = None
    reason: str = ""

    def to_record(self):
        rec = {"answer": self.answer.value, "reason": self.reason}
        if self.certificate is not None:
            rec["certificate"] = self.certificate.to_record()
        if self.answer is Answer.UNKNOWN:
            rec["degree_cap"] = self.degree_cap
        return rec


def _certificate_search(P, N, coeff_bound=10**6):
    """Monic S of degree N - deg P with P*S in certificate shape, minimizing the sum of the a_i."""
    dP = upoly.deg(P)
    k = N - dP
    # coefficient i of P*S = sum_j P[i-j] s_j, s_k = 1
    rows, lo, hi = [], [], []
    obj = np.zeros(k)
    for i in range(N):
        row = np.zeros(k)
        for j in range(k):
            if 0 <= i - j <= dP:
                row[j] = P[i - j]
        const = P[i - k] if 0 <= i - k <= dP else 0
        rows.append(row)
        lo.append(-np.inf)
        hi.append((-1 if i == 0 else 0) - const)
        obj -= row
    if k == 0:
        return tuple(P) if all(c <= 0 for c in P[:-1]) and P[0] < 0 else None
    res = milp(obj, constraints=LinearConstraint(np.array(rows), lo, hi),
               integrality=np.ones(k), bounds=Bounds(-coeff_bound, coeff_bound))
    if res.status != 0 or res.x is None:
        return None
    S = [int(round(v)) for v in res.x] + [1]
    Q = upoly.mul(tuple(P), tuple(S))
    if Q[-1] != 1 or Q[0] >= 0 or any(c > 0 for c in Q[:-1]):
        return None  # rounding produced a non-certificate; treat as not found
    return tuple(Q)


def is_handelman(c: AlgebraicCandidate, degree_cap: int | None = None) -> HandelmanResult:
    P = c.minimal
    D = degree_cap if degree_cap is not None else 2 * upoly.deg(P) + 4
    one = RealAlgebraicNumber.from_rational(1)
    if upoly.deg(P) == 1:
        return HandelmanResult(Answer.YES, HandelmanCertificate(P), reason="integer")
    positive_conj = [r for r in c.other_real_conjugates() if r.sign() > 0]
    if positive_conj:
        return HandelmanResult(Answer.NO, reason="another conjugate is a positive real number")
    if compare(c.root, one) <= 0:
        return HandelmanResult(Answer.NO, reason="not above 1")
    if upoly.deg(P) == 2:
        b, a = -P[0], -P[1]
        if a >= 0 and b >= 0 and (a or b):
            return HandelmanResult(Answer.YES, HandelmanCertificate(P),
                                   reason="minimal polynomial already has the certificate shape")
        return HandelmanResult(Answer.NO, reason="quadratic with a negative non-leading coefficient pattern")
    if is_weak_perron(c) is Answer.NO:
        return HandelmanResult(Answer.NO, reason="not weak Perron")
    for N in range(upoly.deg(P), D + 1):
        Q = _certificate_search(P, N)
        if Q is not None:
            return HandelmanResult(Answer.YES, HandelmanCertificate(Q), reason=f"multiple of degree {N}")
    return HandelmanResult(Answer.UNKNOWN, degree_cap=D, reason=f"no certificate up to degree {D}")


def perron_power(c: AlgebraicCandidate, max_m: int = 12):
    """Smallest m <= max_m with lam^m Perron, or None."""
    C = companion_matrix(c.minimal)
    for m in range(1, max_m + 1):
        lam_m = c.root.power(m)
        poly = char_poly(matrix_power(C, m))
        cand = AlgebraicCandidate(tuple(poly), lam_m)
        if is_perron(cand) is Answer.YES:
            return m
    return None


# ---------------------------------------------------------------------------
# realization


@dataclass
class RealizationPlan:
    dimension: int
    automorphism: Endomorphism
    predicted: RealAlgebraicNumber
    tag: str
    verified: bool | None = None
    verification: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def verify(self, config: JobConfig = DEFAULT, oracle: bool = True):
        from .stability import dynamical_degree
        res = dynamical_degree(self.automorphism, config, oracle=oracle)
        if res.value is not None:
            self.verified = compare(res.value, self.predicted) == 0
            how = "exact" if res.status.value == "proven" else "evidence"
        else:
            ok = res.agreement is not None and res.agreement.ok
            self.verified = bool(ok)
            how = "oracle"
        self.verification = {"status": res.status.value, "match": how,
                             "value": None if res.value is None else res.value.approx(config.digits)}
        if res.agreement is not None:
            self.verification["oracle_agreement"] = res.agreement.to_record()
        return self

    def to_record(self, digits=30):
        return {"dimension": self.dimension, "automorphism": str(self.automorphism), "tag": self.tag,
                "predicted": self.predicted.to_record(digits), "verified": self.verified,
                "verification": self.verification, "notes": self.notes}


def _var(n, i):
    return Polynomial.variable(n, i)


def _mono(n, exps):
    return Polynomial.monomial(list(exps) + [0] * (n - len(exps)))


def doubling_map(A) -> Endomorphism:
    """(x_{k+1} + x^{A_1}, ..., x_{2k} + x^{A_k}, x_1, ..., x_k) in dimension 2k."""
    k = len(A)
    n = 2 * k
    comps = [_var(n, k + j) + _mono(n, A[j]) for j in range(k)]
    comps += [_var(n, j) for j in range(k)]
    return Endomorphism(comps)


def check_matrix_witness(A, lam: RealAlgebraicNumber):
    if not A or any(len(r) != len(A) for r in A):
        raise DomainError("matrix witness must be square")
    if any(int(x) != x or x < 0 for r in A for x in r):
        raise DomainError("matrix witness must have non-negative integer entries")
    G = nx.DiGraph()
    G.add_nodes_from(range(len(A)))
    G.add_edges_from((i, j) for i in range(len(A)) for j in range(len(A)) if A[i][j])
    if not nx.is_strongly_connected(G):
        raise DomainError("matrix witness is not irreducible (its digraph is not strongly connected)")
    if compare(spectral_radius(A), lam) != 0:
        raise DomainError("spectral radius of the matrix witness differs from the number")


def quadratic_data(c: AlgebraicCandidate):
    """(a, b) with minimal polynomial x^2 - a x - b."""
    if c.degree != 2:
        raise DomainError("number is not quadratic")
    return -c.minimal[1], -c.minimal[0]


def examplerst_parameters(a, b):
    """(r, s, t) with r*s = b, r + s < a, r <= s, or None; for x^2 - a x + b."""
    for r in range(1, b + 1):
        if b % r == 0:
            s = b // r
            if r <= s and a > r + s:
                return r, s, a - r - s
    return None


def examplerst_family(r: int, s: int, t: int) -> RealizationPlan:
    """(y + x^r z^t, z, x + z^s (y + x^r z^t)) on 3-space, lambda = largest root of x^2 - (r+s+t)x + rs."""
    if min(r, s, t) < 1:
        raise DomainError("r, s, t must be positive")
    n = 3
    x, y, z = (_var(n, i) for i in range(3))
    inner = y + _mono(n, (r, 0, t))
    f = Endomorphism([inner, z, x + _mono(n, (0, 0, s)) * inner])
    lam = largest_real_root((r * s, -(r + s + t), 1))
    plan = RealizationPlan(3, f, lam, "examplerst")
    if not lam.is_integer():
        plan.notes.append("not conjugate to an affine-triangular automorphism of 3-space")
    return plan


def realize_weak_perron(c: AlgebraicCandidate, matrix=None, verify: bool = True,
                        config: JobConfig = DEFAULT) -> RealizationPlan:
    if is_weak_perron(c) is not Answer.YES:
        raise DomainError("number is not (provably) weak Perron")
    lam = c.root
    if c.degree == 1:
        k = int(lam.rational_value())
        if k == 1:
            plan = RealizationPlan(1, Endomorphism.identity(1), lam, "A1-identity")
        else:
            n = 2
            plan = RealizationPlan(2, Endomorphism([_mono(n, (k, 0)) + _var(n, 1), _var(n, 0)]), lam,
                                   "A2-integer")
    elif c.degree == 2 and matrix is None:
        a, b = quadratic_data(c)
        if b >= 0:
            n = 3
            f = Endomorphism([_var(n, 2) + _mono(n, (a, b)), _var(n, 0), _var(n, 1)])
            plan = RealizationPlan(3, f, lam, "A3-shiftlike")
        else:
            al = a // 2
            A = [[al, 1], [al * (a - al) + b, a - al]]
            plan = RealizationPlan(4, doubling_map(A), lam, "A4-quadratic")
            plan.notes.append("not the dynamical degree of an affine-triangular automorphism of 3-space")
            rst = examplerst_parameters(a, -b)
            if rst is None:
                plan.notes.append(OPEN_QUESTION)
            else:
                plan.notes.append("also realized on 3-space by (y + x^r z^t, z, x + z^s (y + x^r z^t)) with "
                                  f"(r, s, t) = {rst}")
    else:
        if matrix is None:
            h = is_handelman(c)
            if h.certificate is None:
                raise DomainError("general case needs a non-negative irreducible integer matrix with spectral "
                                  "radius equal to the number; none supplied and no Handelman certificate "
                                  f"found ({h.reason})")
            matrix = h.certificate.companion()
        check_matrix_witness(matrix, lam)
        plan = RealizationPlan(2 * len(matrix), doubling_map(matrix), lam, "A2n-doubling")
        plan.verification["matrix"] = [list(r) for r in matrix]
    if verify:
        plan.verify(config)
    return plan


def minimal_dimension_quadratic(c: AlgebraicCandidate) -> int:
    a, b = quadratic_data(c)
    if b == 0:
        raise DomainError("degenerate quadratic (conjugate 0)")
    return 3 if b > 0 else 4


def minimal_dimension(c: AlgebraicCandidate):
    """Least n with lam a dynamical degree of an affine-triangular automorphism of n-space, when known."""
    if c.degree == 1:
        return 1 if c.root.rational_value() == 1 else 2
    if c.degree == 2:
        return minimal_dimension_quadratic(c)
    return None


def classify(c: AlgebraicCandidate, degree_cap: int | None = None, realize: bool = True,
             config: JobConfig = DEFAULT):
    """Classification report as a plain dictionary."""
    digits = config.digits
    wp = is_weak_perron(c)
    rep = {"number": c.to_record(digits), "weak_perron": wp.value, "perron": is_perron(c).value,
           "handelman": is_handelman(c, degree_cap).to_record()}
    try:
        rep["minimal_dimension"] = minimal_dimension(c)
    except DomainError as exc:
        rep["minimal_dimension"] = None
        rep["minimal_dimension_note"] = str(exc)
    if c.degree == 2 and wp is Answer.YES:
        a, b = quadratic_data(c)
        if b < 0 and examplerst_parameters(a, -b) is None:
            rep["open_question"] = OPEN_QUESTION
    if realize and wp is Answer.YES:
        try:
            rep["realization"] = realize_weak_perron(c, config=config).to_record(digits)
        except DomainError as exc:
            rep["realization"] = {"error": str(exc)}
    return rep
