"""Shapes of endomorphisms and closed forms for their dynamical degrees.

Covers affine, triangular and permutation-elementary maps, conjugation of
affine-triangular maps to permutation-triangular form, the reduction loop for
affine-triangular automorphisms of 3-space, and the enumerations of the values
(a + sqrt(a^2 + 4bc))/2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebraic import RealAlgebraicNumber, compare, largest_real_root
from .config import DEFAULT, JobConfig
from .errors import DomainError, InternalError
from .matrices import maximal_eigenvalue, maximal_eigenvector, verify_maximal_eigenvector
from .polynomial import Endomorphism, Polynomial
from .weights import WeightVector

ONE = RealAlgebraicNumber.from_rational(1)


# ---------------------------------------------------------------------------
# rational linear algebra


def _rref(rows):
    A = [[Fraction(x) for x in r] for r in rows]
    m = len(A)
    ncols = len(A[0]) if A else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                t = A[i][c]
                A[i] = [x - t * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A[:r], pivots


def _nullspace(rows, ncols):
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    R, pivots = _rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for k, pc in enumerate(pivots):
            v[pc] = -R[k][fc]
        out.append(v)
    return out


def _rank(rows):
    return len(_rref(rows)[1]) if rows else 0


def _inverse(M):
    n = len(M)
    aug = [list(map(Fraction, M[i])) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    R, pivots = _rref(aug)
    if pivots[:n] != list(range(n)) or len(R) < n:
        raise DomainError("linear part is not invertible")
    return [row[n:] for row in R]


def _matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def _identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# affine maps


@dataclass(frozen=True)
class AffineMap:
    """x -> linear * x + translation, with an invertible linear part."""

    linear: tuple
    translation: tuple

    def __post_init__(self):
        n = len(self.linear)
        if any(len(r) != n for r in self.linear) or len(self.translation) != n:
            raise DomainError("affine map has inconsistent dimensions")
        _inverse(self.linear)

    @classmethod
    def from_linear(cls, M):
        n = len(M)
        return cls(tuple(tuple(Fraction(x) for x in r) for r in M), tuple(Fraction(0) for _ in range(n)))

    @classmethod
    def identity(cls, n):
        return cls.from_linear(_identity(n))

    @property
    def arity(self):
        return len(self.linear)

    def to_endomorphism(self) -> Endomorphism:
        n = self.arity
        comps = []
        for i in range(n):
            terms = {tuple(int(k == j) for k in range(n)): c for j, c in enumerate(self.linear[i]) if c}
            if self.translation[i]:
                terms[(0,) * n] = self.translation[i]
            comps.append(Polynomial(n, terms))
        return Endomorphism(comps)

    def inverse(self) -> "AffineMap":
        inv = _inverse(self.linear)
        t = [-sum(inv[i][j] * self.translation[j] for j in range(self.arity)) for i in range(self.arity)]
        return AffineMap(tuple(map(tuple, inv)), tuple(t))

    def is_lower_triangular(self):
        return all(not self.linear[i][j] for i in range(self.arity) for j in range(i + 1, self.arity))

    def to_record(self):
        return {"linear": [[str(x) for x in r] for r in self.linear],
                "translation": [str(x) for x in self.translation]}


def conjugate(f: Endomorphism, beta: Endomorphism, beta_inv: Endomorphism) -> Endomorphism:
    """beta^{-1} o f o beta."""
    return beta_inv.compose(f.compose(beta))


# ---------------------------------------------------------------------------
# shapes


@dataclass
class Shape:
    kind: str
    sigma: list | None = None       # f_i = tau_{sigma[i]}
    tau: Endomorphism | None = None
    alpha: AffineMap | None = None
    detail: dict = field(default_factory=dict)

    def to_record(self):
        rec = {"kind": self.kind}
        if self.sigma is not None:
            rec["sigma"] = [s + 1 for s in self.sigma]
        if self.tau is not None:
            rec["tau"] = str(self.tau)
        if self.alpha is not None:
            rec["alpha"] = self.alpha.to_record()
        return rec


def _bare_variable(p: Polynomial):
    """j if p == x_j exactly."""
    if p.is_monomial():
        (m,) = p.support()
        if sum(m) == 1 and p.coefficient(m) == 1:
            return m.index(1)
    return None


def _linear_part(f: Endomorphism):
    n = f.arity
    L = [[Fraction(c.coefficient(tuple(int(k == j) for k in range(n)))) for j in range(n)] for c in f]
    t = [Fraction(c.constant_term()) for c in f]
    return L, t


def _max_var(p: Polynomial):
    return max(p.variables(), default=-1)


def permutation_triangular_factor(f: Endomorphism):
    """(sigma, tau) with f_i = tau_{sigma[i]} and tau triangular, or None."""
    n = f.arity
    order = sorted(range(n), key=lambda i: (_max_var(f[i]), i))
    for pos, i in enumerate(order):
        if _max_var(f[i]) > pos:
            return None
    sigma = [0] * n
    for pos, i in enumerate(order):
        sigma[i] = pos
    tau = Endomorphism([f[i] for i in order])
    return sigma, tau


def affine_triangular_factor(f: Endomorphism):
    """(alpha, tau) with f = alpha o tau, alpha affine and tau triangular without constants, or None.

    tau_j ranges over span(f_i - f_i(0)) intersected with k[x_1..x_j]; the
    search builds a basis adapted to this flag.
    """
    n = f.arity
    centered = [c - c.constant_term() for c in f]
    monos = sorted({m for c in centered for m in c.support()})
    coeff = [[Fraction(c.coefficient(m)) for m in monos] for c in centered]
    if _rank(coeff) < n:
        return None
    chosen = []
    for j in range(n):
        # combinations with no monomial involving x_{j+1..n}
        bad = [k for k, m in enumerate(monos) if any(m[v] for v in range(j + 1, n))]
        eqs = [[coeff[i][k] for i in range(n)] for k in bad]
        space = _nullspace(eqs, n)
        for v in space:
            if len(chosen) > j:
                break
            if _rank(chosen + [v]) == len(chosen) + 1:
                chosen.append(v)
        if len(chosen) != j + 1:
            return None
    C = chosen
    tau = []
    for row in C:
        acc = Polynomial.zero(n)
        for ci, p in zip(row, centered):
            if ci:
                acc = acc + p.scale(ci)
        tau.append(acc)
    L = _inverse(C)
    t = [Fraction(c.constant_term()) for c in f]
    return AffineMap(tuple(map(tuple, L)), tuple(t)), Endomorphism(tau)


def _perm_elementary_parts(f: Endomorphism):
    """(special index s, missing variable v, xi) if f permutes n-1 variables and f_s = xi*x_v + p."""
    n = f.arity
    vars_ = [_bare_variable(c) for c in f]
    specials = [i for i, v in enumerate(vars_) if v is None]
    used = [v for v in vars_ if v is not None]
    if len(set(used)) != len(used):
        return None
    if len(specials) == 0:
        return None
    if len(specials) > 1:
        return None
    s = specials[0]
    (v,) = set(range(n)) - set(used)
    h = f[s]
    if h.degree_in(v) != 1:
        return None
    lead = h.coefficient_in(v, 1)
    if not lead.is_constant() or lead.is_zero():
        return None
    return s, v, Fraction(lead.constant_term())


def is_triangular_automorphism(tau: Endomorphism) -> bool:
    """tau_i = c*x_i + p(x_1..x_{i-1}) with c a non-zero constant."""
    for i, c in enumerate(tau):
        if _max_var(c) > i or c.degree_in(i) != 1:
            return False
        lead = c.coefficient_in(i, 1)
        if not lead.is_constant() or lead.is_zero():
            return False
    return True


def is_permutation_triangular_automorphism(f: Endomorphism) -> bool:
    fac = permutation_triangular_factor(f)
    return fac is not None and is_triangular_automorphism(fac[1])


def classify_shape(f: Endomorphism) -> Shape:
    n = f.arity
    if f.degree() <= 1:
        L, t = _linear_part(f)
        try:
            alpha = AffineMap(tuple(map(tuple, L)), tuple(t))
        except DomainError:
            alpha = None
        if alpha is not None:
            vars_ = [_bare_variable(c) for c in f]
            if None not in vars_ and len(set(vars_)) == n:
                return Shape("permutation", sigma=vars_, alpha=alpha)
            return Shape("affine", alpha=alpha)
    if n >= 2 and all(_bare_variable(f[i]) == i - 1 for i in range(1, n)):
        h = f[0]
        if h.degree_in(n - 1) == 1 and h.coefficient_in(n - 1, 1).is_constant():
            return Shape("shift-like", detail={"p": str(h - h.coefficient_in(n - 1, 1) * Polynomial.variable(n, n - 1))})
    if all(_bare_variable(f[i]) == i for i in range(n - 1)):
        return Shape("elementary", sigma=list(range(n)), tau=f)
    if f.is_triangular():
        return Shape("triangular", sigma=list(range(n)), tau=f)
    if _perm_elementary_parts(f) is not None:
        return Shape("permutation-elementary")
    fac = permutation_triangular_factor(f)
    if fac is not None:
        return Shape("permutation-triangular", sigma=fac[0], tau=fac[1])
    fac = affine_triangular_factor(f)
    if fac is not None:
        return Shape("affine-triangular", alpha=fac[0], tau=fac[1])
    return Shape("other")


# ---------------------------------------------------------------------------
# Bruhat conjugation


def bruhat_decomposition(L):
    """L = beta * P * gamma with beta, gamma lower triangular and P a permutation matrix.

    Row i (top to bottom) keeps its rightmost non-zero entry as pivot; column
    operations clear the entries to its left, row operations the entries
    below.  The permutation is unique; the triangular factors depend on this
    elimination order.  Returns (beta, sigma, gamma) with P[i][sigma[i]] = 1.
    """
    n = len(L)
    A = [[Fraction(x) for x in r] for r in L]
    R = _identity(n)   # accumulated row operations: R * L * C = D * P
    C = _identity(n)
    sigma = [None] * n
    used = set()
    for i in range(n):
        j = max((c for c in range(n) if A[i][c] and c not in used), default=None)
        if j is None:
            raise DomainError("matrix is singular")
        used.add(j)
        sigma[i] = j
        for k in range(j):
            if A[i][k]:
                t = A[i][k] / A[i][j]
                for r in range(n):
                    A[r][k] -= t * A[r][j]
                for r in range(n):
                    C[r][k] -= t * C[r][j]
        for r in range(i + 1, n):
            if A[r][j]:
                t = A[r][j] / A[i][j]
                A[r] = [x - t * y for x, y in zip(A[r], A[i])]
                R[r] = [x - t * y for x, y in zip(R[r], R[i])]
    D = [[A[i][sigma[i]] if i == k else Fraction(0) for k in range(n)] for i in range(n)]
    beta = _matmul(_inverse(R), D)
    gamma = _inverse(C)
    return beta, sigma, gamma


@dataclass
class PermutationTriangular:
    sigma: list
    tau: Endomorphism

    def __post_init__(self):
        if not self.tau.is_triangular():
            raise InternalError("tau is not triangular")

    def endomorphism(self) -> Endomorphism:
        return Endomorphism([self.tau[self.sigma[i]] for i in range(self.tau.arity)])


def _linear_endo(M):
    return AffineMap.from_linear(M).to_endomorphism()


def bruhat_conjugate(alpha: AffineMap, tau: Endomorphism):
    """Conjugator beta (linear, lower triangular) with beta^{-1} o alpha o tau o beta permutation-triangular."""
    if not tau.is_triangular():
        raise DomainError("tau must be triangular")
    n = tau.arity
    Linv = _inverse(alpha.linear)
    # alpha = L o (x - p) with alpha(p) = 0; the translation joins tau
    p = [-sum(Linv[i][j] * alpha.translation[j] for j in range(n)) for i in range(n)]
    shifted = Endomorphism([c - p[i] for i, c in enumerate(tau)])
    beta, sigma, gamma = bruhat_decomposition(alpha.linear)
    beta_map = AffineMap.from_linear(beta)
    b = beta_map.to_endomorphism()
    g = _linear_endo(gamma)
    new_tau = g.compose(shifted.compose(b))
    result = PermutationTriangular(sigma, new_tau)
    return beta_map, result


# ---------------------------------------------------------------------------
# permutation-elementary maps


@dataclass
class PermElementaryForm:
    m: int
    order: list              # y_k = x_{order[k]}
    form: Endomorphism       # (f_1..f_m, xi*x_N + p, x_{m+1}, ..., x_{N-1})
    xi: Fraction
    p: Polynomial

    def to_record(self):
        return {"m": self.m, "order": [o + 1 for o in self.order], "form": str(self.form),
                "xi": str(self.xi), "p": str(self.p)}


def perm_elem_normal_form(h: Endomorphism) -> PermElementaryForm:
    """Conjugate a permutation-elementary automorphism by a coordinate permutation into normal form."""
    parts = _perm_elementary_parts(h)
    if parts is None:
        raise DomainError("not a permutation-elementary automorphism")
    s, v, xi = parts
    N = h.arity
    source = {}  # variable j -> component k with h_k = x_j
    for k, c in enumerate(h):
        j = _bare_variable(c)
        if j is not None and k != s:
            source[j] = k
    chain = [s]
    while chain[-1] != v:
        nxt = source.get(chain[-1])
        if nxt is None or nxt in chain:
            raise InternalError("broken chain in permutation-elementary map")
        chain.append(nxt)
    rest = sorted(set(range(N)) - set(chain))
    order = rest + chain
    form = h.relabel(order)
    m = len(rest)
    special = form[m]
    xN = Polynomial.variable(N, N - 1)
    p = special - xN.scale(xi)
    if N - 1 in p.variables():
        raise InternalError("normal form still depends on the last variable")
    for k in range(m + 1, N):
        if _bare_variable(form[k]) != k - 1:
            raise InternalError("normal form has the wrong shift structure")
    return PermElementaryForm(m, order, form, xi, p)


def _perm_elem_theta(nform: PermElementaryForm):
    N = nform.form.arity
    n, m = N - 1, nform.m
    best = None
    best_mono = None
    for mono in nform.p.support():
        # lambda^{n-m} - sum_{j=m+1..n} i_j lambda^{n-j}
        coeffs = [0] * (n - m + 1)
        coeffs[n - m] = 1
        for j in range(m + 1, n + 1):
            coeffs[n - j] -= mono[j - 1]
        while len(coeffs) > 1 and coeffs[0] == 0:
            coeffs = coeffs[1:]  # roots at zero never win
        root = largest_real_root(tuple(coeffs)) if len(coeffs) > 1 else None
        if root is None:
            continue
        if best is None or compare(root, best) > 0:
            best, best_mono = root, mono
    return best, best_mono


def perm_elem_dynamical_degree(nform: PermElementaryForm, config: JobConfig = DEFAULT):
    """(lambda, certificate) for a map in permutation-elementary normal form."""
    N = nform.form.arity
    n, m = N - 1, nform.m
    digits = config.digits
    tail = list(range(m, n))
    if m == n or nform.p.partial_degree(tail) <= 1:
        return ONE, {"reason": "the special component is at most linear in the cycled variables",
                     "normal_form": nform.to_record()}
    theta, mono = _perm_elem_theta(nform)
    from .algebraic import NumberField
    K = NumberField(theta)
    t = K.theta()
    mu_form = [K.zero()] * m + [t ** (n - m - k) for k in range(n - m + 1)]
    mu = WeightVector(mu_form, K)
    if not verify_maximal_eigenvector(nform.form, mu, t):
        raise InternalError("closed-form weight vector fails the row condition")
    # back to the original coordinates: y_k = x_{order[k]}
    orig = [None] * N
    for k, j in enumerate(nform.order):
        orig[j] = mu_form[k]
    cert = {"normal_form": nform.to_record(), "theta": theta.to_record(digits),
            "exponent": list(mono), "mu": WeightVector(orig, K).to_record(digits),
            "stability": "StableProven (iterates of the leading part never vanish)"}
    return theta, cert


# ---------------------------------------------------------------------------
# reduction loop in dimension three


def _linear_in(p: Polynomial, i: int):
    """(xi, rest) with p = xi*x_i + rest, xi a non-zero constant and rest free of x_i, or None."""
    if p.degree_in(i) != 1:
        return None
    lead = p.coefficient_in(i, 1)
    if not lead.is_constant() or lead.is_zero():
        return None
    xi = Fraction(lead.constant_term())
    rest = p - Polynomial.variable(p.arity, i).scale(xi)
    return xi, rest


def a3_unstable_shape(f: Endomorphism):
    """Match the two shapes that unstable permutation-triangular automorphisms of 3-space can take.

    "i":  (xi3*x3 + p3(x1,x2), p1(x1), xi2*x2 + p2(x1)),  deg p1 = 1, deg p2 > 1
    "ii": (xi2*x2 + p2(x1), xi3*x3 + p3(x1,x2), p1(x1)),  deg p1 = 1, deg p2 > 1
    Returns (case, data) or None.
    """
    if f.arity != 3:
        return None
    f1, f2, f3 = f

    def in_vars(p, allowed):
        return p.variables() <= set(allowed)

    a = _linear_in(f1, 2)
    b = _linear_in(f3, 1)
    if a and b and in_vars(a[1], (0, 1)) and in_vars(f2, (0,)) and f2.total_degree() == 1 \
            and in_vars(b[1], (0,)) and b[1].total_degree() > 1:
        return "i", {"xi3": a[0], "p3": a[1], "p1": f2, "xi2": b[0], "p2": b[1]}
    a = _linear_in(f1, 1)
    b = _linear_in(f2, 2)
    if a and b and in_vars(a[1], (0,)) and a[1].total_degree() > 1 and in_vars(b[1], (0, 1)) \
            and in_vars(f3, (0,)) and f3.total_degree() == 1:
        return "ii", {"xi2": a[0], "p2": a[1], "xi3": b[0], "p3": b[1], "p1": f3}
    return None


@dataclass
class ReductionStep:
    kind: str                      # "already-good" or "reduced"
    f: Endomorphism
    conjugator: Endomorphism | None = None
    case: str | None = None
    theta: RealAlgebraicNumber | None = None
    detail: dict = field(default_factory=dict)


def reduce_A3_step(f: Endomorphism, config: JobConfig = DEFAULT) -> ReductionStep:
    """One conjugation lowering deg(p2), or AlreadyGood when theta = 1 or every found mu is stable."""
    from .stability import stability_test, Verdict
    if f.arity != 3:
        raise DomainError("reduce_A3_step needs a map of 3-space")
    data = maximal_eigenvalue(f, config.budget_matrices)
    if compare(data.theta, ONE) == 0:
        return ReductionStep("already-good", f, theta=data.theta, detail={"reason": "theta = 1"})
    data = maximal_eigenvector(f, data, config.budget_matrices, all_candidates=True)
    unstable = None
    reports = []
    for mu in data.candidates:
        rep = stability_test(f, mu, max(3, config.horizon_for(3)), config.budget, config.seed)
        reports.append((mu, rep))
        if rep.verdict is Verdict.UNSTABLE_AT:
            unstable = (mu, rep)
            break
    if unstable is None:
        return ReductionStep("already-good", f, theta=data.theta,
                             detail={"reason": "stable for every maximal eigenvector found",
                                     "stability": [r.to_record() for _, r in reports],
                                     "mu": [m.to_record(config.digits) for m, _ in reports]})
    mu, rep = unstable
    g = rep.leading_part
    match = a3_unstable_shape(f)
    if match is None:
        raise InternalError("unstable permutation-triangular automorphism outside both normal shapes")
    case, d = match
    x1, x2, x3 = (Polynomial.variable(3, i) for i in range(3))
    if case == "i":
        q = g[0] - x3.scale(d["xi3"])
        if not q.variables() <= {1}:
            raise InternalError("leading part of the first component has the wrong form")
        s = q.scale(1 / d["xi3"])
        h = Endomorphism([x1, x2, x3 + s])
        h_inv = Endomorphism([x1, x2, x3 - s])
        old = d["p2"].total_degree()
    else:
        q = g[0] - x2.scale(d["xi2"])
        if not q.variables() <= {0}:
            raise InternalError("leading part of the first component has the wrong form")
        s = q.scale(1 / d["xi2"])
        h = Endomorphism([x1, x2 + s, x3])
        h_inv = Endomorphism([x1, x2 - s, x3])
        old = d["p2"].total_degree()
    new = h.compose(f.compose(h_inv))
    m2 = a3_unstable_shape(new)
    new_p2 = _p2_degree(new, case)
    if new_p2 >= old or new.degree() > f.degree():
        raise InternalError("reduction step failed to lower the degree of p2")
    return ReductionStep("reduced", new, conjugator=h, case=case, theta=data.theta,
                         detail={"p2_degree": [old, new_p2], "unstable_at": rep.r, "q": str(q),
                                 "next_shape": m2[0] if m2 else None})


def _p2_degree(f, case):
    if case == "i":
        xi = _linear_in(f[2], 1)
        return (xi[1] if xi else f[2]).total_degree()
    xi = _linear_in(f[0], 1)
    return (xi[1] if xi else f[0]).total_degree()


def affine_triangular_A3_dynamical_degree(f: Endomorphism, config: JobConfig = DEFAULT, _shape=None,
                                          strict: bool = False):
    """Exact lambda of an affine-triangular automorphism of 3-space via conjugation and reduction.

    Returns a DynamicalDegreeResult, or None for inputs outside the supported
    shape when ``strict`` is false (with ``strict`` a DomainError is raised).
    """
    from .stability import DynamicalDegreeResult, Status
    if f.arity != 3:
        raise DomainError("affine-triangular reduction is implemented for 3-space only")
    shape = _shape or classify_shape(f)
    if shape.kind in ("triangular", "elementary"):
        alpha, tau = AffineMap.identity(3), f
    elif shape.kind == "permutation-triangular":
        n = 3
        P = [[Fraction(int(shape.sigma[i] == j)) for j in range(n)] for i in range(n)]
        alpha, tau = AffineMap.from_linear(P), shape.tau
    elif shape.kind == "affine-triangular":
        alpha, tau = shape.alpha, shape.tau
    else:
        if strict:
            raise DomainError(f"map is not affine-triangular (shape {shape.kind})")
        return None
    if not is_triangular_automorphism(tau):
        if strict:
            raise DomainError("triangular factor is not an automorphism")
        return None
    digits = config.digits
    beta, pt = bruhat_conjugate(alpha, tau)
    current = pt.endomorphism()
    trail = [{"step": "bruhat", "conjugator": beta.to_record(), "result": str(current)}]
    for _ in range(current.degree() + 4):
        step = reduce_A3_step(current, config)
        if step.kind == "already-good":
            theta = step.theta
            cert = {"route": "closed-form", "key": "affine-triangular-3", "trail": trail,
                    "final_map": str(current), "theta": theta.to_record(digits),
                    "final_check": step.detail}
            return DynamicalDegreeResult(Status.PROVEN, theta, None, cert)
        trail.append({"step": f"case-{step.case}", "conjugator": str(step.conjugator),
                      "result": str(step.f), "detail": step.detail})
        current = step.f
    raise InternalError("reduction loop did not terminate")


# ---------------------------------------------------------------------------
# enumerations


@dataclass
class Theorem1Entry:
    value: RealAlgebraicNumber
    triples: list
    witnesses: list
    new: bool = False

    @property
    def triple(self):
        return self.triples[0]

    def to_record(self, digits=30):
        a, b, c = self.triple
        return {"triple": list(self.triple), "all_triples": [list(t) for t in self.triples],
                "defining": list(self.value.defining),
                "interval": [str(self.value.lo), str(self.value.hi)],
                "decimal": self.value.approx(digits), "new": self.new,
                "witnesses": self.witnesses}


def theorem1_value(a, b, c) -> RealAlgebraicNumber | None:
    """Largest root of x^2 - a x - bc, or None when it is 0."""
    if a == 0 and b * c == 0:
        return None
    return largest_real_root((-b * c, -a, 1))


def witness_maps(a, b, c):
    return [f"(x3 + x1^{a}*x2^{b}, x2 + x1^{c}, x1)", f"(x3 + x1^{a}*x2^{b * c}, x1, x2)"]


def _dedupe(items):
    """items: list of (value, key, payload); group exact ties, sort by value then key."""
    items = sorted(items, key=lambda t: (float(t[0]), t[1]))
    groups = []
    for val, key, payload in items:
        for g in groups[-4:]:
            if compare(g[0], val) == 0:
                g[1].append((key, payload))
                break
        else:
            groups.append([val, [(key, payload)]])
    # floats can misorder nearly equal values; fix exactly
    ordered = []
    for g in groups:
        k = len(ordered)
        while k > 0 and compare(ordered[k - 1][0], g[0]) > 0:
            k -= 1
        ordered.insert(k, g)
    return ordered


def _theorem1_groups(d):
    items = []
    for a in range(d + 1):
        for b in range(d + 1 - a):
            for c in range(d + 1):
                v = theorem1_value(a, b, c)
                if v is not None:
                    items.append((v, (a, b, c), None))
    return _dedupe(items)


def enumerate_theorem1_set(d: int, mark_new: bool = True):
    """Sorted distinct values (a + sqrt(a^2 + 4bc))/2 with a + b <= d, c <= d."""
    if d < 1:
        raise DomainError("d must be positive")
    groups = _theorem1_groups(d)
    prev = [g[0] for g in _theorem1_groups(d - 1)] if (mark_new and d > 1) else []
    out = []
    for val, members in groups:
        triples = sorted(k for k, _ in members)
        wit = witness_maps(*triples[0])
        new = not any(compare(val, p) == 0 for p in prev)
        out.append(Theorem1Entry(val, triples, wit, new))
    return out


def shiftlike_value(d, a) -> RealAlgebraicNumber:
    """Largest root of x^2 - a x - (d - a)."""
    return largest_real_root((-(d - a), -a, 1))


def enumerate_shiftlike_set_A3(d: int, mark_new: bool = True):
    """Sorted distinct values (a + sqrt(a^2 + 4d - 4a))/2, 0 <= a <= d; ``new`` marks values absent for smaller degrees."""
    if d < 1:
        raise DomainError("d must be positive")
    groups = _dedupe([(shiftlike_value(d, a), (a, d - a, 1), None) for a in range(d + 1)])
    prev = []
    if mark_new:
        for e in range(1, d):
            prev.extend(shiftlike_value(e, a) for a in range(e + 1))
    out = []
    for val, members in groups:
        triples = sorted(k for k, _ in members)
        a = triples[0][0]
        wit = [f"(x3 + x1^{a}*x2^{d - a}, x1, x2)"]
        new = not any(compare(val, p) == 0 for p in prev)
        out.append(Theorem1Entry(val, triples, wit, new))
    return out
