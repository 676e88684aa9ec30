"""mu-algebraic stability and the dynamical degree driver.

For a weight vector mu with theta = deg_mu(f) > 1, f is mu-algebraically
stable exactly when, for every r, some component of g^r with positive
weight is non-zero, where g is the mu-leading part of f.  Non-vanishing is
certified by evaluation at random points modulo a large prime; vanishing
is certified by expanding g^r symbolically.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field

from .algebraic import RealAlgebraicNumber, compare, max_number
from .config import DEFAULT, JobConfig
from .errors import DomainError, InternalError, ResourceLimitError
from .matrices import MaxEigenData, maximal_eigenvalue, maximal_eigenvector, spectral_radius, \
    verify_maximal_eigenvector
from .oracle import OracleReport, agreement, fekete_bounds, oracle_degree_sequence
from .polynomial import PRIMES, Budget, Endomorphism, coeff_mod, is_dominant, iterate, \
    jacobian_determinant
from .weights import INF, WeightVector, mu_degree_endo, mu_leading_endo

ONE = RealAlgebraicNumber.from_rational(1)


class Verdict(enum.Enum):
    STABLE_PROVEN = "StableProven"
    STABLE_UP_TO = "StableUpTo"
    UNSTABLE_AT = "UnstableAt"


@dataclass
class StabilityReport:
    verdict: Verdict
    r: int | None
    leading_part: Endomorphism
    surviving: list = field(default_factory=list)  # per iterate: positive-weight components proven non-zero
    reason: str = ""

    @property
    def stable(self) -> bool:
        return self.verdict is not Verdict.UNSTABLE_AT

    def label(self):
        if self.verdict is Verdict.STABLE_PROVEN:
            return "StableProven"
        return f"{self.verdict.value}({self.r})"

    def to_record(self):
        return {"verdict": self.label(), "reason": self.reason,
                "leading_part": str(self.leading_part),
                "surviving_components": [[i + 1 for i in s] for s in self.surviving]}


# ---------------------------------------------------------------------------
# structural stability criteria


def _scaled_variable(p):
    """Index j if p = c*x_j with c a non-zero constant, else None."""
    if not p.is_monomial():
        return None
    (m,) = p.support()
    if sum(m) != 1:
        return None
    return m.index(1)


def _permutation_elementary_shape(g: Endomorphism) -> bool:
    """n-1 components are scalar multiples of distinct variables, the last one is non-zero."""
    n = g.arity
    if any(c.is_zero() for c in g):
        return False
    vars_ = [_scaled_variable(c) for c in g]
    others = [k for k, v in enumerate(vars_) if v is None]
    used = [v for v in vars_ if v is not None]
    if len(set(used)) != len(used):
        return False
    if len(others) > 1:
        return False
    return len(used) >= n - 1


def _structural_proof(f, g, mu: WeightVector, seed=0):
    pos = mu.positive()
    P = set(pos)
    if all(not c.is_zero() and c.is_monomial() for c in g):
        return "leading part is a monomial map with non-zero components"
    if all(g[i].variables() <= P for i in pos):
        sub = g.restrict(pos)
        if all(not c.is_zero() and c.is_monomial() for c in sub):
            return "positive-weight part of the leading part is a closed monomial map"
        if all(not c.is_zero() for c in sub) and is_dominant(sub, seed):
            return "positive-weight part of the leading part is a closed dominant map"
    if all(not c.is_zero() for c in g) and is_dominant(g, seed):
        return "leading part is dominant"
    if _permutation_elementary_shape(g):
        return "leading part has permutation-elementary shape, whose iterates never vanish"
    if f.arity == 3:
        from .normal_forms import a3_unstable_shape, is_permutation_triangular_automorphism
        if is_permutation_triangular_automorphism(f) and a3_unstable_shape(f) is None:
            try:
                theta = mu_degree_endo(f, mu)
                maximal = verify_maximal_eigenvector(f, mu, theta)
            except DomainError:
                maximal = False
            if maximal:
                return ("three-dimensional permutation-triangular automorphism outside both "
                        "unstable normal shapes")
    return None


def _a3_vanishing_bound_applies(f, mu):
    if f.arity != 3:
        return False
    from .normal_forms import is_permutation_triangular_automorphism
    if not is_permutation_triangular_automorphism(f):
        return False
    try:
        return verify_maximal_eigenvector(f, mu, mu_degree_endo(f, mu))
    except DomainError:
        return False


# ---------------------------------------------------------------------------
# stability test


def _iterate_points(g, points, p):
    return [tuple(c.evaluate(pt, p) for c in g) for pt in points]


def stability_test(f: Endomorphism, mu: WeightVector, horizon: int | None = None,
                   budget: Budget | None = None, seed: int = 0, structural: bool = True) -> StabilityReport:
    """Decide mu-algebraic stability of f up to ``horizon`` iterates, or prove it."""
    if f.arity != len(mu):
        raise DomainError("weight vector and map have different arities")
    theta = mu_degree_endo(f, mu)
    if theta == INF:
        raise DomainError("deg_mu(f) is infinite")
    if theta <= 1:
        raise DomainError("stability test needs deg_mu(f) > 1")
    R = horizon if horizon is not None else 2 * f.arity + 4
    budget = budget or Budget()
    g = mu_leading_endo(f, mu, theta)
    pos = mu.positive()
    reason = _structural_proof(f, g, mu, seed) if structural else None

    rng = random.Random(seed)
    prime = PRIMES[0]
    points = [tuple(rng.randrange(1, prime) for _ in range(f.arity)) for _ in range(3)]
    try:
        coeffs_ok = True
        for c in g:
            for _, co in c.items():
                coeff_mod(co, prime)
    except ZeroDivisionError:  # pragma: no cover - denominators divisible by 2^61-1
        coeffs_ok = False
    surviving = []
    vals = points
    for r in range(1, R + 1):
        if coeffs_ok:
            vals = _iterate_points(g, vals, prime)
            alive = [i for i in pos if any(v[i] for v in vals)]
        else:
            alive = []
        if not alive:
            try:
                gr = iterate(g, r, budget)
            except ResourceLimitError:
                rep = StabilityReport(Verdict.STABLE_UP_TO, r - 1, g, surviving,
                                      f"symbolic check of g^{r} exceeded the term budget")
                if reason:
                    rep.verdict, rep.r, rep.reason = Verdict.STABLE_PROVEN, None, reason
                return rep
            alive = [i for i in pos if not gr[i].is_zero()]
            if not alive:
                if reason:
                    raise InternalError(f"structural stability contradicted at r={r}")
                surviving.append([])
                return StabilityReport(Verdict.UNSTABLE_AT, r, g, surviving,
                                       f"every positive-weight component of g^{r} vanishes")
        surviving.append(alive)
    if reason:
        return StabilityReport(Verdict.STABLE_PROVEN, None, g, surviving, reason)
    if structural and R >= 3 and _a3_vanishing_bound_applies(f, mu):
        return StabilityReport(Verdict.STABLE_PROVEN, None, g, surviving,
                               "in this class, instability forces g^3 to vanish on positive weights")
    return StabilityReport(Verdict.STABLE_UP_TO, R, g, surviving,
                           f"some positive-weight component of g^r is non-zero for r <= {R}")


# ---------------------------------------------------------------------------
# projections


@dataclass
class SplitData:
    m: int
    order: list         # coordinate order putting the preserved block first
    hat: Endomorphism | None
    conjugated: Endomorphism

    def lambda2_degrees(self, depth: int, budget: Budget | None = None):
        """deg in the last n-m variables of (f^r)_i, maximized over i, for r <= depth (truncated on budget)."""
        budget = budget or Budget()
        tail = list(range(self.m, self.conjugated.arity))
        out = []
        cur = self.conjugated
        for r in range(1, depth + 1):
            out.append(max(c.partial_degree(tail) for c in cur))
            if r < depth:
                try:
                    cur = cur.compose(self.conjugated, budget)
                except ResourceLimitError:
                    break
        return out


def dinh_nguyen_split(f: Endomorphism, m: int | None = None, first: list | None = None) -> SplitData:
    """Split off a block of coordinates preserved by f.

    With ``m`` the first m coordinates are used; with ``first`` the given
    zero-based coordinates are moved to the front.  Their components must
    only involve those coordinates.
    """
    n = f.arity
    if first is None:
        if m is None or not 0 <= m <= n:
            raise DomainError("m must lie in 0..n")
        first = list(range(m))
    first = sorted(first)
    order = first + [i for i in range(n) if i not in first]
    block = set(first)
    for i in first:
        if not f[i].variables() <= block:
            raise DomainError(f"component {i + 1} leaves the preserved coordinates")
    conj = f.relabel(order)
    hat = f.restrict(first) if first else None
    return SplitData(len(first), order, hat, conj)


# ---------------------------------------------------------------------------
# driver


class Status(enum.Enum):
    PROVEN = "proven"
    EVIDENCE = "evidence-based"
    BRACKET = "bracket"


@dataclass
class Bracket:
    lower: RealAlgebraicNumber
    upper: RealAlgebraicNumber
    upper_strict: bool = False

    def to_record(self, digits=30):
        return {"lower": self.lower.to_record(digits), "upper": self.upper.to_record(digits),
                "upper_strict": self.upper_strict}


@dataclass
class DynamicalDegreeResult:
    status: Status
    value: RealAlgebraicNumber | None
    bracket: Bracket | None
    certificate: dict
    oracle: OracleReport | None = None
    agreement: object = None

    @property
    def exact(self) -> bool:
        return self.value is not None

    def to_record(self, digits=30):
        rec = {"status": self.status.value}
        if self.value is not None:
            rec["value"] = self.value.to_record(digits)
        if self.bracket is not None:
            rec["bracket"] = self.bracket.to_record(digits)
        rec["certificate"] = self.certificate
        if self.oracle is not None:
            rec["oracle"] = self.oracle.to_record()
        if self.agreement is not None:
            rec["oracle_agreement"] = self.agreement.to_record()
        return rec


def _exact(status, value, cert):
    return DynamicalDegreeResult(status, value, None, cert)


class _Driver:
    def __init__(self, config: JobConfig, with_oracle: bool):
        self.config = config
        self.with_oracle = with_oracle
        self._oracles = {}

    def oracle(self, f):
        if f not in self._oracles:
            self._oracles[f] = oracle_degree_sequence(f, self.config.oracle_depth, self.config.budget,
                                                      seed=self.config.seed)
        return self._oracles[f]

    # closed forms ----------------------------------------------------
    def closed_form(self, f):
        from . import normal_forms as nf
        digits = self.config.digits
        if f.is_monomial():
            M = f.monomial_matrix()
            rho = spectral_radius(M)
            return _exact(Status.PROVEN, rho, {"route": "closed-form", "key": "monomial-spectral-radius",
                                               "matrix": [list(r) for r in M],
                                               "theta": rho.to_record(digits)})
        shape = nf.classify_shape(f)
        if shape.kind in ("permutation", "affine"):
            return _exact(Status.PROVEN, ONE, {"route": "closed-form", "key": "degree-one",
                                               "shape": shape.kind})
        if shape.kind in ("permutation-elementary", "shift-like", "elementary"):
            try:
                nform = nf.perm_elem_normal_form(f)
            except DomainError:
                nform = None
            if nform is not None:
                value, info = nf.perm_elem_dynamical_degree(nform, self.config)
                info = dict(info)
                info.update({"route": "closed-form", "key": "permutation-elementary", "shape": shape.kind})
                return _exact(Status.PROVEN, value, info)
        if f.arity == 3 and shape.kind in ("triangular", "permutation-triangular", "affine-triangular"):
            res = nf.affine_triangular_A3_dynamical_degree(f, self.config, _shape=shape)
            if res is not None:
                return res
        return None

    # generic ------------------------------------------------------------
    def run(self, f: Endomorphism, depth=0) -> DynamicalDegreeResult:
        if depth > f.arity + 2:
            raise InternalError("split recursion did not terminate")
        cf = self.closed_form(f)
        if cf is not None:
            return cf
        digits = self.config.digits
        data = maximal_eigenvalue(f, self.config.budget_matrices)
        theta = data.theta
        if compare(theta, ONE) == 0:
            return _exact(Status.PROVEN, ONE, {"route": "theta-one", "theta": theta.to_record(digits),
                                               "witness": [list(r) for r in data.witness],
                                               "reason": "1 <= lambda <= theta = 1"})
        data = maximal_eigenvector(f, data, self.config.budget_matrices, all_candidates=True)
        routes = []
        lowers = [ONE]
        chosen = None
        for mu in data.candidates[: self.config.max_routes]:
            route = self.route(f, data, mu, depth)
            routes.append(route)
            if route.get("lower") is not None:
                lowers.append(route.pop("_lower"))
            if route["outcome"] == "proven":
                chosen = route
                break
            if route["outcome"] == "evidence" and chosen is None:
                chosen = route
        cert = {"route": "weighted-degree", "theta": theta.to_record(digits),
                "witness": [list(r) for r in data.witness], "mu_method": data.method,
                "routes": [{k: v for k, v in r.items() if not k.startswith("_")} for r in routes]}
        if chosen is not None:
            cert["chosen_route"] = routes.index(chosen)
            status = Status.PROVEN if chosen["outcome"] == "proven" else Status.EVIDENCE
            return _exact(status, theta, cert)
        lower = max_number(lowers)
        upper, strict = theta, any(r.get("strict_upper") for r in routes)
        if self.with_oracle or depth == 0:
            for r, bound in fekete_bounds(self.oracle(f)):
                if compare(bound, upper) < 0:
                    upper, strict = bound, False
        if compare(lower, upper) == 0 and not strict:
            cert["reason"] = "lower and upper bounds meet"
            return _exact(Status.PROVEN, lower, cert)
        return DynamicalDegreeResult(Status.BRACKET, None, Bracket(lower, upper, strict), cert)

    def route(self, f, data: MaxEigenData, mu: WeightVector, depth):
        digits = self.config.digits
        theta = data.theta
        route = {"mu": mu.to_record(digits)}
        zeros = mu.zeros()
        try:
            st = stability_test(f, mu, self.config.horizon_for(f.arity), self.config.budget, self.config.seed)
        except DomainError as exc:
            route.update(outcome="skipped", detail=str(exc))
            return route
        route["stability"] = st.to_record()
        hat_below = False
        if zeros:
            split = dinh_nguyen_split(f, first=zeros)
            sub = self.run(split.hat, depth + 1)
            route["split"] = {"coordinates": [i + 1 for i in zeros], "hat": str(split.hat),
                              "hat_result": sub.to_record(digits)}
            if sub.exact:
                route["lower"] = sub.value.to_record(digits)
                route["_lower"] = sub.value
                hat_below = compare(sub.value, theta) < 0
                if compare(sub.value, theta) == 0:
                    route["outcome"] = "proven" if sub.status is Status.PROVEN else "evidence"
                    route["reason"] = "lambda of the preserved block equals theta"
                    return route
            elif sub.bracket is not None:
                route["lower"] = sub.bracket.lower.to_record(digits)
                route["_lower"] = sub.bracket.lower
                hat_below = compare(sub.bracket.upper, theta) < 0
        if st.verdict is Verdict.STABLE_PROVEN:
            route.update(outcome="proven", reason="mu-algebraically stable (structural)")
        elif st.verdict is Verdict.STABLE_UP_TO:
            ag = agreement(self.oracle(f), theta, self.config.oracle_tolerance)
            route["oracle_agreement"] = ag.to_record()
            if ag.ok:
                route.update(outcome="evidence", reason=f"stable up to r={st.r} and oracle agrees")
            else:
                route.update(outcome="inconclusive", reason="stable up to the horizon but the oracle disagrees")
        else:
            route["outcome"] = "unstable"
            if not zeros:
                route["strict_upper"] = True
                route["reason"] = "unstable for a positive maximal eigenvector, so lambda < theta"
            else:
                route["strict_upper"] = hat_below
                route["reason"] = ("unstable and lambda of the preserved block is below theta, so lambda < theta"
                                   if hat_below else "unstable; lambda of the preserved block is not known to be below theta")
        return route


def dynamical_degree(f: Endomorphism, config: JobConfig = DEFAULT, oracle: bool = True,
                     check_dominant: bool = True) -> DynamicalDegreeResult:
    """lambda(f) with a certificate; exact when a proven or evidence-based route exists."""
    if check_dominant and not is_dominant(f, config.seed):
        raise DomainError("map is not dominant (the Jacobian determinant vanishes identically)")
    driver = _Driver(config, oracle)
    result = driver.run(f)
    if oracle:
        rep = driver.oracle(f)
        result.oracle = rep
        if result.value is not None:
            result.agreement = agreement(rep, result.value, config.oracle_tolerance)
    return result


def jacobian_witness(f: Endomorphism) -> str:
    """Text of the Jacobian determinant, used to explain a non-dominance error."""
    return str(jacobian_determinant(f))
