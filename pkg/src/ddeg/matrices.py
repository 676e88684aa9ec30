"""Contained matrices, their spectral radii, and maximal eigenvectors.

A matrix is contained in f when its i-th row is the exponent vector of a
monomial of f_i.  The maximal eigenvalue theta is the largest spectral radius
over all contained matrices; a maximal eigenvector is a non-negative weight
vector mu with deg_mu(f_i) = theta * mu_i for every i.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import flint
import networkx as nx
import numpy as np

from . import upoly
from .algebraic import (NumberField, NumberFieldElement, RealAlgebraicNumber, char_poly,
                        compare, largest_real_root)
from .errors import DomainError, InternalError, ResourceLimitError
from .polynomial import Endomorphism
from .weights import WeightVector, mu_degree_poly

DEFAULT_MATRIX_BUDGET = 10**6
CANDIDATE_CAP = 64


@dataclass
class MaxEigenData:
    theta: RealAlgebraicNumber
    witness: tuple
    witnesses: list = dc_field(default_factory=list)
    mu: WeightVector | None = None
    field: NumberField | None = None
    enumerated: int = 0
    method: str = ""
    candidates: list = dc_field(default_factory=list)  # every verified mu found

    @property
    def theta_nf(self) -> NumberFieldElement:
        return self.field.theta()

    def to_record(self, digits=30):
        rec = {
            "theta": self.theta.to_record(digits),
            "witness": [list(r) for r in self.witness],
            "matrices_enumerated": self.enumerated,
        }
        if self.mu is not None:
            rec["mu"] = self.mu.to_record(digits)
            rec["mu_method"] = self.method
        return rec


# ---------------------------------------------------------------------------
# supports and spectral radii


def support_family(f: Endomorphism):
    """Per-component supports, each sorted in lexicographic order."""
    rows = []
    for i, c in enumerate(f):
        if c.is_zero():
            raise DomainError(f"component {i + 1} is zero; no contained matrix exists")
        rows.append(sorted(c.support()))
    return rows


def count_contained(family) -> int:
    n = 1
    for rows in family:
        n *= len(rows)
    return n


def prune_dominated(rows):
    """Drop rows that are entrywise <= another row (monotonicity of rho)."""
    keep = []
    for r in rows:
        if any(s != r and all(a <= b for a, b in zip(r, s)) for s in rows):
            continue
        keep.append(r)
    return keep


def contained_matrices(f: Endomorphism, prune=False):
    family = support_family(f)
    if prune:
        family = [prune_dominated(rows) for rows in family]
    for combo in itertools.product(*family):
        yield tuple(combo)


def spectral_radius(M) -> RealAlgebraicNumber:
    """Perron root of a non-negative integer matrix."""
    if any(x < 0 for row in M for x in row):
        raise DomainError("spectral_radius expects a non-negative matrix")
    root = largest_real_root(char_poly(M))
    if root is None:  # cannot happen for a non-negative matrix
        raise InternalError("characteristic polynomial without real root")
    return root


def _numeric_radii(mats: np.ndarray) -> np.ndarray:
    return np.abs(np.linalg.eigvals(mats.astype(float))).max(axis=-1)


def maximal_eigenvalue(f: Endomorphism, budget: int = DEFAULT_MATRIX_BUDGET) -> MaxEigenData:
    """theta = max rho(M) over contained matrices, with the lexicographically sorted witnesses.

    Numeric eigenvalues only screen candidates; the maximum and every tie are
    decided exactly.
    """
    family = [prune_dominated(rows) for rows in support_family(f)]
    n = f.arity
    total = count_contained(family)
    limit = min(total, budget)
    numeric = []
    chunk = 8192
    it = itertools.product(*family)
    seen = 0
    while seen < limit:
        block = list(itertools.islice(it, min(chunk, limit - seen)))
        if not block:
            break
        seen += len(block)
        radii = _numeric_radii(np.array(block, dtype=float).reshape(len(block), n, n))
        numeric.extend(zip(radii.tolist(), block))
    best_f = max(r for r, _ in numeric)
    # eigenvalues of defective matrices are only accurate to about eps^(1/n)
    norm = max(1.0, best_f)
    tol = max(1e-6, 4 * (1e-15) ** (1.0 / n)) * norm
    cands = sorted(M for r, M in numeric if r >= best_f - tol)
    by_poly = {}
    for M in cands:
        by_poly.setdefault(char_poly(M), []).append(M)
    roots = {p: largest_real_root(p) for p in by_poly}
    best = None
    for p, root in roots.items():
        if best is None or compare(root, best) > 0:
            best = root
    witnesses = sorted(M for p, Ms in by_poly.items() if compare(roots[p], best) == 0 for M in Ms)
    theta = _best_defining(best)
    data = MaxEigenData(theta=theta, witness=witnesses[0], witnesses=witnesses,
                        field=NumberField(theta), enumerated=seen)
    if seen < total:
        raise ResourceLimitError(
            f"contained-matrix budget {budget} exhausted after {seen} of {total} matrices; "
            "theta is only a lower bound", partial=data)
    return data


def _best_defining(root: RealAlgebraicNumber) -> RealAlgebraicNumber:
    """Replace the defining polynomial by its smallest factor vanishing at root, when cheap."""
    poly = flint.fmpz_poly(list(root.defining))
    _, factors = poly.factor()
    for fac, _ in sorted(factors, key=lambda t: t[0].degree()):
        coeffs = tuple(int(c) for c in fac.coeffs())
        if upoly.count_roots(coeffs, root.lo, root.hi) == 1:
            if upoly.evaluate(coeffs, root.lo) and upoly.evaluate(coeffs, root.hi):
                return RealAlgebraicNumber.from_interval(coeffs, root.lo, root.hi)
    return root


# ---------------------------------------------------------------------------
# Frobenius normal form


@dataclass
class FrobeniusForm:
    order: list       # permutation: new position -> original index
    blocks: list      # list of index lists, block lower triangular in this order
    reach: dict       # block id -> set of block ids it has access to (excluding itself)

    def permuted(self, M):
        return [[M[i][j] for j in self.order] for i in self.order]


def frobenius_normal_form(M) -> FrobeniusForm:
    """Strongly connected components ordered so the permuted matrix is block lower triangular."""
    n = len(M)
    g = nx.DiGraph()
    g.add_nodes_from(range(n))
    g.add_edges_from((i, j) for i in range(n) for j in range(n) if M[i][j])
    cond = nx.condensation(g)
    # an edge i -> j (M[i][j] > 0) must go to an earlier or the same block: sinks first
    topo = list(reversed(list(nx.lexicographical_topological_sort(cond, key=lambda c: min(cond.nodes[c]["members"])))))
    blocks = [sorted(cond.nodes[c]["members"]) for c in topo]
    index = {c: k for k, c in enumerate(topo)}
    reach = {index[c]: {index[d] for d in nx.descendants(cond, c)} for c in cond.nodes}
    order = [i for b in blocks for i in b]
    return FrobeniusForm(order, blocks, reach)


# ---------------------------------------------------------------------------
# linear algebra over Q(theta)


def _kernel(A, fld: NumberField):
    """Basis of the right kernel of A (list of rows of field elements)."""
    rows = [list(r) for r in A]
    m = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, m) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and not rows[i][c].is_zero():
                t = rows[i][c]
                rows[i] = [x - t * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [fld.zero() for _ in range(ncols)]
        v[fc] = fld.one()
        for k, pc in enumerate(pivots):
            v[pc] = -rows[k][fc]
        basis.append(v)
    return basis


def _solve(A, b, fld: NumberField):
    """Solve A x = b for square invertible A over the field."""
    n = len(A)
    rows = [list(A[i]) + [b[i]] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if not rows[i][c].is_zero()), None)
        if piv is None:
            raise InternalError("singular system while assembling an eigenvector")
        rows[c], rows[piv] = rows[piv], rows[c]
        inv = rows[c][c].inverse()
        rows[c] = [x * inv for x in rows[c]]
        for i in range(n):
            if i != c and not rows[i][c].is_zero():
                t = rows[i][c]
                rows[i] = [x - t * y for x, y in zip(rows[i], rows[c])]
    return [rows[i][n] for i in range(n)]


def _block_radius(M, idx):
    sub = [[M[i][j] for j in idx] for i in idx]
    return spectral_radius(sub)


def nonneg_eigenvectors(M, theta: NumberFieldElement):
    """Extremal non-negative eigenvectors of M for the eigenvalue theta = rho(M).

    One vector per distinguished class: a strongly connected class C with
    rho(M_C) = theta such that every other class having access to C has
    spectral radius below theta.  The vector is supported on C and the classes
    with access to C.
    """
    fld = theta.field
    lam = fld.root
    n = len(M)
    form = frobenius_normal_form(M)
    radii = [_block_radius(M, b) for b in form.blocks]
    nb = len(form.blocks)
    upstream = {k: {u for u in range(nb) if k in form.reach[u]} for k in range(nb)}
    out = []
    for k in range(nb):
        if compare(radii[k], lam) != 0:
            continue
        if any(compare(radii[u], lam) >= 0 for u in upstream[k]):
            continue
        v = [fld.zero() for _ in range(n)]
        C = form.blocks[k]
        A = [[fld.rational(M[i][j]) - (theta if i == j else fld.zero()) for j in C] for i in C]
        ker = _kernel(A, fld)
        if len(ker) != 1:
            raise InternalError("Perron eigenspace of an irreducible block is not one-dimensional")
        vec = ker[0]
        s = next(x.sign() for x in vec if not x.is_zero())
        for i, x in zip(C, vec):
            v[i] = x if s > 0 else -x
        # upstream classes: sinks first order means dependencies come earlier
        for u in range(k + 1, nb):
            if u not in upstream[k]:
                continue
            U = form.blocks[u]
            rhs = []
            for i in U:
                acc = fld.zero()
                for j in range(n):
                    if M[i][j] and j not in U and not v[j].is_zero():
                        acc = acc + v[j] * M[i][j]
                rhs.append(acc)
            A = [[(theta if i == j else fld.zero()) - M[i][j] for j in U] for i in U]
            for i, x in zip(U, _solve(A, rhs, fld)):
                v[i] = x
        if any(x.sign() < 0 for x in v):
            raise InternalError("assembled eigenvector has a negative entry")
        out.append(v)
    if not out:
        raise InternalError("no distinguished class for the spectral radius")
    return out


def nonneg_eigenvector(M, theta: NumberFieldElement):
    """The first extremal non-negative eigenvector (see :func:`nonneg_eigenvectors`)."""
    return nonneg_eigenvectors(M, theta)[0]


# ---------------------------------------------------------------------------
# maximal eigenvectors


def verify_maximal_eigenvector(f: Endomorphism, mu: WeightVector, theta) -> bool:
    """Exact check of deg_mu(f_i) = theta * mu_i for every component."""
    if not isinstance(theta, NumberFieldElement):
        theta = mu.field.rational(Fraction(theta))
    if theta.field is not mu.field:
        raise DomainError("theta and mu live in different fields")
    for i, c in enumerate(f):
        if c.is_zero():
            return False
        d = mu_degree_poly(c, mu)
        if not (d - theta * mu.entries[i]).is_zero():
            return False
    return True


def _normalize(vec):
    k = max(i for i, x in enumerate(vec) if not x.is_zero())
    s = vec[k]
    return [x / s for x in vec]


def _try(f, vec, theta, found, cap=16):
    if all(x.is_zero() for x in vec):
        return
    vec = _normalize(vec)
    mu = WeightVector(vec, theta.field)
    if verify_maximal_eigenvector(f, mu, theta):
        if not any(mu.same_direction(m) for m in found):
            if len(found) < cap:
                found.append(mu)


def _rays_for(f, data: MaxEigenData, limit=CANDIDATE_CAP):
    theta = data.theta_nf
    rays = []
    for M in data.witnesses[:limit]:
        for v in nonneg_eigenvectors(M, theta):
            rays.append(v)
    return rays


def maximal_eigenvector(f: Endomorphism, data: MaxEigenData | None = None,
                        budget: int = DEFAULT_MATRIX_BUDGET, all_candidates=False,
                        limit: int = CANDIDATE_CAP) -> MaxEigenData:
    """Populate ``data.mu`` with a verified maximal eigenvector.

    Extremal eigenvectors of the witness matrices are tried in lexicographic
    matrix order, then sums of pairs of them, then a perturbation search.
    With ``all_candidates`` every verified direction found (up to a cap) is
    kept in ``data.candidates``.
    """
    if data is None:
        data = maximal_eigenvalue(f, budget)
    theta = data.theta_nf
    found = []
    rays = _rays_for(f, data, limit)
    for v in rays:
        _try(f, v, theta, found)
        if found and not all_candidates:
            break
    method = "witness-eigenvector"
    if not found or all_candidates:
        for a, b in itertools.combinations(rays, 2):
            _try(f, [x + y for x, y in zip(a, b)], theta, found)
            if found and not all_candidates:
                break
        if found and method == "witness-eigenvector" and not all_candidates:
            method = "ray-sum"
    if not found:
        mu = _perturbation_search(f, data, rays)
        if mu is not None:
            found.append(mu)
            method = "perturbation"
    if not found:
        raise InternalError("no maximal eigenvector found; candidates and fallback exhausted")
    data.mu = found[0]
    data.candidates = found
    data.method = method
    return data


def _perturbation_search(f, data: MaxEigenData, rays):
    """Limit of Perron vectors of generically perturbed supports, recovered exactly.

    Each support row r of f_i is moved to r + eps*w with a fixed generic
    non-negative direction w, eps = 1/(t + c).  The numeric Perron vectors of
    the perturbed maximizing matrices converge to a maximal eigenvector; the
    rows active at the limit give a contained matrix whose exact eigenvectors
    (and combinations of the rays) are then verified.
    """
    family = support_family(f)
    n = f.arity
    rng = np.random.default_rng(12345)
    dirs = [[rng.random(n) for _ in rows] for rows in family]
    theta = data.theta_nf
    last = None
    c = 2
    for t in range(1, 65):
        eps = 1.0 / (t + c)
        pert = [[np.array(r, dtype=float) + eps * w for r, w in zip(rows, ws)]
                for rows, ws in zip(family, dirs)]
        best, vec = -1.0, None
        for combo in itertools.islice(itertools.product(*pert), 200000):
            A = np.array(combo)
            vals, vecs = np.linalg.eig(A)
            k = int(np.argmax(vals.real))
            if vals[k].real > best + 1e-12:
                best = vals[k].real
                vec = np.abs(vecs[:, k].real)
        if vec is None:
            break
        last = vec / vec.max()
    if last is None:
        return None
    theta_f = float(theta)
    rows = []
    for i, srows in enumerate(family):
        scores = [float(np.dot(r, last)) for r in srows]
        top = max(scores)
        rows.append([r for r, s in zip(srows, scores) if s >= top - 1e-6 * max(1.0, top)])
    found = []
    for combo in itertools.islice(itertools.product(*rows), CANDIDATE_CAP):
        M = [list(r) for r in combo]
        try:
            vs = nonneg_eigenvectors(M, theta)
        except InternalError:
            continue
        for v in vs:
            _try(f, v, theta, found)
        if found:
            return found[0]
    # combination of all rays with weights read off the numeric limit
    if rays:
        X = np.array([[float(x) for x in v] for v in rays]).T
        coef, *_ = np.linalg.lstsq(X, last * theta_f / theta_f, rcond=None)
        coef = [Fraction(max(0.0, float(x))).limit_denominator(64) for x in coef]
        vec = [sum((v[i] * cf for v, cf in zip(rays, coef) if cf), theta.field.zero()) for i in range(n)]
        _try(f, vec, theta, found)
    return found[0] if found else None
