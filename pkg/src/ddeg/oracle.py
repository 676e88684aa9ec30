"""Brute-force degree oracle for iterates f^r.

Shallow iterates are composed exactly.  Once the exact iterate would exceed
the term budget, degrees are read off the restriction of f^r to random
lines t -> a + t*b over Z/p (p = 2^61 - 1): the restricted degree never
exceeds deg(f^r) and equals it unless the line is special, which happens
with probability about deg(f^r)/p per line.  Two lines are used.

Because lambda(f) is the infimum of deg(f^r)^(1/r), every exact row gives a
certified upper bound.  Convergence of the r-th roots is slow, so the oracle
also extrapolates: a linear recurrence for the degree sequence is sought
with Berlekamp-Massey, and its dominant root is reported as the estimate
when the recurrence is confirmed by at least one extra term.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import flint
import numpy as np

from .algebraic import RealAlgebraicNumber, largest_real_root
from .errors import ResourceLimitError
from .polynomial import Budget, Endomorphism, compose, coeff_mod

LINE_PRIME = 2**61 - 1
DEFAULT_DEPTH = 8
EXACT_TERM_CAP = 20_000


@dataclass
class OracleRow:
    r: int
    degree: int
    method: str  # "exact" or "line"
    components: tuple = ()

    @property
    def bound(self) -> float:
        return self.degree ** (1.0 / self.r)

    def as_dict(self):
        return {"r": self.r, "degree": self.degree, "root": f"{self.bound:.10f}", "method": self.method}


@dataclass
class OracleReport:
    rows: list = field(default_factory=list)
    truncated: bool = False
    note: str = ""
    estimate: float | None = None
    estimate_method: str = ""
    recurrence: list | None = None

    @property
    def degrees(self):
        return [row.degree for row in self.rows]

    def best_upper_bound(self) -> float | None:
        exact = [row.bound for row in self.rows if row.method == "exact"]
        return min(exact) if exact else None

    def to_record(self):
        return {
            "rows": [row.as_dict() for row in self.rows],
            "truncated": self.truncated,
            "estimate": None if self.estimate is None else f"{self.estimate:.12f}",
            "estimate_method": self.estimate_method,
            "recurrence": None if self.recurrence is None else [str(c) for c in self.recurrence],
            "note": self.note,
        }


# ---------------------------------------------------------------------------
# restriction to lines


def _eval_mod(poly, values, p, cache):
    acc = flint.nmod_poly([], p)
    for m, c in poly.items():
        term = flint.nmod_poly([coeff_mod(c, p)], p)
        for i, e in enumerate(m):
            if e:
                key = (i, e)
                if key not in cache:
                    cache[key] = values[i] ** e
                term = term * cache[key]
        acc = acc + term
    return acc


def line_degrees(f: Endomorphism, depth: int, seed: int = 0, p: int = LINE_PRIME, lines: int = 2):
    """Component degrees of f^r restricted to generic lines, r = 1..depth.

    Each entry is the componentwise maximum over the lines.
    """
    rng = random.Random(seed)
    best = [[0] * f.arity for _ in range(depth)]
    for _ in range(lines):
        vals = [flint.nmod_poly([rng.randrange(p), rng.randrange(1, p)], p) for _ in range(f.arity)]
        for r in range(depth):
            cache = {}
            vals = [_eval_mod(c, vals, p, cache) for c in f]
            best[r] = [max(b, v.degree()) for b, v in zip(best[r], vals)]
    return best


# ---------------------------------------------------------------------------
# recurrence extrapolation


def berlekamp_massey(seq):
    """Shortest recurrence s_k = sum_{i=1..L} c_i s_{k-i}; returns [c_1..c_L]."""
    s = [Fraction(x) for x in seq]
    C, B = [Fraction(1)], [Fraction(1)]
    L, m, b = 0, 1, Fraction(1)
    for n in range(len(s)):
        d = s[n] + sum(C[i] * s[n - i] for i in range(1, L + 1))
        if d == 0:
            m += 1
            continue
        T = list(C)
        coef = d / b
        C = C + [Fraction(0)] * max(0, len(B) + m - len(C))
        for i, x in enumerate(B):
            C[i + m] -= coef * x
        if 2 * L <= n:
            L, B, b, m = n + 1 - L, T, d, 1
        else:
            m += 1
    C = C + [Fraction(0)] * (L + 1 - len(C))
    return [-c for c in C[1:L + 1]]


def dominant_root(rec) -> float:
    if not rec:
        return 0.0
    coeffs = [1.0] + [-float(c) for c in rec]
    roots = np.roots(coeffs)
    return float(max(abs(z) for z in roots))


def confirmed_recurrence(degrees):
    """Shortest recurrence for 1, d_1, ..., d_R (or d_1, ..., d_R) confirmed by an extra term."""
    best = None
    for seq in ([1] + list(degrees), list(degrees)):
        rec = berlekamp_massey(seq)
        if 2 * len(rec) + 1 <= len(seq):
            if best is None or len(rec) < len(best):
                best = rec
    return best


def estimate_growth(degrees, components=None):
    """(estimate, method, recurrence) from the total degrees d_1..d_R.

    ``components`` optionally holds the per-component degree sequences; when
    the total sequence has no confirmed recurrence (the maximal component
    can switch), the growth is the largest dominant root among components,
    provided every non-constant component has a confirmed recurrence.
    """
    best = confirmed_recurrence(degrees)
    if best is not None:
        return dominant_root(best), "recurrence", best
    if components:
        rates = []
        for seq in components:
            if any(d < 0 for d in seq):
                rates = None
                break
            rec = confirmed_recurrence(seq)
            if rec is None:
                rates = None
                break
            rates.append((dominant_root(rec), rec))
        if rates:
            rate, rec = max(rates, key=lambda t: t[0])
            return rate, "recurrence", rec
    q = [b / a for a, b in zip(degrees, degrees[1:]) if a]
    if len(q) >= 3:
        a, b, c = q[-3:]
        den = c - 2 * b + a
        if den:
            return c - (c - b) ** 2 / den, "aitken", None
    if q:
        return q[-1], "ratio", None
    return (degrees[-1] if degrees else 1.0), "ratio", None


# ---------------------------------------------------------------------------
# driver


def oracle_degree_sequence(f: Endomorphism, depth: int = DEFAULT_DEPTH, budget: Budget | None = None,
                           seed: int = 0, exact_cap: int = EXACT_TERM_CAP) -> OracleReport:
    """Rows (r, deg(f^r), method) for r = 1..depth plus a growth estimate."""
    budget = budget or Budget()
    cap = exact_cap if budget.max_terms is None else min(exact_cap, budget.max_terms)
    exact_budget = Budget(cap, budget.max_bits)
    report = OracleReport()
    current = f
    r = 1
    while r <= depth:
        report.rows.append(OracleRow(r, current.degree(), "exact",
                                     tuple(c.total_degree() if not c.is_zero() else -1 for c in current)))
        r += 1
        if r > depth:
            break
        try:
            current = compose(current, f, exact_budget)
        except ResourceLimitError:
            break
    if r <= depth:
        try:
            degs = line_degrees(f, depth, seed)
        except MemoryError:  # pragma: no cover
            report.truncated = True
            report.note = "line restriction ran out of memory"
            degs = []
        for k in range(r, min(depth, len(degs)) + 1):
            report.rows.append(OracleRow(k, max(degs[k - 1]), "line", tuple(degs[k - 1])))
        report.note = f"exact composition up to r={r - 1}; generic lines mod {LINE_PRIME} beyond"
    if len(report.rows) < depth:
        report.truncated = True
    comps = None
    if report.rows and all(len(row.components) == f.arity for row in report.rows):
        comps = [[row.components[i] for row in report.rows] for i in range(f.arity)]
    est, how, rec = estimate_growth(report.degrees, comps)
    report.estimate, report.estimate_method, report.recurrence = est, how, rec
    return report


def fekete_bounds(report: OracleReport):
    """Certified upper bounds d_r^(1/r) as real algebraic numbers (exact rows only)."""
    out = []
    for row in report.rows:
        if row.method != "exact" or row.degree < 1:
            continue
        poly = (-row.degree,) + (0,) * (row.r - 1) + (1,)
        out.append((row.r, largest_real_root(poly)))
    return out


@dataclass
class Agreement:
    ok: bool
    upper_ok: bool
    difference: float | None
    tolerance: float
    detail: str

    def to_record(self):
        return {"ok": self.ok, "upper_bounds_respected": self.upper_ok,
                "difference": None if self.difference is None else f"{self.difference:.3e}",
                "tolerance": self.tolerance, "detail": self.detail}


def agreement(report: OracleReport, value, tol: float = 1e-6, loose_tol: float = 1e-3) -> Agreement:
    """Compare an exact value with the oracle.

    The value must not exceed any computed deg(f^r)^(1/r).  The growth
    estimate must be within ``tol`` when it comes from a confirmed
    recurrence, otherwise within ``loose_tol``.
    """
    v = float(value) if not isinstance(value, float) else value
    upper_ok = all(v <= row.bound * (1 + 1e-12) + 1e-12 for row in report.rows)
    if report.estimate is None:
        return Agreement(upper_ok, upper_ok, None, tol, "no estimate")
    t = tol if report.estimate_method == "recurrence" else loose_tol
    diff = abs(report.estimate - v)
    ok = upper_ok and diff <= t
    detail = f"estimate by {report.estimate_method}"
    if not upper_ok:
        detail += "; value exceeds a Fekete upper bound"
    return Agreement(ok, upper_ok, diff, t, detail)


def raw_root(report: OracleReport) -> float:
    """deg(f^R)^(1/R) at the deepest computed r."""
    return report.rows[-1].bound if report.rows else math.nan


__all__ = ["OracleRow", "OracleReport", "oracle_degree_sequence", "line_degrees", "berlekamp_massey",
           "estimate_growth", "fekete_bounds", "agreement", "Agreement", "raw_root", "RealAlgebraicNumber"]
