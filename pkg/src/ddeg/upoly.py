"""Dense univariate polynomials over the rationals.

A polynomial is a tuple of coefficients, lowest degree first, with no
trailing zeros (the zero polynomial is the empty tuple).  Coefficients are
ints or Fractions.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd as igcd


def trim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return tuple(p)


def deg(p):
    return len(p) - 1


def add(p, q):
    n = max(len(p), len(q))
    return trim((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def sub(p, q):
    n = max(len(p), len(q))
    return trim((p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0) for i in range(n))


def scale(p, c):
    return trim(a * c for a in p)


def mul(p, q):
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return trim(out)


def divmod_(p, q):
    """Quotient and remainder over the rationals."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(c) for c in p]
    dq = deg(q)
    lc = Fraction(q[-1])
    if len(r) - 1 < dq:
        return (), trim(r)
    quo = [Fraction(0)] * (len(r) - dq)
    for k in range(len(r) - 1 - dq, -1, -1):
        c = r[k + dq] / lc
        quo[k] = c
        if c:
            for j, b in enumerate(q):
                r[k + j] -= c * b
    return trim(quo), trim(r[:dq])


def rem(p, q):
    return divmod_(p, q)[1]


def monic(p):
    if not p:
        return p
    lc = Fraction(p[-1])
    return tuple(Fraction(c) / lc for c in p)


def gcd(p, q):
    """Monic gcd over the rationals."""
    p, q = trim(p), trim(q)
    while q:
        p, q = q, rem(p, q)
    return monic(p)


def ext_gcd(a, b):
    """Return (g, s, t) with s*a + t*b = g monic."""
    r0, r1 = trim(a), trim(b)
    s0, s1 = (Fraction(1),), ()
    t0, t1 = (), (Fraction(1),)
    while r1:
        q, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1))
        t0, t1 = t1, sub(t0, mul(q, t1))
    lc = Fraction(r0[-1])
    return monic(r0), scale(s0, 1 / lc), scale(t0, 1 / lc)


def derivative(p):
    return trim(i * p[i] for i in range(1, len(p)))


def evaluate(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def primitive(p):
    """Integer polynomial with content 1 and positive leading coefficient."""
    p = trim(p)
    if not p:
        return ()
    den = 1
    for c in p:
        if isinstance(c, Fraction):
            den = den * c.denominator // igcd(den, c.denominator)
    ints = [int(Fraction(c) * den) for c in p]
    g = 0
    for c in ints:
        g = igcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return tuple(ints)


def squarefree(p):
    """Primitive integer squarefree part."""
    p = trim(p)
    if deg(p) <= 0:
        return primitive(p)
    g = gcd(p, derivative(p))
    if deg(g) > 0:
        p = divmod_(p, g)[0]
    return primitive(p)


def mirror(p):
    """p(-x)."""
    return tuple(c if i % 2 == 0 else -c for i, c in enumerate(p))


def compose_linear(p, a, b):
    """p(a*x + b)."""
    out = ()
    for c in reversed(p):
        out = add(mul(out, (b, a)), (c,))
    return out


def sturm_sequence(p):
    seq = [trim(p), derivative(p)]
    while seq[-1]:
        r = rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append(scale(r, -1))
    return [s for s in seq if s]


@lru_cache(maxsize=4096)
def _cached_sturm(p):
    return tuple(sturm_sequence(p))


def sign_changes(seq, x):
    prev = 0
    n = 0
    for s in seq:
        v = evaluate(s, x)
        if v:
            sg = 1 if v > 0 else -1
            if prev and sg != prev:
                n += 1
            prev = sg
    return n


def count_roots(p, lo, hi):
    """Number of distinct real roots in the half-open interval (lo, hi]."""
    seq = _cached_sturm(trim(p))
    return sign_changes(seq, lo) - sign_changes(seq, hi)


def cauchy_bound(p):
    """Every complex root has modulus strictly less than the returned rational."""
    lc = abs(Fraction(p[-1]))
    return 1 + max((abs(Fraction(c)) / lc for c in p[:-1]), default=Fraction(0))


def sign(x):
    return (x > 0) - (x < 0)


def interval_eval(p, lo, hi):
    """Enclosure of {p(x) : lo <= x <= hi} by Horner interval arithmetic."""
    a = b = Fraction(0)
    for c in reversed(p):
        cands = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(cands) + c, max(cands) + c
    return a, b


def char_poly(M):
    """Characteristic polynomial det(xI - M), integer coefficients lowest first.

    Reduction to upper Hessenberg form by exact similarity transforms,
    followed by the standard Hessenberg recurrence.
    """
    n = len(M)
    if n == 0:
        return (1,)
    if any(len(row) != n for row in M):
        raise ValueError("char_poly needs a square matrix")
    A = [[Fraction(x) for x in row] for row in M]
    for j in range(n - 2):
        piv = next((i for i in range(j + 1, n) if A[i][j]), None)
        if piv is None:
            continue
        if piv != j + 1:
            A[piv], A[j + 1] = A[j + 1], A[piv]
            for row in A:
                row[piv], row[j + 1] = row[j + 1], row[piv]
        for i in range(j + 2, n):
            if A[i][j]:
                t = A[i][j] / A[j + 1][j]
                A[i] = [x - t * y for x, y in zip(A[i], A[j + 1])]
                for row in A:
                    row[j + 1] += t * row[i]
    # p_k = characteristic polynomial of the leading k x k block
    polys = [(Fraction(1),)]
    for k in range(1, n + 1):
        pk = mul((-A[k - 1][k - 1], Fraction(1)), polys[k - 1])
        prod = Fraction(1)
        for i in range(k - 1, 0, -1):
            prod *= A[i][i - 1]
            if not prod:
                break
            pk = sub(pk, scale(polys[i - 1], prod * A[i - 1][k - 1]))
        polys.append(pk)
    return tuple(int(c) for c in polys[n])
