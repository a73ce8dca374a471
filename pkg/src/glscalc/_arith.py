"""Dense univariate and sparse bivariate polynomial helpers over mpq.

Univariate objects are plain lists of ``mpq`` indexed by exponent.  A list
may be an exact polynomial or a power series known modulo ``t**prec``; the
callers keep track of which.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from gmpy2 import mpq

ZERO = mpq(0)
ONE = mpq(1)

Poly = list  # list[mpq]
BiPoly = dict  # dict[tuple[int, int], mpq]


def trim(p: Sequence[mpq]) -> Poly:
    out = list(p)
    while out and out[-1] == 0:
        out.pop()
    return out


def order(p: Sequence[mpq], limit: int | None = None) -> int | None:
    """Index of the first nonzero coefficient below ``limit``; None if none."""
    n = len(p) if limit is None else min(len(p), limit)
    for i in range(n):
        if p[i] != 0:
            return i
    return None


def add(p: Sequence[mpq], q: Sequence[mpq]) -> Poly:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] += c
    return trim(out)


def sub(p: Sequence[mpq], q: Sequence[mpq]) -> Poly:
    return add(p, [-c for c in q])


def scale(p: Sequence[mpq], c: mpq) -> Poly:
    if c == 0:
        return []
    return [a * c for a in p]


def mul(p: Sequence[mpq], q: Sequence[mpq], prec: int | None = None) -> Poly:
    if not p or not q:
        return []
    n = len(p) + len(q) - 1
    if prec is not None:
        n = min(n, prec)
    out = [ZERO] * n
    for i, a in enumerate(p):
        if a == 0 or i >= n:
            continue
        lim = min(len(q), n - i)
        for j in range(lim):
            b = q[j]
            if b:
                out[i + j] += a * b
    return trim(out)


def power(p: Sequence[mpq], e: int, prec: int | None = None) -> Poly:
    result: Poly = [ONE]
    base = list(p)
    while e:
        if e & 1:
            result = mul(result, base, prec)
        e >>= 1
        if e:
            base = mul(base, base, prec)
    return result


def powers(p: Sequence[mpq], top: int, prec: int | None = None) -> list[Poly]:
    out: list[Poly] = [[ONE]]
    for _ in range(top):
        out.append(mul(out[-1], p, prec))
    return out


def inverse_unit(u: Sequence[mpq], prec: int) -> Poly:
    """Inverse of a series with nonzero constant term, modulo t**prec."""
    if not u or u[0] == 0:
        raise ZeroDivisionError("not a unit")
    inv0 = ONE / u[0]
    out = [ZERO] * prec
    out[0] = inv0
    for n in range(1, prec):
        s = ZERO
        for k in range(1, min(n, len(u) - 1) + 1):
            c = u[k]
            if c:
                s += c * out[n - k]
        out[n] = -s * inv0
    return trim(out)


def compose(p: Sequence[mpq], q: Sequence[mpq], prec: int | None = None) -> Poly:
    """p(q(t)) by Horner's rule."""
    out: Poly = []
    for c in reversed(p):
        out = add(mul(out, q, prec), [c] if c else [])
    return out


def from_terms(terms: Iterable[tuple[int, mpq]]) -> Poly:
    out: Poly = []
    for e, c in terms:
        if e >= len(out):
            out.extend([ZERO] * (e + 1 - len(out)))
        out[e] += mpq(c)
    return trim(out)


def to_terms(p: Sequence[mpq]) -> list[tuple[int, mpq]]:
    return [(i, c) for i, c in enumerate(p) if c != 0]


# -- bivariate -------------------------------------------------------------


def bi_trim(f: BiPoly) -> BiPoly:
    return {k: v for k, v in f.items() if v != 0}


def bi_add(f: BiPoly, g: BiPoly) -> BiPoly:
    out = dict(f)
    for k, v in g.items():
        out[k] = out.get(k, ZERO) + v
    return bi_trim(out)


def bi_mul(f: BiPoly, g: BiPoly) -> BiPoly:
    out: BiPoly = {}
    for (a, b), u in f.items():
        for (c, d), v in g.items():
            key = (a + c, b + d)
            out[key] = out.get(key, ZERO) + u * v
    return bi_trim(out)


def bi_order(f: BiPoly) -> int | None:
    """Lowest total degree present (the multiplicity at the origin)."""
    if not f:
        return None
    return min(a + b for a, b in f)


def bi_eval_param(f: BiPoly, x: Sequence[mpq], y: Sequence[mpq], prec: int | None = None) -> Poly:
    """f(x(t), y(t)), optionally truncated modulo t**prec."""
    if not f:
        return []
    da = max(a for a, _ in f)
    db = max(b for _, b in f)
    xp = powers(x, da, prec)
    yp = powers(y, db, prec)
    out: Poly = []
    for (a, b), c in f.items():
        out = add(out, scale(mul(xp[a], yp[b], prec), c))
    return out


def bi_substitute(f: BiPoly, X: BiPoly, Y: BiPoly) -> BiPoly:
    """f(X(u, v), Y(u, v)) for bivariate polynomials X and Y."""
    if not f:
        return {}
    da = max(a for a, _ in f)
    db = max(b for _, b in f)
    xp: list[BiPoly] = [{(0, 0): ONE}]
    for _ in range(da):
        xp.append(bi_mul(xp[-1], X))
    yp: list[BiPoly] = [{(0, 0): ONE}]
    for _ in range(db):
        yp.append(bi_mul(yp[-1], Y))
    out: BiPoly = {}
    for (a, b), c in f.items():
        term = bi_mul(xp[a], yp[b])
        for k, v in term.items():
            out[k] = out.get(k, ZERO) + c * v
    return bi_trim(out)
