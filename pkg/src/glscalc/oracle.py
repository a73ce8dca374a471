"""Brute-force cohomology of ideal sheaves of schemes in the plane.

For a scheme X at a point P of the affine chart of P^2, a polynomial f of
degree at most d lies in J_X exactly when, along every branch Q_j of the
defining germ, ``ord_t f(P + Q_j(t))`` reaches

    alpha_j = sum over q in T* ∩ Q_j of m_q * mt(Q_j at q).

Each of these order conditions is a linear functional on the coefficients
of f, so h0 and h1 of J_X(d) follow from one exact rank computation.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from gmpy2 import mpq

from . import _arith as A
from .blowup import chart_map, total_transform_order
from .rank import rank
from .scheme import GSScheme, LineLike, intersect_line, line_branch, reduce

Placement = tuple  # (mpq, mpq)
ORIGIN: Placement = (mpq(0), mpq(0))


def monomials(d: int) -> list[tuple[int, int]]:
    """Exponents (i, j) of x**i * y**j with i + j <= d, graded then by i."""
    return [(i, e - i) for e in range(d + 1) for i in range(e, -1, -1)]


def ambient(d: int) -> int:
    return (d + 1) * (d + 2) // 2 if d >= 0 else 0


def branch_bounds(X: GSScheme) -> list[int]:
    """The order bounds alpha_j, one per branch."""
    out = []
    for j, b in enumerate(X.branches):
        out.append(sum(X.weights[q] * b.mult(len(q)) for q in X.branch_points(j)))
    return out


@dataclass
class LinearConditionSystem:
    d: int
    ambient: int
    rows: list  # list[list[mpq]]
    groups: list = field(default_factory=list)  # (scheme index, branch index, alpha)

    @property
    def rank(self) -> int:
        return rank(self.rows, self.ambient)

    def to_csv(self) -> str:
        return "\n".join(",".join(str(c) for c in r) for r in self.rows)


def _order_rows(x: Sequence[mpq], y: Sequence[mpq], d: int, alpha: int, P: Placement) -> list[list[mpq]]:
    """Coefficient functionals of t**0 .. t**(alpha-1) of f(P + (x(t), y(t)))."""
    if alpha <= 0:
        return []
    X = A.add([P[0]], list(x)) if P[0] else list(x)
    Y = A.add([P[1]], list(y)) if P[1] else list(y)
    xp = A.powers(X, d, alpha)
    yp = A.powers(Y, d, alpha)
    cols = []
    for i, j in monomials(d):
        s = A.mul(xp[i], yp[j], alpha)
        cols.append(s + [A.ZERO] * (alpha - len(s)))
    return [[cols[c][k] for c in range(len(cols))] for k in range(alpha)]


def conditions_of(
    schemes: GSScheme | Sequence[tuple[GSScheme, Placement]],
    d: int,
    placement: Placement = ORIGIN,
    dedupe: bool = True,
) -> LinearConditionSystem:
    """Linear conditions imposed on degree-d curves by one or several schemes."""
    if isinstance(schemes, GSScheme):
        schemes = [(schemes, placement)]
    rows: list = []
    groups = []
    seen = set()
    for s_idx, (X, P) in enumerate(schemes):
        P = (mpq(P[0]), mpq(P[1]))
        for j, (b, alpha) in enumerate(zip(X.branches, branch_bounds(X))):
            groups.append((s_idx, j, alpha))
            for r in _order_rows(b.x, b.y, d, alpha, P):
                if not any(r):
                    continue
                if dedupe:
                    lead = next(c for c in r if c)
                    key = tuple(c / lead for c in r)
                    if key in seen:
                        continue
                    seen.add(key)
                rows.append(r)
    return LinearConditionSystem(d, ambient(d), rows, groups)


def _normalise(schemes, placement) -> list:
    if isinstance(schemes, GSScheme):
        return [(schemes, placement)]
    return list(schemes)


def h0_h1(schemes: GSScheme | Sequence[tuple[GSScheme, Placement]], d: int, placement: Placement = ORIGIN) -> dict:
    """h0 and h1 of the ideal sheaf twisted by d; schemes sit at distinct points."""
    items = _normalise(schemes, placement)
    degree = sum(X.deg for X, _ in items)
    if d < 0:
        return {"h0": 0, "h1": degree, "rank": 0, "rows": 0, "ambient": 0, "deg": degree}
    sys_ = conditions_of(items, d)
    rk = sys_.rank
    return {
        "h0": sys_.ambient - rk,
        "h1": degree - rk,
        "rank": rk,
        "rows": len(sys_.rows),
        "ambient": sys_.ambient,
        "deg": degree,
    }


def generic_placements(n: int, seed: int = 0) -> list[Placement]:
    """n rational points of the affine plane, no three collinear."""
    rng = random.Random(seed)
    pts: list[Placement] = []
    while len(pts) < n:
        p = (mpq(rng.randint(-40, 40), rng.randint(1, 9)), mpq(rng.randint(-40, 40), rng.randint(1, 9)))
        if p in pts:
            continue
        ok = True
        for a in range(len(pts)):
            for b in range(a + 1, len(pts)):
                (x1, y1), (x2, y2) = pts[a], pts[b]
                if (x2 - x1) * (p[1] - y1) == (y2 - y1) * (p[0] - x1):
                    ok = False
        if ok:
            pts.append(p)
    return pts


def exact_sequence_check(X: GSScheme, L: str = "y", d: int = 1, seed: int = 0) -> dict:
    """Numbers around the residual sequence 0 -> J_{X:L}(d-1) -> J_X(d) -> J_{X∩L/L}(d) -> 0.

    ``L`` is the coordinate line through the centre, taken globally.
    """
    line_branch(L)
    R = reduce(X, L, seed=seed)
    n = intersect_line(X, L).degree
    top = h0_h1(X, d)
    red = h0_h1(R, d - 1)
    h0_line = max(0, d + 1 - n)
    h1_line = max(0, n - d - 1)
    implication_applies = red["h1"] == 0 and h1_line == 0
    lower_ok = red["h0"] <= top["h0"]
    upper_ok = top["h0"] <= red["h0"] + h0_line
    equality = top["h0"] == red["h0"] + h0_line
    return {
        "d": d,
        "deg_X": X.deg,
        "deg_X_cap_L": n,
        "deg_X_colon_L": R.deg,
        "h0_X": top["h0"],
        "h1_X": top["h1"],
        "h0_reduction": red["h0"],
        "h1_reduction": red["h1"],
        "h0_line": h0_line,
        "h1_line": h1_line,
        "implication_applies": implication_applies,
        "implication_holds": (not implication_applies) or top["h1"] == 0,
        "sandwich_holds": lower_ok and upper_ok,
        "equality": equality,
        "equality_expected": red["h1"] == 0,
        "ok": lower_ok and upper_ok and ((not implication_applies) or top["h1"] == 0) and (red["h1"] != 0 or equality),
    }


# -- membership and realization ------------------------------------------------------


def branch_order(f: A.BiPoly, X: GSScheme, j: int) -> Optional[int]:
    """(f, Q_j): order in t of f along the j-th branch; None when f contains it."""
    b = X.branches[j]
    alpha = max(branch_bounds(X)[j] + 1, 1)
    cap = alpha + 1
    while True:
        val = A.bi_eval_param(f, list(b.x), list(b.y), cap)
        o = A.order(val)
        if o is not None:
            return o
        if cap > 8 * alpha + 64:
            exact = A.bi_eval_param(f, list(b.x), list(b.y))
            o = A.order(exact)
            return o
        cap *= 2


def in_ideal(f: A.BiPoly, X: GSScheme) -> bool:
    """Membership in J_X through the branch orders."""
    for j, alpha in enumerate(branch_bounds(X)):
        o = branch_order(f, X, j)
        if o is not None and o < alpha:
            return False
    return True


def in_ideal_by_blowup(f: A.BiPoly, X: GSScheme) -> bool:
    """Membership in J_X through the total transforms at the points of T*."""
    for q, mhat in X.total_mults.items():
        o = total_transform_order(f, q)
        if o is not None and o < mhat:
            return False
    return True


def multiplicity(f: A.BiPoly) -> Optional[int]:
    return A.bi_order(A.bi_trim(f))


def verify_realization(f: A.BiPoly | Mapping, Y: GSScheme) -> dict:
    """Check that f has multiplicity mt Y and meets each branch beyond its bound."""
    f = A.bi_trim({k: mpq(v) for k, v in dict(f).items()})
    bounds = branch_bounds(Y)
    orders = [branch_order(f, Y, j) for j in range(Y.r)]
    mt_ok = multiplicity(f) == Y.mt if Y.r else multiplicity(f) in (None, 0, 1)
    strict_ok = all(o is None or o > a for o, a in zip(orders, bounds))
    return {
        "holds": bool(mt_ok and strict_ok),
        "mt_f": multiplicity(f),
        "mt_Y": Y.mt,
        "orders": ["inf" if o is None else o for o in orders],
        "bounds": bounds,
        "member": in_ideal_by_blowup(f, Y),
    }


# -- Newton diagrams ---------------------------------------------------------------------


@dataclass(frozen=True)
class NewtonDiagram:
    vertices: tuple  # lattice points, from the y-axis side to the x-axis side
    points: tuple  # every lattice point on the compact edges
    essential: tuple

    def to_json(self) -> dict:
        return {
            "vertices": [list(v) for v in self.vertices],
            "points": [list(p) for p in self.points],
            "essential": [list(p) for p in self.essential],
        }


def _lower_hull(pts: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Vertices of the compact part of the Newton polygon, ordered by increasing i."""
    # minimal j for each i, then lower convex hull towards both axes
    best: dict = {}
    for i, j in pts:
        if i not in best or j < best[i]:
            best[i] = j
    cand = sorted(best.items())
    hull: list = []
    for p in cand:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    # keep the part with strictly decreasing j (the compact edges)
    out = [hull[0]]
    for p in hull[1:]:
        if p[1] < out[-1][1]:
            out.append(p)
        else:
            break
    return out


def essential_newton_part(f: A.BiPoly | Mapping) -> NewtonDiagram:
    support = [k for k, v in dict(f).items() if v != 0]
    if not support:
        return NewtonDiagram((), (), ())
    verts = _lower_hull([(int(i), int(j)) for i, j in support])
    points: list = []
    edges = list(zip(verts, verts[1:]))
    if not edges:
        points = [verts[0]]
    for (i1, j1), (i2, j2) in edges:
        di, dj = i2 - i1, j2 - j1
        g = math.gcd(abs(di), abs(dj))
        for s in range(g + 1):
            p = (i1 + s * di // g, j1 + s * dj // g)
            if p not in points:
                points.append(p)
    ess = []
    for p in points:
        i, j = p
        if i > 0 and j > 0:
            ess.append(p)
        elif j == 0:
            # excluded when the edge ending here starts at height one
            if not any(e[1] == p and e[0][1] == 1 for e in edges):
                ess.append(p)
        elif i == 0:
            if not any(e[0] == p and e[1][0] == 1 for e in edges):
                ess.append(p)
    return NewtonDiagram(tuple(verts), tuple(points), tuple(ess))


# -- generic members ----------------------------------------------------------------------


def null_space_basis(rows: Sequence[Sequence[mpq]], ncols: int) -> list[list[mpq]]:
    """Basis of {v : row . v = 0 for all rows} by exact reduced row echelon form."""
    m = [list(map(mpq, r)) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [mpq(0)] * ncols
        v[fc] = mpq(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def ideal_basis(X: GSScheme, d: int) -> list[A.BiPoly]:
    """A basis of the degree <= d part of J_X at the origin."""
    sys_ = conditions_of(X, d)
    mons = monomials(d)
    return [A.bi_trim({mons[i]: c for i, c in enumerate(v)}) for v in null_space_basis(sys_.rows, sys_.ambient)]


def generic_member(X: GSScheme, d: int, seed: int = 0) -> A.BiPoly:
    rng = random.Random(seed)
    out: A.BiPoly = {}
    for g in ideal_basis(X, d):
        # nonzero, so that no basis element silently drops out
        c = mpq(rng.choice((-1, 1)) * rng.randint(1, 50), rng.randint(1, 7))
        out = A.bi_add(out, {k: v * c for k, v in g.items()})
    return out
