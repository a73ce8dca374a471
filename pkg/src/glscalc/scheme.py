"""Generalized singularity schemes and the operations on them.

A scheme is stored concretely: a list of branches, each given by an exact
polynomial parametrization, together with the number of points of the
marked tree ``T*`` that lie on each branch.  Everything combinatorial
(multiplicities, proximity, the essential tree, intersection with a smooth
germ) is read off the blow-up chains of the branches, so every operation
returns another concrete scheme that the cohomology oracle can consume.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence, Union

from gmpy2 import mpq

from . import _arith as A
from .blowup import (
    BranchChain,
    Key,
    chain_of,
    curvette,
    exceptional_count,
    is_satellite,
    key_from_json,
    key_to_json,
    proximate_to,
)
from .cluster import (
    children_of,
    curvette_data,
    curvette_multiplicities,
    reduce_weights,
    sort_keys,
)
from .errors import (
    BranchNotSmooth,
    IndistinguishableAtTruncation,
    InputError,
    LNotSmooth,
    MNotAdmissible,
    NotASingularityScheme,
    PaperInvariantViolation,
    QIsCentre,
    QNotOnL,
    TruncationTooShort,
)
from .puiseux import BranchGerm, FractionalSeries, _conjugate_contact, contact_order

MAX_DEPTH = 2000


# -- branches ---------------------------------------------------------------


class Branch:
    """A branch at the origin given by ``t -> (x(t), y(t))``.

    When the parametrization has the Puiseux shape ``x = t**n`` (or
    ``y = t**n`` for a transposed branch) the matching :class:`BranchGerm`
    is available as ``germ``.
    """

    __slots__ = ("x", "y", "_germ", "__dict__")

    def __init__(self, x: Sequence, y: Sequence, germ: Optional[BranchGerm] = None) -> None:
        self.x = tuple(A.trim([mpq(c) for c in x]))
        self.y = tuple(A.trim([mpq(c) for c in y]))
        self._germ = germ

    @classmethod
    def from_germ(cls, germ: BranchGerm) -> "Branch":
        x, y = germ.parametrization()
        return cls(x, y, germ)

    @classmethod
    def from_terms(cls, den: int, terms, transposed: bool = False) -> "Branch":
        return cls.from_germ(BranchGerm.from_terms(den, terms, transposed))

    @cached_property
    def germ(self) -> Optional[BranchGerm]:
        if self._germ is not None:
            return self._germ
        for lead, other, transposed in ((self.x, self.y, False), (self.y, self.x, True)):
            n = len(lead) - 1
            if n < 1 or lead[n] != 1 or any(lead[:n]):
                continue
            terms = A.to_terms(other)
            g = n
            for k, _ in terms:
                g = math.gcd(g, k)
            if g != 1 or (terms and terms[0][0] < n):
                continue
            return BranchGerm(FractionalSeries.make(n, terms), transposed)
        return None

    @cached_property
    def chain(self) -> BranchChain:
        return chain_of(self.x, self.y)

    @property
    def multiplicity(self) -> int:
        return self.chain.mult(0)

    @property
    def smooth(self) -> bool:
        return self.multiplicity == 1

    def key(self, depth: int) -> Key:
        return self.chain.key(depth)

    def mult(self, depth: int) -> int:
        return self.chain.mult(depth)

    def swapped(self) -> "Branch":
        g = self.germ
        ng = None if g is None else BranchGerm(g.series, not g.transposed)
        return Branch(self.y, self.x, ng)

    def map(self, fx, fy) -> "Branch":
        """Image under a polynomial map given as functions of (x(t), y(t))."""
        return Branch(fx(list(self.x), list(self.y)), fy(list(self.x), list(self.y)))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Branch) and (self.x, self.y) == (other.x, other.y)

    def __hash__(self) -> int:
        return hash((self.x, self.y))

    def __repr__(self) -> str:
        g = self.germ
        if g is not None:
            return f"Branch(germ={g.to_json()})"
        return f"Branch(x={_terms_json(self.x)}, y={_terms_json(self.y)})"

    def param_json(self) -> dict:
        return {"x": _terms_json(self.x), "y": _terms_json(self.y)}


def _terms_json(p: Sequence[mpq]) -> list:
    return [[i, str(c)] for i, c in A.to_terms(p)]


def _terms_from_json(items: Iterable) -> list:
    return A.from_terms((int(e), mpq(str(c))) for e, c in items)


LINE_Y = Branch([0, 1], [])
LINE_X = Branch([], [0, 1])

LineLike = Union[str, Branch]


def line_branch(L: LineLike) -> Branch:
    """The smooth germ named by ``'y'`` (the line y = 0), ``'x'`` or a branch."""
    if isinstance(L, Branch):
        if not L.smooth:
            raise LNotSmooth("the germ L must be smooth")
        return L
    if L == "y":
        return LINE_Y
    if L == "x":
        return LINE_X
    raise InputError(f"unknown line {L!r}; expected 'y', 'x' or a smooth branch")


# -- tree records -------------------------------------------------------------


@dataclass(frozen=True)
class TreeNode:
    id: int
    key: Key
    parent: Optional[int]
    m: int
    mhat: int
    essential: bool
    satellite: bool
    branches: tuple
    on_line: bool

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "key": key_to_json(self.key),
            "parent": self.parent,
            "m": self.m,
            "mhat": self.mhat,
            "essential": self.essential,
            "kind": "satellite" if self.satellite else "free",
            "branches": list(self.branches),
            "on_L": self.on_line,
        }


@dataclass(frozen=True)
class ResolutionTree:
    nodes: tuple

    def to_json(self) -> list:
        return [n.to_json() for n in self.nodes]

    def multiplicity_string(self) -> str:
        """Multiplicities along the tree, e.g. ``4-3<(1-1;1)``."""
        kids: dict = {}
        for n in self.nodes:
            kids.setdefault(n.parent, []).append(n)

        def walk(n: TreeNode) -> str:
            ch = kids.get(n.id, [])
            if not ch:
                return str(n.m)
            if len(ch) == 1:
                return f"{n.m}-{walk(ch[0])}"
            return f"{n.m}<(" + ";".join(walk(c) for c in ch) + ")"

        roots = kids.get(None, [])
        return ";".join(walk(r) for r in roots)


@dataclass(frozen=True)
class SchemeOnLine:
    degree: int
    points: tuple  # tuple[(key, m_q)]

    def to_json(self) -> dict:
        return {"degree": self.degree, "points": [[key_to_json(k), m] for k, m in self.points]}


# -- schemes ------------------------------------------------------------------


def _shared_depth(a: BranchChain, b: BranchChain, limit: int) -> int:
    """Number of points common to the chains of two branches (capped)."""
    k = 0
    while k < limit and a.key(k + 1) == b.key(k + 1):
        k += 1
    return k + 1


class GSScheme:
    """The scheme ``X(C, T*)`` of a germ C at the origin and a tree ``T*``.

    ``depths[i]`` is the number of points of ``T*`` on the i-th branch.
    Depths are normalised on construction so that ``T*`` is the union of the
    corresponding initial segments of the branch chains.
    """

    def __init__(self, branches: Sequence[Branch], depths: Sequence[int], *, check: bool = True) -> None:
        if len(branches) != len(depths):
            raise InputError("one depth per branch is required")
        self.branches = tuple(branches)
        if len(set(self.branches)) != len(self.branches):
            raise IndistinguishableAtTruncation("a branch is listed twice")
        self._pair_depth = self._compute_shared()
        lam = [int(d) for d in depths]
        if any(d < 1 for d in lam):
            raise InputError("every branch carries at least the centre")
        changed = True
        while changed:
            changed = False
            for i in range(len(lam)):
                for j in range(len(lam)):
                    if i != j:
                        want = min(lam[j], self._pair_depth[i][j])
                        if want > lam[i]:
                            lam[i] = want
                            changed = True
        self.depths = tuple(lam)
        if check:
            ess = self.essential_depths
            for i, (d, e) in enumerate(zip(self.depths, ess)):
                if d < e:
                    raise NotASingularityScheme(
                        f"branch {i}: the tree has {d} points but the essential tree needs {e}"
                    )

    def _compute_shared(self) -> list:
        n = len(self.branches)
        out = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                s = _shared_depth(self.branches[i].chain, self.branches[j].chain, MAX_DEPTH)
                if s >= MAX_DEPTH:
                    raise IndistinguishableAtTruncation(f"branches {i} and {j} do not separate")
                out[i][j] = out[j][i] = s
        return out

    # -- construction helpers --------------------------------------------
    @classmethod
    def empty(cls) -> "GSScheme":
        return cls((), ())

    @classmethod
    def from_germs(cls, germs: Sequence[BranchGerm | Branch], extra_depth: Sequence[int] | int = 0) -> "GSScheme":
        return build_scheme(germs, extra_depth)

    def shared_depth(self, i: int, j: int) -> int:
        return self._pair_depth[i][j]

    # -- multiplicities ------------------------------------------------------
    def mult_at(self, key: Key) -> int:
        """Strict multiplicity of the germ at an arbitrary point."""
        n = len(key)
        return sum(b.mult(n) for b in self.branches if b.chain.passes_through(key))

    def branches_through(self, key: Key) -> tuple:
        return tuple(i for i, b in enumerate(self.branches) if b.chain.passes_through(key))

    def _essential_at(self, key: Key) -> bool:
        if not key:
            return self.mt >= 2
        through = self.branches_through(key)
        if not through:
            return False
        if len(through) > 1:
            return True
        b = self.branches[through[0]]
        n = len(key)
        if b.mult(n) != 1 or exceptional_count(key) != 1:
            return True
        return is_satellite(b.key(n + 1))

    @cached_property
    def essential_depths(self) -> tuple:
        """Points of the essential tree on each branch."""
        out = []
        n = len(self.branches)
        for i, b in enumerate(self.branches):
            alone = max([self._pair_depth[i][j] for j in range(n) if j != i] or [0])
            last = 0
            for k in range(MAX_DEPTH):
                if self._essential_at(b.key(k)):
                    last = k + 1
                elif k >= 1 and k - 1 >= alone and b.mult(k - 1) == 1:
                    # smooth and alone since the previous point, and transversal
                    # to the exceptional divisor here: nothing essential follows
                    break
            else:
                raise TruncationTooShort("essential tree did not terminate")
            out.append(last)
        return tuple(out)

    @cached_property
    def tstar(self) -> tuple:
        keys = set()
        for b, lam in zip(self.branches, self.depths):
            for k in range(lam):
                keys.add(b.key(k))
        return tuple(sort_keys(keys))

    @cached_property
    def tstar_C(self) -> tuple:
        keys = set()
        for b, lam in zip(self.branches, self.essential_depths):
            for k in range(lam):
                keys.add(b.key(k))
        return tuple(sort_keys(keys))

    @cached_property
    def weights(self) -> dict:
        return {k: self.mult_at(k) for k in self.tstar}

    @cached_property
    def total_mults(self) -> dict:
        out: dict = {}
        for q in self.tstar:
            out[q] = self.weights[q] + sum(out[p] for p in proximate_to(q) if p in out)
        return out

    # -- invariants -------------------------------------------------------------
    @property
    def r(self) -> int:
        return len(self.branches)

    @property
    def is_empty(self) -> bool:
        return not self.branches

    @cached_property
    def mt(self) -> int:
        return sum(b.multiplicity for b in self.branches)

    @cached_property
    def mts(self) -> int:
        return sum(b.multiplicity for b in self.branches if not b.smooth)

    @cached_property
    def deg(self) -> int:
        return sum(m * (m + 1) // 2 for m in self.weights.values())

    @cached_property
    def delta(self) -> int:
        return sum(m * (m - 1) // 2 for m in self.weights.values())

    @cached_property
    def mu(self) -> int:
        if self.is_empty:
            return 0
        return 2 * self.delta - self.r + 1

    @property
    def in_S(self) -> bool:
        return self.tstar == self.tstar_C

    @property
    def in_GS1(self) -> bool:
        return all(b.smooth for b in self.branches)

    @property
    def is_ordinary(self) -> bool:
        """T* is the centre alone, so the scheme is the fat point m**mt."""
        return self.tstar == ((),)

    def invariants(self) -> dict:
        return {
            "deg": self.deg,
            "mt": self.mt,
            "mts": self.mts,
            "delta": self.delta,
            "mu": self.mu,
            "r": self.r,
            "in_S": self.in_S,
            "in_GS1": self.in_GS1,
            "ordinary": self.is_ordinary,
        }

    # -- the line ---------------------------------------------------------------
    def line_points(self, L: LineLike = "y") -> tuple:
        Lb = line_branch(L)
        return tuple(k for k in self.tstar if Lb.chain.passes_through(k))

    def branch_points(self, i: int) -> tuple:
        b = self.branches[i]
        return tuple(b.key(k) for k in range(self.depths[i]))

    def tree(self, L: LineLike = "y") -> ResolutionTree:
        on_line = set(self.line_points(L))
        ess = set(self.tstar_C)
        ids = {k: i for i, k in enumerate(self.tstar)}
        nodes = []
        for k in self.tstar:
            nodes.append(
                TreeNode(
                    id=ids[k],
                    key=k,
                    parent=ids[k[:-1]] if k else None,
                    m=self.weights[k],
                    mhat=self.total_mults[k],
                    essential=k in ess,
                    satellite=is_satellite(k),
                    branches=tuple(i for i in self.branches_through(k) if len(k) < self.depths[i]),
                    on_line=k in on_line,
                )
            )
        return ResolutionTree(tuple(nodes))

    # -- equality and serialization ------------------------------------------------
    def _canon(self) -> tuple:
        return tuple(sorted(((b.x, b.y), d) for b, d in zip(self.branches, self.depths)))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GSScheme) and self._canon() == other._canon()

    def __hash__(self) -> int:
        return hash(self._canon())

    def __repr__(self) -> str:
        return f"GSScheme(deg={self.deg}, mt={self.mt}, r={self.r}, depths={self.depths})"

    def to_json(self) -> dict:
        base = self.essential_depths
        items = []
        for b, lam, e in zip(self.branches, self.depths, base):
            g = b.germ
            if g is not None:
                d = g.to_json()
                d["extra_depth"] = lam - max(e, 1)
            else:
                d = b.param_json()
                d["depth"] = lam
            items.append(d)
        return {"branches": items}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, obj: Mapping) -> "GSScheme":
        if not isinstance(obj, Mapping) or "branches" not in obj:
            raise InputError("scheme description needs a 'branches' list")
        branches: list[Branch] = []
        extra: list[Optional[int]] = []
        absolute: list[Optional[int]] = []
        for item in obj["branches"]:
            if "x" in item or "y" in item:
                branches.append(Branch(_terms_from_json(item.get("x", [])), _terms_from_json(item.get("y", []))))
            else:
                s = FractionalSeries.make(int(item["den"]), [(int(k), mpq(str(c))) for k, c in item["terms"]])
                if s.terms and s.terms[0][0] < s.denominator:
                    raise InputError("branch series must have order at least 1 (use 'transposed' for vertical branches)")
                branches.append(Branch.from_germ(BranchGerm(s, bool(item.get("transposed", False)))))
            absolute.append(int(item["depth"]) if "depth" in item else None)
            extra.append(int(item.get("extra_depth", 0)))
        if any(e < 0 for e in extra if e is not None):
            raise InputError("extra_depth must be non-negative")
        base = GSScheme(branches, [1] * len(branches), check=False).essential_depths if branches else ()
        depths = [a if a is not None else max(e0, 1) + e for a, e0, e in zip(absolute, base, extra)]
        return cls(branches, depths)

    @classmethod
    def loads(cls, text: str) -> "GSScheme":
        return cls.from_json(json.loads(text))


# -- construction -----------------------------------------------------------------


def _as_branch(g: BranchGerm | Branch) -> Branch:
    return g if isinstance(g, Branch) else Branch.from_germ(g)


def build_scheme(germs: Sequence[BranchGerm | Branch], extra_depth: Sequence[int] | int = 0) -> GSScheme:
    """Scheme of the germ with its essential tree plus ``extra_depth`` free points per branch."""
    branches = [_as_branch(g) for g in germs]
    if isinstance(extra_depth, int):
        extra_depth = [extra_depth] * len(branches)
    if len(extra_depth) != len(branches):
        raise InputError("one extra_depth per branch is required")
    if not branches:
        return GSScheme.empty()
    base = GSScheme(branches, [1] * len(branches), check=False).essential_depths
    return GSScheme(branches, [max(b, 1) + int(e) for b, e in zip(base, extra_depth)])


def degree_via_contacts(X: GSScheme) -> int | mpq:
    """Degree from the contacts of all Puiseux conjugates of all branches.

    The value is returned exactly as the contact formula gives it.  For
    germs whose branches have equal multiplicities along their shared
    points it is the integer ``X.deg``; when a branch reaches its maximal
    contact with a branch of a different multiplicity (``y(y**2 - x**3)``
    is the smallest case) the sum can be a proper fraction, and callers
    compare it against ``X.deg`` rather than trusting it.
    """
    if not X.in_S:
        raise NotASingularityScheme("the tree is larger than the essential tree")
    if X.is_empty:
        return 0
    germs = [b.germ for b in X.branches]
    if any(g is None for g in germs):
        raise InputError("every branch needs a Puiseux expansion")
    if all(g.transposed for g in germs):
        germs = [BranchGerm(g.series, False) for g in germs]
    elif any(g.transposed for g in germs):
        raise InputError("mixed transposed and plain branches")
    conj = []
    for g in germs:
        for c in g.conjugates():
            conj.append(c)
    m = len(conj)
    contact = [[mpq(0)] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            contact[i][j] = contact[j][i] = _conjugate_contact(conj[i], conj[j], None)
    s1 = sum(contact[i][j] for i in range(m) for j in range(i + 1, m))
    s2 = sum(max(contact[i][j] for j in range(m) if j != i) for i in range(m)) if m > 1 else mpq(0)
    total = s1 + s2 + mpq(m - X.r, 2)
    return int(total) if total.denominator == 1 else total


def intersect_line(X: GSScheme, L: LineLike = "y") -> SchemeOnLine:
    pts = X.line_points(L)
    return SchemeOnLine(sum(X.weights[k] for k in pts), tuple((k, X.weights[k]) for k in pts))


# -- reduction ------------------------------------------------------------------------


def realize_cluster(weights: Mapping[Key, int], rng: random.Random) -> GSScheme:
    """A concrete scheme (a union of curvettes) whose cluster is ``weights``."""
    if not weights:
        return GSScheme.empty()
    branches = []
    depths = []
    for p, c in curvette_data(weights, rng):
        x, y = curvette(p, c)
        b = Branch(x, y)
        tail = 3
        dirs = list(p) + [c] + [A.ZERO] * tail
        mults = curvette_multiplicities(p) + [1] * tail
        b.chain.prefill(dirs, mults)
        branches.append(b)
        depths.append(len(p) + 1)
    X = GSScheme(branches, depths)
    if X.weights != dict(weights):
        raise PaperInvariantViolation("curvette realization does not reproduce the cluster")
    return X


def reduce(X: GSScheme, L: LineLike = "y", seed: int = 0) -> GSScheme:
    """The residual scheme ``X : L``."""
    line_branch(L)
    if X.is_empty:
        return X
    w = reduce_weights(X.weights, X.line_points(L))
    Y = realize_cluster(w, random.Random(seed))
    line = intersect_line(X, L).degree
    if Y.deg + line != X.deg:
        raise PaperInvariantViolation(f"reduction bookkeeping: {Y.deg} + {line} != {X.deg}")
    for q, m in X.weights.items():
        mq = Y.weights.get(q, 0)
        if not (m - 1 <= mq <= m):
            raise PaperInvariantViolation(f"multiplicity at {key_to_json(q)} dropped from {m} to {mq}")
    return Y


# -- coordinate changes -------------------------------------------------------------------


def _swap(X: GSScheme) -> GSScheme:
    return GSScheme([b.swapped() for b in X.branches], X.depths, check=False)


def _shear(X: GSScheme, g: Sequence[mpq]) -> GSScheme:
    """Apply (x, y) -> (x, y - g(x)) to every branch."""
    out = []
    for b in X.branches:
        y = A.sub(list(b.y), A.compose(list(g), list(b.x)))
        out.append(Branch(b.x, y))
    return GSScheme(out, X.depths, check=False)


def _tilt(X: GSScheme, c: mpq) -> GSScheme:
    """Apply (x, y) -> (x + c y, y)."""
    return GSScheme([Branch(A.add(list(b.x), A.scale(list(b.y), c)), b.y) for b in X.branches], X.depths, check=False)


def _recheck(X: GSScheme, Y: GSScheme) -> GSScheme:
    """Rebuild with validation and confirm the tree shape is unchanged."""
    Z = GSScheme(Y.branches, Y.depths)
    if sorted(Z.weights.values()) != sorted(X.weights.values()) or Z.deg != X.deg:
        raise PaperInvariantViolation("coordinate change altered the scheme")
    return Z


def smooth_series_coeffs(b: Branch, n: int) -> list[mpq]:
    """Coefficients a_1..a_n of a smooth branch written as y = sum a_i x**i."""
    if not b.smooth:
        raise BranchNotSmooth("branch is not smooth")
    return [d for d in b.chain.directions(n)]


def specialize(
    X: GSScheme,
    Q: int,
    M: int | Sequence[Key],
    L: str = "y",
    seed: int = 0,
    *,
    allow_singular: bool = False,
) -> GSScheme:
    """Move the first points of branch ``Q`` onto ``L`` by a change of coordinates.

    ``M`` is the number of points (or the list of points) of ``T* ∩ Q`` that
    must end up on ``L``.  The result has ``T*₁ ∩ L = M`` and the same
    combinatorics as ``X``.  With ``allow_singular`` the branch may be
    singular, provided every point of ``M`` is free.
    """
    if L == "x":
        return _swap(specialize(_swap(X), Q, M, "y", seed, allow_singular=allow_singular))
    if L != "y":
        raise InputError("specialization is implemented for the coordinate lines")
    if not (0 <= Q < X.r):
        raise InputError(f"no branch {Q}")
    b = X.branches[Q]
    if not b.smooth and not allow_singular:
        raise BranchNotSmooth(f"branch {Q} is singular")
    onq = X.branch_points(Q)
    if isinstance(M, int):
        n = M
        Mkeys = onq[:n]
    else:
        Mkeys = tuple(sort_keys(M))
        n = len(Mkeys)
    if n < 1 or n > len(onq) or tuple(Mkeys) != onq[:n]:
        raise MNotAdmissible("M must be an initial segment of T* ∩ Q")
    online = X.line_points("y")
    if len(online) > n or any(k not in set(Mkeys) for k in online):
        raise MNotAdmissible("M must contain T* ∩ L")
    rng = random.Random(seed)
    Y = X
    if n >= 2 and b.key(1) == (None,):
        Y = _tilt(X, mpq(1))
        b = Y.branches[Q]
    dirs = b.chain.directions(n) if n >= 2 else []
    if any(d is None for d in dirs[: n - 1]):
        raise MNotAdmissible("branch leaves the chart before M ends")
    taken = {k for k in Y.tstar}
    for _ in range(50):
        beta = mpq(rng.choice([-1, 1]) * rng.randint(1, 97), rng.randint(1, 7))
        g = [A.ZERO] + list(dirs[: n - 1]) + [beta]
        Lkey = tuple(g[1:])
        if Lkey in taken:
            continue
        Z = _shear(Y, g)
        try:
            Z = _recheck(X, Z)
        except PaperInvariantViolation:
            continue
        if len(Z.line_points("y")) == n:
            return Z
    raise PaperInvariantViolation("specialization did not reach the requested points")


def split_exponent(X: GSScheme, L: str, q: Key) -> int:
    """The integer k separating branches through q from the rest."""
    if L == "x":
        return split_exponent(_swap(X), "y", tuple(0 if d is None else d for d in q))
    if not q:
        raise QNotOnL("q must differ from the centre")
    if q not in X.line_points(L):
        raise QNotOnL(f"{key_to_json(q)} is not on T* ∩ L")
    k = len(q)
    through = set(X.branches_through(q))
    germs = [b.germ for b in X.branches]
    if all(g is not None and not g.transposed for g in germs):
        for i in through:
            o = germs[i].series.order()
            if o is not None and o <= k:
                raise PaperInvariantViolation("a branch through q has a coefficient at exponent <= k")
        conj = [(i, c) for i, g in enumerate(germs) for c in g.conjugates()]
        for a in range(len(conj)):
            for bb in range(a + 1, len(conj)):
                i, ca = conj[a]
                j, cb = conj[bb]
                if i in through and j in through:
                    if not _conjugate_contact(ca, cb, None) > k:
                        raise PaperInvariantViolation("contact through q not above k")
                elif (i in through) != (j in through):
                    if not _conjugate_contact(ca, cb, None) <= k:
                        raise PaperInvariantViolation("contact across the split above k")
    return k


def extend(X: GSScheme, q: Key, L: str = "y") -> GSScheme:
    """Extension of X at a point q of T* ∩ L other than the centre."""
    if L == "x":
        qq = tuple(mpq(0) for _ in q) if all(d is None for d in q) else q
        return _swap(extend(_swap(X), qq, "y"))
    if not q:
        raise QIsCentre("cannot extend at the centre")
    if q not in X.line_points(L):
        raise QNotOnL(f"{key_to_json(q)} is not on T* ∩ L")
    through = set(X.branches_through(q))
    qbar_depth = len(q) - 1
    n = sum(X.branches[i].mult(qbar_depth) for i in through)
    branches = []
    depths = []
    for i, (b, lam) in enumerate(zip(X.branches, X.depths)):
        if i in through:
            y = A.mul(list(b.x), list(b.y))
            germ = None
            if b.germ is not None and not b.germ.transposed:
                germ = BranchGerm(b.germ.series.times_x(1), False)
            nb = Branch(b.x, y, germ)
            # blowing up (x, x*y) once in the direction 0 gives back (x, y)
            nb.chain.attach_tail([A.ZERO], [b.chain.mult(0)], b.chain)
            branches.append(nb)
            depths.append(lam + 1)
        else:
            branches.append(b)
            depths.append(lam)
    Y = GSScheme(branches, depths)
    if Y.deg - X.deg != n * (n + 1) // 2:
        raise PaperInvariantViolation(f"extension added {Y.deg - X.deg}, expected {n * (n + 1) // 2}")
    if Y.mt != X.mt or Y.mts != X.mts:
        raise PaperInvariantViolation("extension changed mt or mt_s")
    if len(Y.line_points(L)) != len(X.line_points(L)) + 1:
        raise PaperInvariantViolation("extension did not add one point on L")
    return Y


def extension_n(X: GSScheme, q: Key) -> int:
    """Multiplicity of the point inserted by extending at q (L = y)."""
    return sum(X.branches[i].mult(len(q) - 1) for i in X.branches_through(q))
