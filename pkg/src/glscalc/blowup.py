"""Infinitely near points computed by explicit blow-ups of parametrizations.

A point infinitely near to the origin is identified by the list of tangent
directions taken at each blow-up.  A direction is a rational slope ``c``
(the chart ``x = u, y = u(v + c)``) or ``None`` for the vertical direction
(the chart ``x = uv, y = v``).  The key of a point is the tuple of directions
leading to it, so the origin is ``()``.

Branches are given by polynomial parametrizations ``t -> (x(t), y(t))`` over
the rationals.  Blowing up divides one coordinate by the other; the quotient
is kept exact while the divisor is a monomial and otherwise as a power series
modulo ``t**prec`` with adaptive precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from gmpy2 import mpq

from . import _arith as A

Direction = Optional[mpq]
Key = tuple  # tuple[Direction, ...]


class _NeedPrecision(Exception):
    pass


@dataclass(frozen=True)
class _Series:
    coeffs: tuple
    prec: Optional[int]  # None means the polynomial is exact

    def ord(self) -> Optional[int]:
        o = A.order(self.coeffs, self.prec)
        if o is None and self.prec is not None:
            raise _NeedPrecision
        return o


def _divide(num: _Series, den: _Series, k: int, cap: int) -> _Series:
    """num / den where ord(den) = k <= ord(num)."""
    nd = list(num.coeffs[k:])
    nprec = None if num.prec is None else num.prec - k
    dc = den.coeffs
    nonzero = [i for i in range(len(dc)) if dc[i] != 0]
    if den.prec is None and len(nonzero) == 1:
        inv = A.ONE / dc[k]
        return _Series(tuple(A.trim([c * inv for c in nd])), nprec)
    dprec = cap if den.prec is None else den.prec - k
    prec = dprec if nprec is None else min(nprec, dprec)
    if prec <= 0:
        raise _NeedPrecision
    unit_inv = A.inverse_unit(list(dc[k:k + prec]), prec)
    return _Series(tuple(A.mul(nd[:prec], unit_inv, prec)), prec)


def _translate(s: _Series, c: mpq) -> _Series:
    if c == 0:
        return s
    co = list(s.coeffs) or [A.ZERO]
    co[0] -= c
    return _Series(tuple(A.trim(co)), s.prec)


class BranchChain:
    """Lazily computed sequence of (direction, multiplicity) along a branch."""

    def __init__(self, x: Sequence[mpq], y: Sequence[mpq]) -> None:
        self.x = tuple(A.trim([mpq(c) for c in x]))
        self.y = tuple(A.trim([mpq(c) for c in y]))
        if not self.x and not self.y:
            raise ValueError("constant parametrization")
        if (self.x and self.x[0] != 0) or (self.y and self.y[0] != 0):
            raise ValueError("parametrization does not pass through the origin")
        self._dirs: list[Direction] = []
        self._mults: list[int] = []
        self._cap = 48
        self._state: Optional[tuple[_Series, _Series]] = None
        self._tail: Optional["BranchChain"] = None
        self._head = 0

    def attach_tail(self, head_dirs: Sequence[Direction], head_mults: Sequence[int], tail: "BranchChain") -> None:
        """Declare that the chain is ``head`` followed by the chain ``tail``.

        Used when the parametrization is known to blow up, after
        ``len(head)`` steps, to the parametrization of ``tail``.
        """
        if self._dirs and len(self._dirs) > len(head_dirs):
            return
        self.prefill(head_dirs, head_mults)
        self._tail = tail
        self._head = len(head_dirs)

    def _advance(self, n: int) -> None:
        if self._tail is not None and len(self._dirs) < n:
            t = self._tail
            t._advance(n - self._head)
            self._dirs[self._head:] = t._dirs
            self._mults[self._head:] = t._mults
            return
        while len(self._dirs) < n:
            try:
                self._run(n)
            except _NeedPrecision:
                self._cap *= 2
                self._state = None
                if self._cap > 1 << 14:
                    raise RuntimeError("precision exhausted while blowing up") from None

    def _run(self, n: int) -> None:
        if self._state is None:
            state = (_Series(self.x, None), _Series(self.y, None))
            done = 0
        else:
            state = self._state
            done = len(self._dirs)
        X, Y = state
        i = 0
        while done + i < n:
            a, b = X.ord(), Y.ord()
            if a is not None and (b is None or a <= b):
                e = a
                c = A.ZERO
                if b == a:
                    c = Y.coeffs[b] / X.coeffs[a]
                Y = _translate(_divide(Y, X, a, self._cap), c) if b is not None else Y
                d: Direction = c
            else:
                assert b is not None
                e = b
                X = _divide(X, Y, b, self._cap) if a is not None else X
                d = None
            idx = done + i
            if idx < len(self._dirs):
                assert self._dirs[idx] == d and self._mults[idx] == e
            else:
                self._dirs.append(d)
                self._mults.append(e)
            i += 1
        self._state = (X, Y)

    def prefill(self, directions: Sequence[Direction], mults: Sequence[int]) -> None:
        """Record a prefix of the chain already known by construction.

        Any later recomputation from the parametrization is checked against
        the recorded prefix.
        """
        if len(directions) != len(mults):
            raise ValueError("directions and multiplicities differ in length")
        n = len(self._dirs)
        for i in range(min(n, len(directions))):
            if self._dirs[i] != directions[i] or self._mults[i] != mults[i]:
                raise ValueError("prefill disagrees with the computed chain")
        if len(directions) > n:
            self._dirs.extend(directions[n:])
            self._mults.extend(mults[n:])
            self._state = None

    def passes_through(self, key: Key) -> bool:
        """Whether the chain runs through ``key``, computing no further than needed."""
        n = len(key)
        m = min(n, len(self._dirs))
        if tuple(self._dirs[:m]) != tuple(key[:m]):
            return False
        for t in range(m + 1, n + 1):
            self._advance(t)
            if self._dirs[t - 1] != key[t - 1]:
                return False
        return True

    def key(self, depth: int) -> Key:
        """Key of the point of the chain at ``depth`` (0 is the origin)."""
        self._advance(depth)
        return tuple(self._dirs[:depth])

    def mult(self, depth: int) -> int:
        """Multiplicity of the strict transform at the point at ``depth``."""
        self._advance(depth + 1)
        return self._mults[depth]

    def mults(self, n: int) -> list[int]:
        self._advance(n)
        return self._mults[:n]

    def directions(self, n: int) -> list[Direction]:
        self._advance(n)
        return self._dirs[:n]


@lru_cache(maxsize=None)
def _chain_for(x: tuple, y: tuple) -> BranchChain:
    return BranchChain(x, y)


def chain_of(x: Sequence[mpq], y: Sequence[mpq]) -> BranchChain:
    """Shared (memoised) chain object for a parametrization."""
    return _chain_for(tuple(A.trim([mpq(c) for c in x])), tuple(A.trim([mpq(c) for c in y])))


# -- geometry of keys ------------------------------------------------------


@lru_cache(maxsize=None)
def _axes(key: Key) -> tuple[Optional[Key], Optional[Key]]:
    """Exceptional components through the point, as the points that created them.

    Returns (ex, ey): the component lying on the local axis ``u = 0`` and the
    one lying on ``v = 0``.
    """
    if not key:
        return None, None
    parent = key[:-1]
    ex, ey = _axes(parent)
    d = key[-1]
    if d is None:
        return ex, parent
    return parent, (ey if d == 0 else None)


@lru_cache(maxsize=None)
def proximate_to(key: Key) -> tuple:
    """Points to which ``key`` is proximate (its parent first)."""
    if not key:
        return ()
    parent = key[:-1]
    ex, ey = _axes(parent)
    d = key[-1]
    other = ex if d is None else (ey if d == 0 else None)
    return (parent,) if other is None else (parent, other)


def is_satellite(key: Key) -> bool:
    return len(proximate_to(key)) == 2


def exceptional_count(key: Key) -> int:
    ex, ey = _axes(key)
    return (ex is not None) + (ey is not None)


@lru_cache(maxsize=None)
def chart_map(key: Key) -> tuple:
    """Polynomials (X(u, v), Y(u, v)) expressing x, y in the chart at ``key``.

    Returned as tuples of sorted (exponent, coefficient) items for hashing.
    """
    if not key:
        return (((1, 0), A.ONE),), (((0, 1), A.ONE),)
    X, Y = chart_map(key[:-1])
    d = key[-1]
    if d is None:
        phi_x: A.BiPoly = {(1, 1): A.ONE}
        phi_y: A.BiPoly = {(0, 1): A.ONE}
    else:
        phi_x = {(1, 0): A.ONE}
        phi_y = A.bi_trim({(1, 1): A.ONE, (1, 0): mpq(d)})
    nx = A.bi_substitute(dict(X), phi_x, phi_y)
    ny = A.bi_substitute(dict(Y), phi_x, phi_y)
    return tuple(sorted(nx.items())), tuple(sorted(ny.items()))


def total_transform_order(f: A.BiPoly, key: Key) -> Optional[int]:
    """Multiplicity at ``key`` of the total transform of ``f``."""
    X, Y = chart_map(key)
    return A.bi_order(A.bi_substitute(f, dict(X), dict(Y)))


def curvette(key: Key, slope: mpq) -> tuple[A.Poly, A.Poly]:
    """Parametrization of a smooth germ through ``key`` with the given tangent.

    The germ is the image of the line ``v = slope * u`` in the chart at the
    point; its next infinitely near point has direction ``slope``.
    """
    X, Y = chart_map(key)
    u = [A.ZERO, A.ONE]
    v = [A.ZERO, mpq(slope)]
    return A.bi_eval_param(dict(X), u, v), A.bi_eval_param(dict(Y), u, v)


def key_to_json(key: Key) -> list[str]:
    return ["inf" if d is None else str(d) for d in key]


def key_from_json(items: Sequence[str]) -> Key:
    return tuple(None if s == "inf" else mpq(s) for s in items)
