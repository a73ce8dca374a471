"""Weighted clusters of infinitely near points.

A weighted cluster is a map ``key -> weight`` on a finite set of points
closed under taking predecessors.  The scheme of a germ ``C`` with tree
``T*`` is the cluster of strict multiplicities ``m_q`` on ``T*``; its ideal is
the set of functions whose value at every point is at least the cluster's
value there.  This module reduces clusters by a smooth germ and turns
consistent clusters back into germs made of curvettes.
"""

from __future__ import annotations

import random
from typing import Iterable, Mapping

from gmpy2 import mpq

from .blowup import Key, proximate_to

Weights = dict  # dict[Key, int]


def children_of(keys: Iterable[Key]) -> dict:
    ks = set(keys)
    out: dict = {k: [] for k in ks}
    for k in sorted(ks, key=_order):
        if k:
            out.setdefault(k[:-1], []).append(k)
    return out


def _order(k: Key) -> tuple:
    return (len(k), tuple((d is None, d if d is not None else 0) for d in k))


def sort_keys(keys: Iterable[Key]) -> list[Key]:
    """Parents before children, deterministic order among siblings."""
    return sorted(keys, key=_order)


def proximate_points(keys: Iterable[Key]) -> dict:
    """For each point p, the points of the set that are proximate to p."""
    ks = set(keys)
    out: dict = {k: [] for k in ks}
    for q in ks:
        for p in proximate_to(q):
            if p in out:
                out[p].append(q)
    return out


def excess(weights: Mapping[Key, int]) -> dict:
    """rho_p = nu_p - sum of nu_q over points q proximate to p."""
    prox = proximate_points(weights)
    return {p: weights[p] - sum(weights[q] for q in prox[p]) for p in weights}


def is_consistent(weights: Mapping[Key, int]) -> bool:
    return all(v >= 0 for v in excess(weights).values()) and all(v > 0 for v in weights.values())


def values(weights: Mapping[Key, int]) -> dict:
    """Cluster values v_q = nu_q + sum of v_p over the points q is proximate to."""
    out: dict = {}
    for q in sort_keys(weights):
        out[q] = weights[q] + sum(out[p] for p in proximate_to(q) if p in out)
    return out


def _subtree(root: Key, children: Mapping[Key, list]) -> list[Key]:
    out = [root]
    stack = [root]
    while stack:
        k = stack.pop()
        for c in children.get(k, ()):
            out.append(c)
            stack.append(c)
    return out


def reduce_weights(weights: Mapping[Key, int], on_line: Iterable[Key]) -> Weights:
    """Cluster of ``X : L`` by the blow-up recursion.

    At a point z on L with weight m, the first neighbourhood is reduced by
    the strict transform of L.  If the reduced cluster D puts total weight
    less than m on the points proximate to z, the weight at z drops to
    ``m - 1``; otherwise z keeps weight m and D is reduced once more, now by
    the exceptional divisor of z.
    """
    w = {k: v for k, v in weights.items() if v > 0}
    line = set(on_line)
    children = children_of(w)
    roots = [k for k in w if not k or k[:-1] not in w]
    return _reduce_forest(w, children, sort_keys(roots), line)


def _reduce_forest(w: Mapping[Key, int], children: Mapping[Key, list], roots: list[Key], line: set) -> Weights:
    out: Weights = {}
    for z in roots:
        if w.get(z, 0) <= 0:
            continue
        if z not in line:
            for k in _subtree(z, children):
                if w.get(k, 0) > 0:
                    out[k] = w[k]
            continue
        m = w[z]
        kids = [c for c in children.get(z, ()) if w.get(c, 0) > 0]
        d = _reduce_forest(w, children, kids, line)
        prox_z = [q for q in d if z in proximate_to(q)]
        if sum(d[q] for q in prox_z) < m:
            out[z] = m - 1
            out.update(d)
        else:
            sub_children = children_of(d)
            d_roots = sort_keys(k for k in d if k[:-1] == z)
            dbar = _reduce_forest(d, sub_children, d_roots, set(prox_z))
            out[z] = m
            out.update(dbar)
    return {k: v for k, v in out.items() if v > 0}


def unload(weights: Mapping[Key, int], subtract: Mapping[Key, int]) -> Weights:
    """Unloading of the virtual cluster ``weights - subtract``.

    While some point p has negative excess, move ``n`` units of weight onto p
    from the points proximate to it, with n the least integer making the
    excess at p non-negative.
    """
    nu = {k: weights[k] - subtract.get(k, 0) for k in weights}
    prox = proximate_points(nu)
    for _ in range(100000):
        bad = None
        for p in sort_keys(nu):
            rho = nu[p] - sum(nu[q] for q in prox[p])
            if rho < 0:
                bad = (p, rho)
                break
        if bad is None:
            break
        p, rho = bad
        n = -(rho // (len(prox[p]) + 1))  # ceil(-rho / (1 + #prox))
        nu[p] += n
        for q in prox[p]:
            nu[q] -= n
    else:
        raise RuntimeError("unloading did not terminate")
    return {k: v for k, v in nu.items() if v > 0}


def random_slope(rng: random.Random, avoid: Iterable) -> mpq:
    bad = set(avoid)
    while True:
        c = mpq(rng.choice([-1, 1]) * rng.randint(1, 29), rng.randint(1, 5))
        if c not in bad:
            return c


def curvette_data(weights: Mapping[Key, int], rng: random.Random) -> list[tuple[Key, mpq]]:
    """Points and tangent slopes of curvettes whose union realizes the cluster.

    A point with excess rho carries rho curvettes with pairwise distinct
    generic slopes avoiding the directions of its children in the cluster.
    """
    rho = excess(weights)
    children = children_of(weights)
    out: list[tuple[Key, mpq]] = []
    for p in sort_keys(weights):
        if rho[p] < 0:
            raise ValueError("cluster is not consistent")
        used = {c[-1] for c in children[p]} | {mpq(0)}
        for _ in range(rho[p]):
            c = random_slope(rng, used)
            used.add(c)
            out.append((p, c))
    return out


def curvette_multiplicities(key: Key) -> list[int]:
    """Multiplicities of a curvette through ``key`` at the points of its path."""
    path = [key[:i] for i in range(len(key) + 1)]
    e = {key: 1}
    for i in range(len(path) - 2, -1, -1):
        q = path[i]
        e[q] = sum(e[path[j]] for j in range(i + 1, len(path)) if q in proximate_to(path[j]))
    return [e[p] for p in path]
