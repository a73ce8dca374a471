"""Seeded random corpora of singularity schemes.

Each instance is the scheme X(C, T*(C)) of a germ with at most
``max_branches`` branches, each of multiplicity at most ``max_mult``, given
by a Puiseux expansion in x.  Branches are sometimes made to share initial
terms so that the trees have real branching.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from gmpy2 import mpq

from .errors import GLSError
from .puiseux import BranchGerm
from .scheme import GSScheme, build_scheme


@dataclass(frozen=True)
class CorpusInstance:
    index: int
    seed: int
    scheme: GSScheme

    def to_json(self) -> dict:
        return {"index": self.index, "seed": self.seed, "scheme": self.scheme.to_json(), **self.scheme.invariants()}


def _coeff(rng: random.Random) -> mpq:
    return mpq(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 1, 2]))


def _branch_terms(rng: random.Random, n: int) -> dict:
    terms: dict[int, mpq] = {}
    if rng.random() < 0.4:
        terms[n] = _coeff(rng)
    if n == 1:
        k = 1
        for _ in range(rng.randint(1, 2)):
            k += rng.randint(1, 2)
            terms[k] = _coeff(rng)
        return terms
    e, k = n, n
    while e > 1:
        k += rng.randint(1, n)
        g = math.gcd(e, k)
        if g == e:
            if rng.random() < 0.3:
                terms[k] = _coeff(rng)
            continue
        terms[k] = _coeff(rng)
        e = g
    return terms


def random_germs(rng: random.Random, max_branches: int = 4, max_mult: int = 6) -> list[BranchGerm]:
    r = rng.randint(1, max_branches)
    germs: list[BranchGerm] = []
    for _ in range(r):
        n = min(rng.choice([1, 1, 1, 1, 1, 2, 2, 2, 3, 3, 4, 5, 6]), max_mult)
        terms = _branch_terms(rng, n)
        if germs and rng.random() < 0.35:
            # share the leading part of an earlier branch of the same multiplicity
            same = [g for g in germs if g.series.denominator == n]
            if same:
                base = dict((int(k), mpq(c)) for k, c in rng.choice(same).series.terms)
                cut = rng.randint(n, max(base) if base else n)
                shared = {k: c for k, c in base.items() if k <= cut}
                tail = {k + cut: c for k, c in terms.items() if k + cut > cut}
                terms = {**shared, **tail}
        germs.append(BranchGerm.from_terms(n, sorted(terms.items())))
    return germs


def random_scheme(rng: random.Random, max_branches: int = 4, max_mult: int = 6, tries: int = 50) -> GSScheme:
    for _ in range(tries):
        germs = random_germs(rng, max_branches, max_mult)
        try:
            X = build_scheme(germs)
        except (GLSError, ValueError):
            continue
        if X.in_S and not X.is_empty:
            return X
    raise RuntimeError("could not draw a valid scheme")


def generate(count: int = 200, seed: int = 0, max_branches: int = 4, max_mult: int = 6) -> list[CorpusInstance]:
    out = []
    for i in range(count):
        s = seed * 100003 + i
        X = random_scheme(random.Random(s), max_branches, max_mult)
        out.append(CorpusInstance(i, s, X))
    return out
