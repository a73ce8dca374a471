"""Degree bounds for curves with prescribed singularities.

All verdicts are exact.  Floors of quadratic irrationals go through
:meth:`QuadSurd.floor` and :meth:`QuadSurd.floor_sqrt`, which reduce to
integer comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from gmpy2 import mpq

from .constants import ALPHA0, BETA, BETA0
from .errors import InputError, NotASingularityScheme
from .qsurd import SQRT2, QuadSurd
from .scheme import GSScheme

Number = Union[int, mpq, QuadSurd]


def _fmt(x: Number) -> str:
    if isinstance(x, QuadSurd):
        return x.to_str() if x.b != 0 else str(x.a)
    return str(x)


def _entry(holds: bool | None, lhs: Number, rhs: Number, rel: str, **extra) -> dict:
    out = {"holds": holds, "lhs": _fmt(lhs), "rhs": _fmt(rhs), "rel": rel}
    if isinstance(lhs, QuadSurd) or isinstance(rhs, QuadSurd):
        out["lhs_decimal"] = _dec(lhs)
        out["rhs_decimal"] = _dec(rhs)
    out.update(extra)
    return out


def _dec(x: Number) -> str:
    if isinstance(x, QuadSurd):
        return x.decimal(6)
    return QuadSurd(mpq(x)).decimal(6)


@dataclass
class BoundReport:
    invariants: dict
    sigma: int | None
    arm: str | None
    checks: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"invariants": self.invariants, "sigma": self.sigma, "sigma_arm": self.arm, "mu": self.invariants.get("mu"), "checks": self.checks}


# -- sigma ---------------------------------------------------------------------------


def sigma_arm(X: GSScheme) -> str:
    if X.is_ordinary:
        return "ordinary"
    if X.in_GS1:
        return "gs1"
    return "general"


def sigma(X: GSScheme) -> int:
    """Upper bound for the minimal degree of an affine curve of the given type."""
    if not X.in_S or X.is_empty:
        raise NotASingularityScheme("sigma needs the scheme of a singularity")
    arm = sigma_arm(X)
    N = X.deg + X.mt + 1
    if arm == "ordinary":
        return (SQRT2 * X.mt).floor() + 1
    if arm == "gs1":
        # floor((1 + sqrt 2) sqrt N) = floor(sqrt((3 + 2 sqrt 2) N))
        return ((3 + 2 * SQRT2) * N).floor_sqrt() + X.mt + 3
    return (N * (ALPHA0 + 8)).floor_sqrt() + X.mt + X.mts + 3


# -- type lists ---------------------------------------------------------------------


def _mu_of(t) -> int:
    if isinstance(t, GSScheme):
        return t.mu
    if isinstance(t, int):
        return t
    if isinstance(t, dict) and "mu" in t:
        return int(t["mu"])
    raise InputError(f"cannot read a Milnor number from {t!r}")


def _sigma_of(t) -> int:
    if isinstance(t, GSScheme):
        return sigma(t)
    if isinstance(t, dict) and "sigma" in t:
        return int(t["sigma"])
    if isinstance(t, int):
        return t
    raise InputError(f"cannot read sigma from {t!r}")


def check_theorem1(types: Sequence, d: int) -> dict:
    """Sum of Milnor numbers against d**2 / 392."""
    total = sum(_mu_of(t) for t in types)
    rhs = mpq(d * d, 392)
    return _entry(total <= rhs, total, rhs, "<=")


def min_degree_theorem1(types: Sequence) -> int:
    total = sum(_mu_of(t) for t in types)
    return max(1, math.isqrt(392 * total - 1) + 1) if total > 0 else 1


def check_theorem2(X: GSScheme) -> dict:
    """sigma(X) against 14 sqrt(mu); the bound itself is d2 = ceil(14 sqrt(mu))."""
    mu = X.mu
    s = sigma(X)
    r = math.isqrt(196 * mu)
    d2 = r if r * r == 196 * mu else r + 1
    applies = mu >= 2
    holds = s * s <= 196 * mu if applies else None
    return {
        "holds": holds,
        "lhs": str(s),
        "rhs": f"14*sqrt({mu})",
        "rel": "<=",
        "rhs_decimal": f"{14 * math.sqrt(mu):.6f}",
        "d2": d2,
        "applies": applies,
    }


def check_prop58(X: GSScheme) -> dict:
    mu = X.mu
    s = sigma(X)
    lhs = (s + 1) * (s + 2)
    out = _entry(lhs <= 196 * mu, lhs, 196 * mu, "<=", applies=mu >= 2)
    if X.is_ordinary:
        out["ordinary"] = _entry(lhs <= 30 * mu, lhs, 30 * mu, "<=")
    return out


def lemma55_rhs(d: int) -> mpq:
    return mpq(d * d + 6 * d - 1, 4) - d // 2


def check_lemma55(types: Sequence, d: int) -> dict:
    lhs = sum(mpq((s + 1) * (s + 2), 2) for s in (_sigma_of(t) for t in types))
    rhs = lemma55_rhs(d)
    return _entry(lhs < rhs, lhs, rhs, "<")


def check_lemma53(mults: Iterable[int], d: int) -> dict:
    lhs = sum(mpq(m * (m + 1), 2) for m in mults)
    rhs = lemma55_rhs(d)
    return _entry(lhs < rhs, lhs, rhs, "<")


def _lemma411_arm(X: GSScheme, d: int, arm: str) -> dict:
    lhs = X.deg + X.mt + 1
    if arm == "gs1":
        base = d - X.mt - 2
        rhs = BETA * base * base
    else:
        base = d - X.mt - X.mts - 2
        rhs = BETA0 * base * base
    holds = base > 0 and lhs < rhs
    return _entry(holds, lhs, rhs, "<", base=base)


def check_lemma411(X: GSScheme, d: int) -> dict:
    arm = "gs1" if X.in_GS1 else "general"
    out = _lemma411_arm(X, d, arm)
    out["arm"] = arm
    if arm == "gs1":
        out["other_arm"] = _lemma411_arm(X, d, "general")
    if out["holds"]:
        out["note"] = "T-smooth equisingular family of irreducible curves of degree d exists"
    return out


def compare_prior_bound(types: Sequence, d: int) -> dict:
    mus = [_mu_of(t) for t in types]
    prior_lhs = sum((m + 4) * (m + 5) for m in mus)
    prior_rhs = mpq((d + 3) ** 2, 2)
    new = check_theorem1(types, d)
    prior_min = 1
    while mpq((prior_min + 3) ** 2, 2) < prior_lhs:
        prior_min += 1
    return {
        "prior": _entry(prior_lhs <= prior_rhs, prior_lhs, prior_rhs, "<="),
        "new": new,
        "prior_min_degree": prior_min,
        "new_min_degree": min_degree_theorem1(types),
    }


def bound_report(X: GSScheme, d: int | None = None) -> BoundReport:
    s = sigma(X)
    rep = BoundReport(X.invariants(), s, sigma_arm(X))
    rep.checks["theorem2"] = check_theorem2(X)
    rep.checks["prop58"] = check_prop58(X)
    rep.checks["lemma411_at_sigma"] = check_lemma411(X, s)
    if d is not None:
        rep.checks["theorem1"] = check_theorem1([X], d)
        rep.checks["lemma55"] = check_lemma55([X], d)
        rep.checks["lemma411"] = check_lemma411(X, d)
        rep.checks["prior_bound"] = compare_prior_bound([X], d)
    return rep
