"""Inductive h¹-vanishing certification with replayable traces.

The procedure works with the line L = {y = 0} through the centre.  At each
working degree d the current scheme X is either closed off (empty, or an
ordinary fat point with mt X < d), moved by a change of coordinates so that
one more point of some branch lands on L, or replaced by the residual
scheme X : L at degree d - 1.  For the general class a further move is
available: a block of extensions followed by reductions, run when the
end point of T* ∩ L carries only singular branches whose multiplicities
drop there.

Every decision and every inequality the induction relies on is written to
a :class:`Certificate`.  Replaying a certificate runs the same procedure on
the recorded input and compares each step with the recorded one.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from gmpy2 import mpq

from .blowup import is_satellite, key_to_json
from .cluster import random_slope
from .constants import ALPHA, ALPHA0, BETA, BETA0
from .errors import InputError, PaperInvariantViolation, Refusal, ReplayMismatch
from .qsurd import QuadSurd, decode_number, encode_number
from .scheme import GSScheme, _recheck, _shear, extend, extension_n, reduce, specialize

FORMAT_VERSION = 1


@dataclass(frozen=True)
class VanishingConstants:
    alpha: QuadSurd
    beta: QuadSurd

    @classmethod
    def for_class(cls, kind: str) -> "VanishingConstants":
        if kind == "gs1":
            return cls(ALPHA, BETA)
        if kind == "gs":
            return cls(ALPHA0, BETA0)
        raise InputError(f"unknown class {kind!r}; expected 'gs1' or 'gs'")

    @staticmethod
    def alpha0() -> QuadSurd:
        return ALPHA0

    @staticmethod
    def beta0() -> QuadSurd:
        return BETA0


# -- certificate container ---------------------------------------------------------


@dataclass
class Certificate:
    kind: str
    d: int
    mode: str
    seed: int
    scheme: GSScheme
    steps: list = field(default_factory=list)
    status: str = "running"
    reason: Optional[str] = None

    @property
    def success(self) -> bool:
        return self.status == "success"

    def header(self) -> dict:
        c = VanishingConstants.for_class(self.kind)
        return {
            "type": "header",
            "version": FORMAT_VERSION,
            "class": self.kind,
            "d": self.d,
            "mode": self.mode,
            "seed": self.seed,
            "alpha": encode_number(c.alpha),
            "beta": encode_number(c.beta),
            "scheme": self.scheme.to_json(),
        }

    def result(self) -> dict:
        return {"type": "result", "status": self.status, "reason": self.reason, "steps": len(self.steps)}

    def dumps(self) -> str:
        lines = [self.header()] + [dict(s, type="step") for s in self.steps] + [self.result()]
        return "\n".join(json.dumps(x, sort_keys=True, ensure_ascii=False) for x in lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "Certificate":
        try:
            rows = [json.loads(line) for line in text.splitlines() if line.strip()]
        except json.JSONDecodeError as exc:
            raise InputError(f"certificate is not line-delimited JSON: {exc}") from None
        if len(rows) < 2 or rows[0].get("type") != "header" or rows[-1].get("type") != "result":
            raise InputError("certificate needs a header line and a result line")
        h = rows[0]
        for k in ("class", "d", "mode", "seed", "scheme"):
            if k not in h:
                raise InputError(f"certificate header lacks {k!r}")
        steps = []
        for r in rows[1:-1]:
            if r.get("type") != "step":
                raise InputError("unexpected line in certificate body")
            r = dict(r)
            r.pop("type")
            steps.append(r)
        res = rows[-1]
        return cls(
            kind=h["class"],
            d=int(h["d"]),
            mode=h["mode"],
            seed=int(h["seed"]),
            scheme=GSScheme.from_json(h["scheme"]),
            steps=steps,
            status=res.get("status", "unknown"),
            reason=res.get("reason"),
        )

    def reduce_count(self) -> int:
        return sum(1 for s in self.steps if s["op"] == "reduce")


@dataclass
class Level:
    """A concrete scheme together with the degree at which it is handled."""

    scheme: GSScheme
    d: int
    label: str


@dataclass
class ReplayReport:
    terminal: GSScheme
    initial: GSScheme
    levels: list
    steps_checked: int
    checks_evaluated: int
    status: str


# -- the procedure -----------------------------------------------------------------


class _Stop(Exception):
    def __init__(self, reason: str) -> None:
        super().__init__(reason)
        self.reason = reason


def _snap(X: GSScheme) -> dict:
    pts = X.line_points("y")
    return {
        "deg": X.deg,
        "mt": X.mt,
        "mts": X.mts,
        "line_deg": sum(X.weights[k] for k in pts),
        "line_points": len(pts),
    }


def _line_deg(X: GSScheme) -> int:
    return sum(X.weights[k] for k in X.line_points("y"))


_RELS: dict[str, Callable[[Any, Any], bool]] = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    "==": lambda a, b: a == b,
    ">=": lambda a, b: a >= b,
    ">": lambda a, b: a > b,
}


def evaluate_check(c: dict) -> bool:
    """Re-evaluate a recorded inequality witness from its encoded sides."""
    lhs = decode_number(c["lhs"])
    rhs = decode_number(c["rhs"])
    return bool(_RELS[c["rel"]](lhs, rhs))


class _Engine:
    def __init__(
        self,
        X: GSScheme,
        d: int,
        kind: str,
        mode: str,
        seed: int,
        recorded: Optional[list] = None,
    ) -> None:
        self.kind = kind
        self.mode = mode
        self.seed = seed
        self.const = VanishingConstants.for_class(kind)
        self.X = X
        self.d = d
        self.steps: list = []
        self.recorded = recorded
        self.levels: list[Level] = []
        self.block = 0
        self._pending: list = []

    # -- bookkeeping ------------------------------------------------------------
    def _step_seed(self) -> int:
        return (self.seed * 1000003 + 7919 * (len(self.steps) + 1)) % (1 << 31)

    def check(self, name: str, lhs, rel: str, rhs) -> dict:
        ok = bool(_RELS[rel](lhs, rhs))
        rec = {"name": name, "lhs": encode_number(lhs), "rel": rel, "rhs": encode_number(rhs), "holds": ok}
        self._pending.append(rec)
        if not ok:
            msg = f"{name}: {_show(lhs)} {rel} {_show(rhs)} fails at d={self.d}"
            if self.mode == "strict":
                raise PaperInvariantViolation(msg, step=len(self.steps))
            raise _Stop(msg)
        return rec

    def emit(self, op: str, before: GSScheme, after: GSScheme, d_before: int, params: dict) -> None:
        step = {
            "step": len(self.steps),
            "op": op,
            "d": d_before,
            "before": _snap(before),
            "after": _snap(after),
            "params": params,
            "checks": self._pending,
        }
        self._pending = []
        step = json.loads(json.dumps(step, sort_keys=True))
        if self.recorded is not None:
            i = step["step"]
            if i >= len(self.recorded):
                raise ReplayMismatch(f"replay produced an extra {op} step", i)
            _compare(self.recorded[i], step, i)
        self.steps.append(step)

    def sides(self, X: GSScheme, d: int) -> tuple:
        """The level inequalities: degree bound and line bound at degree d."""
        a, b = self.const.alpha, self.const.beta
        corr = X.mts if self.kind == "gs" else 0
        return X.deg, b * (d - X.mt - corr) ** 2, _line_deg(X), d - a * X.deg / d

    # -- main loop ----------------------------------------------------------------
    def run(self) -> tuple[str, Optional[str]]:
        try:
            if not (self.X.is_empty or self.X.is_ordinary):
                self._reposition()
            while True:
                X, d = self.X, self.d
                if X.is_empty:
                    self.levels.append(Level(X, d, "empty"))
                    self.emit("empty_base", X, X, d, {})
                    return "success", None
                if X.is_ordinary:
                    self.check("ordinary_multiplicity", X.mt, "<", d)
                    self.levels.append(Level(X, d, "ordinary"))
                    self.emit("ordinary_base", X, X, d, {})
                    return "success", None
                if d <= 1:
                    self.check("nonempty_above_base", X.deg, "<", 1)
                self._level()
        except _Stop as s:
            return "failed", s.reason

    def _reposition(self) -> None:
        X, d = self.X, self.d
        if X.is_empty or d <= 0:
            return
        _, _, n, theta = self.sides(X, d)
        if n <= theta:
            return
        rng = random.Random(self._step_seed())
        firsts = {k[0] for k in X.tstar if k}
        c = random_slope(rng, firsts | {None})
        Y = _recheck(X, _shear(X, [mpq(0), c]))
        self.check("line_bound_after_shear", _line_deg(Y), "<=", theta)
        self.emit("reposition", X, Y, d, {"shear": str(c)})
        self.X = Y

    def _level(self) -> None:
        X, d = self.X, self.d
        _, _, n, theta = self.sides(X, d)
        if n == theta:
            return self._reduce("saturated")
        if self.kind == "gs" and not X.in_GS1:
            sit = self._situation_two(X, d)
            if sit is not None:
                q, mprime = sit
                tau = d - 2 * mprime - self.const.alpha * X.deg / (d - mprime)
                if n >= tau:
                    return self._reduce("singular_end_point")
                return self._extend_block(q, mprime, tau)
        B = X.line_points("y")
        Bset = set(B)
        s = len(B)
        equal = []
        longer = []
        for i in range(X.r):
            pts = X.branch_points(i)
            if set(pts) == Bset:
                equal.append(i)
            elif len(pts) > s and Bset <= set(pts):
                longer.append(i)
        if not longer:
            if not equal:
                raise PaperInvariantViolation("no branch runs through the end point of T* ∩ L")
            self.check("line_points_at_least_two", s, ">=", 2)
            return self._reduce("line_exhausts_branch")
        for i in longer:
            m = X.weights[X.branch_points(i)[s]]
            if n + m > theta:
                return self._reduce("saturating_branch", {"branch": i, "m": m})
        order = sorted(longer, key=lambda i: (not X.branches[i].smooth, i))
        for i in order:
            target = X.branch_points(i)[s]
            if is_satellite(target):
                continue
            return self._specialize(i, s + 1, X.weights[target], theta)
        # every next point is a satellite, so no coordinate change can put it on L
        return self._reduce("no_free_point")

    def _situation_two(self, X: GSScheme, d: int):
        B = X.line_points("y")
        N = len(B)
        if N < 2:
            return None
        q = B[-1]
        through = X.branches_through(q)
        if not through:
            return None
        for i in through:
            b = X.branches[i]
            ms = [b.mult(k) for k in range(N)]
            if len(set(ms[:-1])) != 1 or not (ms[-2] > ms[-1] > 0):
                return None
        mq = X.weights[q]
        _, _, n, theta = self.sides(X, d)
        if not n < theta - mq:
            return None
        return q, extension_n(X, q)

    # -- operations -----------------------------------------------------------
    def _reduce(self, why: str, extra: Optional[dict] = None, block: Optional[dict] = None) -> None:
        X, d = self.X, self.d
        seed = self._step_seed()
        n = _line_deg(X)
        self.levels.append(Level(X, d, f"reduce:{why}"))
        self.check("line_condition", n, "<=", d + 1)
        Y = reduce(X, "y", seed)
        self.check("degree_drop", X.deg - Y.deg, "==", n)
        self.check("degree_drop_positive", n, ">=", 1)
        if block is None:
            a, b = self.const.alpha, self.const.beta
            corr = Y.mts if self.kind == "gs" else 0
            self.check("reduced_degree_bound", Y.deg, "<=", b * (d - 1 - Y.mt - corr) ** 2)
            self.check("reduced_line_monotone", _line_deg(Y), "<=", n)
            if d - 1 > 0:
                self.check("reduced_line_bound", n, "<=", d - 1 - a * Y.deg / (d - 1))
            else:
                self.check("reduced_is_empty", Y.deg, "==", 0)
        params = {"seed": seed, "why": why, "line_deg": n}
        if extra:
            params.update(extra)
        if block:
            params.update(block)
        self.emit("reduce", X, Y, d, params)
        self.X, self.d = Y, d - 1

    def _specialize(self, i: int, M: int, m: int, theta) -> None:
        X, d = self.X, self.d
        seed = self._step_seed()
        n = _line_deg(X)
        target = X.branch_points(i)[M - 1]
        self.check("specialized_line_bound", n + m, "<=", theta)
        Y = specialize(X, i, M, "y", seed, allow_singular=True)
        self.check("specialized_line_degree", _line_deg(Y), "==", n + m)
        params = {"branch": i, "M": M, "m": m, "target": key_to_json(target), "seed": seed}
        self.emit("specialize", X, Y, d, params)
        self.X = Y

    def _extend_block(self, q, mprime: int, tau) -> None:
        X0, d0 = self.X, self.d
        a, b = self.const.alpha, self.const.beta
        self.block += 1
        bid = self.block
        s_list: list[int] = []
        mj_list: list[int] = []
        line_after_ext: list[int] = []
        cap = d0 - mprime - a * X0.deg / (d0 - mprime)
        for j in range(1, mprime + 1):
            X, d = self.X, self.d
            self.levels.append(Level(X, d, f"block{bid}:start{j}"))
            n = _line_deg(X)
            self.check("block_line_bound", n, "<", cap)
            B = X.line_points("y")
            qj = B[-1] if len(B) >= 2 else None
            if qj is not None:
                mj = extension_n(X, qj)
                s = 0
                while n + s * mj < tau:
                    s += 1
            else:
                mj = 0
                s = 0
                self.check("block_threshold_reached", n, ">=", tau)
            if j == 1:
                self.check("block_first_multiplicity", mj, "==", mprime)
                self.check("block_first_count", s, ">=", 1)
            Y = X
            for _ in range(s):
                Y = extend(Y, Y.line_points("y")[-1], "y")
            inc = Y.deg - X.deg
            self.check("extension_increment", inc, "==", s * mj * (mj + 1) // 2)
            ny = _line_deg(Y)
            self.check("extended_line_lower", ny, ">=", tau)
            if s >= 1:
                # minimality of s_j; with s_j = 0 nothing bounds the line degree from above
                self.check("extended_line_upper", ny, "<", tau + mj)
            s_list.append(s)
            mj_list.append(mj)
            line_after_ext.append(ny)
            params = {
                "block": bid,
                "j": j,
                "q": key_to_json(qj) if qj is not None else None,
                "m_prime": mprime,
                "m_prime_j": mj,
                "s_j": s,
                "threshold": encode_number(tau),
                "increment": inc,
            }
            self.emit("extend_block", X, Y, d, params)
            self.X = Y
            self._reduce("block", block={"block": bid, "j": j})
        Xm, dm = self.X, self.d
        lam = [j for j in range(1, mprime) if mj_list[j] < mj_list[j - 1]]
        ell = len(lam)
        bounds = [0] + lam + [mprime]
        N = [sum(s_list[bounds[k]:bounds[k + 1]]) for k in range(ell + 1)]
        ell_t = (X0.mt + X0.mts) - (Xm.mt + Xm.mts)
        # descent bookkeeping over the block
        pred = X0.deg + sum(s * m * (m + 1) // 2 for s, m in zip(s_list, mj_list)) - sum(line_after_ext)
        self.check("block_degree_identity", Xm.deg, "==", pred)
        unit_drops = all(mj_list[jj - 1] == mprime - k for k in range(ell + 1) for jj in range(bounds[k] + 1, bounds[k + 1] + 1))
        self.check("block_ell_tilde", ell_t, ">=", 0 if ell == 0 else ell + 1)
        self.check("block_line_bound_after", _line_deg(Xm), "<=", dm - a * Xm.deg / dm)
        self.check("block_degree_bound_after", Xm.deg, "<=", b * (dm - Xm.mt - Xm.mts) ** 2)
        self.check("block_degree_not_larger", Xm.deg, "<=", X0.deg)
        self.check("block_degree_bound_shifted", Xm.deg, "<=", b * (d0 - mprime + ell_t - X0.mt - X0.mts) ** 2)
        margin = (1 - a * b) / (4 * b) * (mprime - 1 - ell) * (d0 - 2 * mprime) - (mprime - ell_t) * (d0 - 2 * mprime)
        self.check("block_margin", margin, ">=", 0)
        summary = {
            "block": bid,
            "m_prime": mprime,
            "s": s_list,
            "m_primes": mj_list,
            "Lambda": lam,
            "ell": ell,
            "ell_tilde": ell_t,
            "N": N,
            "unit_drops": unit_drops,
        }
        self.emit("block_summary", X0, Xm, d0, summary)


def _show(x) -> str:
    if isinstance(x, QuadSurd):
        return f"{x.to_str()}≈{x.decimal(6)}"
    return str(x)


def _compare(rec: dict, got: dict, i: int) -> None:
    for key in ("op", "d", "before", "after", "params", "checks"):
        r = {k: v for k, v in rec.items() if k != "type"}.get(key)
        if r != got[key]:
            raise ReplayMismatch(f"{key} differs (recorded {_brief(r)}, recomputed {_brief(got[key])})", i)


def _brief(v) -> str:
    s = json.dumps(v, sort_keys=True)
    return s if len(s) <= 200 else s[:197] + "..."


# -- public entry points --------------------------------------------------------------


def entry_sides(X: GSScheme, d: int, kind: str) -> tuple:
    c = VanishingConstants.for_class(kind)
    if kind == "gs1":
        return X.deg, c.beta * (d - X.mt) ** 2
    return X.deg, c.beta * (d - X.mt - X.mts) ** 2


def entry_holds(X: GSScheme, d: int, kind: str) -> bool:
    lhs, rhs = entry_sides(X, d, kind)
    return lhs < rhs if kind == "gs1" else lhs <= rhs


def _certify(X: GSScheme, d: int, kind: str, mode: str, seed: int) -> Certificate:
    if mode not in ("strict", "best_effort"):
        raise InputError(f"unknown mode {mode!r}")
    if not isinstance(d, int) or d < 1:
        raise InputError("the degree must be a positive integer")
    if kind == "gs1" and not X.in_GS1:
        raise InputError("the scheme has a singular branch; use the general class")
    cert = Certificate(kind=kind, d=d, mode=mode, seed=seed, scheme=X)
    if mode == "strict" and not entry_holds(X, d, kind):
        lhs, rhs = entry_sides(X, d, kind)
        raise Refusal("EntryConditionFails", _show(lhs), _show(rhs))
    eng = _Engine(X, d, kind, mode, seed)
    status, reason = eng.run()
    cert.steps = eng.steps
    cert.status = status
    cert.reason = reason
    return cert


def certify_gs1(X: GSScheme, d: int, mode: str = "best_effort", seed: int = 0) -> Certificate:
    """Certificate of h¹-vanishing for a scheme all of whose branches are smooth."""
    return _certify(X, d, "gs1", mode, seed)


def certify_gs(X: GSScheme, d: int, mode: str = "best_effort", seed: int = 0) -> Certificate:
    """Certificate of h¹-vanishing for a general scheme."""
    return _certify(X, d, "gs", mode, seed)


def replay(cert: Certificate) -> ReplayReport:
    """Re-run the procedure on the recorded input and compare every step."""
    for s in cert.steps:
        for c in s.get("checks", []):
            if "lhs" not in c or "rhs" not in c or c.get("rel") not in _RELS:
                raise ReplayMismatch("malformed inequality witness", s.get("step", -1))
            if evaluate_check(c) != bool(c.get("holds")):
                raise ReplayMismatch(f"witness {c.get('name')} does not evaluate as recorded", s.get("step", -1))
    mode = "best_effort"
    eng = _Engine(cert.scheme, cert.d, cert.kind, mode, cert.seed, recorded=cert.steps)
    status, reason = eng.run()
    if len(eng.steps) != len(cert.steps):
        raise ReplayMismatch(f"recorded {len(cert.steps)} steps, replay produced {len(eng.steps)}", len(eng.steps))
    if status != cert.status:
        raise ReplayMismatch(f"final status {status} differs from recorded {cert.status}", len(eng.steps))
    initial = eng.levels[0].scheme if eng.levels else cert.scheme
    return ReplayReport(
        terminal=eng.X,
        initial=initial,
        levels=eng.levels,
        steps_checked=len(eng.steps),
        checks_evaluated=sum(len(s["checks"]) for s in eng.steps),
        status=status,
    )
