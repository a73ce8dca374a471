"""Command-line front end.

Exit codes: 0 when everything checked holds, 1 when a criterion fails
(refused or failed certification, replay mismatch, failing property),
2 on malformed input, 3 when an internal invariant guaranteed by the
theory is violated.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Optional, Sequence

from . import bounds as B
from . import oracle
from .blowup import key_from_json, key_to_json
from .certifier import Certificate, certify_gs, certify_gs1, entry_holds, replay
from .errors import InputError, PaperInvariantViolation, Refusal, ReplayMismatch
from .qsurd import QuadSurd, encode_number
from .scheme import GSScheme, degree_via_contacts, extend, extension_n, intersect_line, reduce, specialize

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2, 3


# -- I/O helpers --------------------------------------------------------------------


def _plain(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, QuadSurd):
        return encode_number(obj)
    if type(obj).__name__ == "mpq":
        return str(obj)
    return obj


def canonical(obj: Any, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(_plain(obj), sort_keys=True, ensure_ascii=False, indent=2)
    return json.dumps(_plain(obj), sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _read_json(path: str) -> Any:
    text = _read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def load_scheme(path: str) -> GSScheme:
    obj = _read_json(path)
    try:
        return GSScheme.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: invalid scheme description ({exc})") from None


def _scheme_dump(X: GSScheme, line: str = "y") -> dict:
    tree = X.tree(line)
    return {
        "scheme": X.to_json(),
        "invariants": X.invariants(),
        "tree": {"nodes": tree.to_json(), "string": tree.multiplicity_string()},
    }


# -- subcommands ----------------------------------------------------------------------


def cmd_invariants(args) -> tuple[dict, int]:
    X = load_scheme(args.file)
    out = _scheme_dump(X, args.line)
    out["line"] = intersect_line(X, args.line).to_json()
    if X.in_S and not X.is_empty:
        out["degree_via_contacts"] = degree_via_contacts(X)
    return out, EXIT_OK


def cmd_reduce(args) -> tuple[dict, int]:
    X = load_scheme(args.file)
    if args.times < 0:
        raise InputError("--times must be non-negative")
    table = []
    for i in range(args.times):
        on_line = intersect_line(X, args.line).degree
        Y = reduce(X, args.line, seed=args.seed + i)
        table.append({"step": i + 1, "deg_before": X.deg, "deg_cap_L": on_line, "deg_after": Y.deg, "mt_before": X.mt, "mt_after": Y.mt})
        X = Y
    out = _scheme_dump(X, args.line)
    out["bookkeeping"] = table
    return out, EXIT_OK


def _point(X: GSScheme, args) -> tuple:
    pts = X.line_points(args.line)
    if args.point is not None:
        try:
            return key_from_json(json.loads(args.point))
        except (json.JSONDecodeError, TypeError, ValueError):
            raise InputError("--point expects a JSON list of directions such as '[\"0\"]'") from None
    if not (0 <= args.at < len(pts)):
        raise InputError(f"--at must lie in 0..{len(pts) - 1} (points of T* on the line)")
    return pts[args.at]


def cmd_extend(args) -> tuple[dict, int]:
    X = load_scheme(args.file)
    q = _point(X, args)
    n = extension_n(X, q) if args.line == "y" else None
    Y = extend(X, q, args.line)
    out = _scheme_dump(Y, args.line)
    out["point"] = key_to_json(q)
    out["increment"] = Y.deg - X.deg
    if n is not None:
        out["n"] = n
    return out, EXIT_OK


def cmd_specialize(args) -> tuple[dict, int]:
    X = load_scheme(args.file)
    before = intersect_line(X, args.line).degree
    Y = specialize(X, args.branch, args.points, args.line, seed=args.seed)
    out = _scheme_dump(Y, args.line)
    out["deg_cap_L_before"] = before
    out["deg_cap_L_after"] = intersect_line(Y, args.line).degree
    return out, EXIT_OK


def cmd_certify(args) -> tuple[dict, int]:
    X = load_scheme(args.file)
    fn = certify_gs1 if args.cls == "gs1" else certify_gs
    mode = "strict" if args.strict else "best_effort"
    try:
        cert = fn(X, args.degree, mode=mode, seed=args.seed)
    except Refusal as exc:
        return {"status": "refused", "reason": exc.reason, "lhs": exc.lhs, "rhs": exc.rhs}, EXIT_FAIL
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(cert.dumps())
    out = {
        "status": cert.status,
        "reason": cert.reason,
        "class": cert.kind,
        "d": cert.d,
        "mode": cert.mode,
        "entry_holds": entry_holds(X, args.degree, args.cls),
        "steps": [s["op"] for s in cert.steps],
        "certificate": args.out,
    }
    return out, EXIT_OK if cert.success else EXIT_FAIL


def _validate_certificate(cert: Certificate) -> dict:
    try:
        rep = replay(cert)
    except ReplayMismatch as exc:
        return {"verdict": "mismatch", "step": exc.step, "message": str(exc), "ok": False}
    levels = []
    ok = rep.status == "success"
    for lv in rep.levels:
        h = oracle.h0_h1(lv.scheme, lv.d)
        levels.append({"label": lv.label, "d": lv.d, "deg": lv.scheme.deg, "h0": h["h0"], "h1": h["h1"]})
        ok = ok and h["h1"] == 0
    return {
        "verdict": "valid" if ok else "invalid",
        "status": rep.status,
        "steps_checked": rep.steps_checked,
        "checks_evaluated": rep.checks_evaluated,
        "levels": levels,
        "ok": ok,
    }


def cmd_oracle(args) -> tuple[dict, int]:
    if args.certificate:
        cert = Certificate.loads(_read_text(args.certificate))
        rep = _validate_certificate(cert)
        return rep, EXIT_OK if rep["ok"] else EXIT_FAIL
    if args.file is None or args.degree is None:
        raise InputError("oracle needs a scheme file with --degree, or --certificate")
    X = load_scheme(args.file)
    if args.dump_matrix:
        sys_ = oracle.conditions_of(X, args.degree)
        with open(args.dump_matrix, "w", encoding="utf-8") as fh:
            fh.write(sys_.to_csv() + "\n")
    return oracle.h0_h1(X, args.degree), EXIT_OK


def _type_list(obj: Any) -> list:
    if isinstance(obj, dict) and "types" in obj:
        out = []
        for t in obj["types"]:
            if isinstance(t, int):
                out.append(t)
            elif isinstance(t, dict) and "branches" in t:
                out.append(GSScheme.from_json(t))
            elif isinstance(t, dict) and "mu" in t:
                out.append(t)
            else:
                raise InputError(f"unreadable type entry {t!r}")
        return out
    raise InputError("a type list file needs a 'types' array")


def cmd_bounds(args) -> tuple[dict, int]:
    obj = _read_json(args.file)
    if isinstance(obj, dict) and "types" in obj:
        types = _type_list(obj)
        out: dict = {"count": len(types), "mu_total": sum(B._mu_of(t) for t in types)}
        out["theorem1_min_degree"] = B.min_degree_theorem1(types)
        if args.degree is not None:
            out["theorem1"] = B.check_theorem1(types, args.degree)
            out["prior_bound"] = B.compare_prior_bound(types, args.degree)
            if all(isinstance(t, GSScheme) or (isinstance(t, dict) and "sigma" in t) for t in types):
                out["lemma55"] = B.check_lemma55(types, args.degree)
        return out, EXIT_OK
    X = GSScheme.from_json(obj)
    return B.bound_report(X, args.degree).to_json(), EXIT_OK


# -- corpus -----------------------------------------------------------------------------


def instance_properties(X: GSScheme, seed: int = 0) -> dict:
    """Every cross-module property that applies to one scheme of the class S."""
    res: dict[str, bool] = {}
    inv = X.invariants()
    res["deg_delta_duality"] = X.deg == X.delta + sum(X.weights.values())
    res["deg_via_contacts"] = degree_via_contacts(X) == X.deg
    res["mu_formula"] = inv["mu"] == 2 * inv["delta"] - inv["r"] + 1
    for L in ("y", "x"):
        R = reduce(X, L, seed=seed)
        n = intersect_line(X, L).degree
        res[f"reduction_bookkeeping_{L}"] = R.deg + n == X.deg
        res[f"multiplicity_sandwich_{L}"] = all(m - 1 <= R.weights.get(q, 0) <= m for q, m in X.weights.items())
        res[f"line_monotone_{L}"] = intersect_line(R, L).degree <= n
        n2 = intersect_line(R, L).degree
        if n2 < n:
            R2 = reduce(R, L, seed=seed + 1)
            res[f"double_reduction_{L}"] = R2.mt <= X.mt - 1
        else:
            res[f"equal_line_keeps_mt_{L}"] = R.mt == X.mt
        if X.in_GS1:
            res[f"gs1_closure_{L}"] = R.in_GS1
    pts = X.line_points("y")
    if len(pts) >= 2:
        q = pts[-1]
        Y = extend(X, q)
        n = extension_n(X, q)
        res["extension_accounting"] = Y.deg - X.deg == n * (n + 1) // 2 and Y.mt == X.mt and Y.mts == X.mts
    s = B.sigma(X)
    if not X.is_ordinary:
        # the ordinary arm of sigma is not derived from the T-smoothness criterion
        res["lemma411_at_sigma"] = bool(B.check_lemma411(X, s)["holds"])
    if X.mu >= 2:
        res["prop58"] = bool(B.check_prop58(X)["holds"])
        res["theorem2_chain"] = s * s < 196 * X.mu
    if X.is_ordinary:
        res["prop58_ordinary"] = (s + 1) * (s + 2) <= 30 * X.mu
    res.update(certifier_properties(X, seed))
    return res


def certifier_properties(X: GSScheme, seed: int = 0, small_deg: int = 12, small_d: int = 10) -> dict:
    """Strict completeness above the entry threshold, replay, and oracle soundness on small cases."""
    res: dict[str, bool] = {}
    kinds = [("gs1", certify_gs1), ("gs", certify_gs)] if X.in_GS1 else [("gs", certify_gs)]
    for kind, fn in kinds:
        d0 = 1
        while not entry_holds(X, d0, kind):
            d0 += 1
        ok = True
        for d in (d0, d0 + 1, d0 + 3):
            try:
                cert = fn(X, d, mode="strict", seed=seed)
                ok = ok and cert.success and replay(cert).status == "success"
            except (Refusal, ReplayMismatch):
                ok = False
        res[f"strict_completeness_{kind}"] = ok
        if X.deg <= small_deg:
            sound = True
            for d in range(d0, small_d + 1):
                cert = fn(X, d, mode="strict", seed=seed)
                if cert.success:
                    for lv in replay(cert).levels:
                        sound = sound and oracle.h0_h1(lv.scheme, lv.d)["h1"] == 0
            res[f"oracle_soundness_{kind}"] = sound
    return res


def _corpus_worker(job: tuple) -> dict:
    import random

    from .corpus import random_scheme

    index, seed, max_branches, max_mult = job
    X = random_scheme(random.Random(seed), max_branches, max_mult)
    try:
        props = instance_properties(X, seed)
        err = None
    except PaperInvariantViolation as exc:
        props, err = {}, str(exc)
    return {"index": index, "seed": seed, "invariants": X.invariants(), "properties": props, "error": err}


def cmd_corpus(args) -> tuple[dict, int]:
    if args.count < 0:
        raise InputError("--count must be non-negative")
    jobs = [(i, args.seed * 100003 + i, args.max_branches, args.max_mult) for i in range(args.count)]
    t0 = time.perf_counter()
    if args.jobs > 1 and jobs:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_corpus_worker, jobs, chunksize=8))
    else:
        rows = [_corpus_worker(j) for j in jobs]
    summary: dict[str, dict] = {}
    errors = []
    for r in rows:
        if r["error"]:
            errors.append({"index": r["index"], "error": r["error"]})
        for name, ok in r["properties"].items():
            s = summary.setdefault(name, {"checked": 0, "failed": 0, "failures": []})
            s["checked"] += 1
            if not ok:
                s["failed"] += 1
                s["failures"].append(r["index"])
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            for r in rows:
                fh.write(canonical(r) + "\n")
    all_ok = not errors and all(s["failed"] == 0 for s in summary.values())
    out = {
        "count": args.count,
        "seed": args.seed,
        "properties": summary,
        "errors": errors,
        "all_pass": all_ok,
        "seconds": round(time.perf_counter() - t0, 3),
    }
    if errors:
        return out, EXIT_INVARIANT
    return out, EXIT_OK if all_ok else EXIT_FAIL


# -- parser ---------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="glscalc", description="Exact calculus of generalized singularity schemes.")
    p.add_argument("--pretty", action="store_true", help="indent the JSON output")
    sub = p.add_subparsers(dest="command", required=True)

    _add = sub.add_parser

    def add_parser(*a, **kw):
        sp = _add(*a, **kw)
        sp.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS, help="indent the JSON output")
        return sp

    sub.add_parser = add_parser  # type: ignore[method-assign]

    def line_opt(sp):
        sp.add_argument("--line", choices=("y", "x"), default="y", help="distinguished line through the centre")

    sp = sub.add_parser("invariants", help="deg, mt, mt_s, delta, mu and the tree of a scheme")
    sp.add_argument("file")
    line_opt(sp)
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("reduce", help="residual scheme X : L, optionally iterated")
    sp.add_argument("file")
    line_opt(sp)
    sp.add_argument("--times", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("extend", help="extension at a point of T* on the line")
    sp.add_argument("file")
    line_opt(sp)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--at", type=int, default=1, help="index of the point along T* on the line (0 is the centre)")
    g.add_argument("--point", help="point as a JSON list of directions")
    sp.set_defaults(func=cmd_extend)

    sp = sub.add_parser("specialize", help="move initial points of a smooth branch onto the line")
    sp.add_argument("file")
    line_opt(sp)
    sp.add_argument("--branch", type=int, required=True)
    sp.add_argument("--points", type=int, required=True, help="size of M")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_specialize)

    sp = sub.add_parser("certify", help="h1-vanishing certificate at degree d")
    sp.add_argument("file")
    sp.add_argument("--degree", "-d", type=int, required=True)
    sp.add_argument("--class", dest="cls", choices=("gs1", "gs"), default="gs")
    sp.add_argument("--strict", action="store_true", help="refuse when the entry inequality fails")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", "-o", help="write the certificate (JSON lines) here")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("oracle", help="h0/h1 by exact linear algebra, or validate a certificate")
    sp.add_argument("file", nargs="?")
    sp.add_argument("--degree", "-d", type=int)
    sp.add_argument("--certificate", "-c")
    sp.add_argument("--dump-matrix", help="write the condition matrix as CSV")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("bounds", help="sigma and the degree-bound checks")
    sp.add_argument("file", help="a scheme, or an object with a 'types' list")
    sp.add_argument("--degree", "-d", type=int)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("corpus", help="random corpus and property summary")
    sp.add_argument("--count", type=int, default=200)
    sp.add_argument("--max-branches", type=int, default=4)
    sp.add_argument("--max-mult", type=int, default=6)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out", help="write one JSON line per instance")
    sp.set_defaults(func=cmd_corpus)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out, code = args.func(args)
    except PaperInvariantViolation as exc:
        print(canonical({"error": "PaperInvariantViolation", "message": str(exc)}), file=sys.stderr)
        return EXIT_INVARIANT
    except InputError as exc:
        print(canonical({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return EXIT_INPUT
    except ReplayMismatch as exc:
        print(canonical({"error": "ReplayMismatch", "message": str(exc)}), file=sys.stderr)
        return EXIT_FAIL
    print(canonical(out, args.pretty))
    return code


if __name__ == "__main__":
    sys.exit(main())
