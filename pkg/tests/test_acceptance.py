"""The eight acceptance criteria, one test each, with a PASS/FAIL line per criterion."""

import time

import pytest
from gmpy2 import mpq

from glscalc import bounds as B
from glscalc import oracle
from glscalc.certifier import certify_gs, certify_gs1, entry_holds, replay
from glscalc.constants import ALPHA, ALPHA0, BETA, BETA0, alpha0_equation_sides, gs1_ratio
from glscalc.errors import Refusal, ReplayMismatch
from glscalc.qsurd import SQRT2
from glscalc.scheme import degree_via_contacts, extend, extension_n, intersect_line, reduce
from schemes import a_even, a_odd, cusp, monomial_ideal_matches, node, two_cusps


@pytest.fixture
def report(request, pytestconfig):
    """Print one line per criterion, visible even when output is captured."""
    capman = pytestconfig.pluginmanager.getplugin("capturemanager")
    t0 = time.perf_counter()
    lines = []

    def _report(label, ok, budget, detail=""):
        lines.append((label, ok, budget, detail))

    yield _report
    dt = time.perf_counter() - t0
    with capman.global_and_fixture_disabled():
        for label, ok, budget, detail in lines:
            verdict = "PASS" if ok and dt < budget else "FAIL"
            extra = f"  {detail}" if detail else ""
            print(f"\n[acceptance] {label}: {verdict} ({dt:.2f}s, budget {budget}s){extra}", end="")


def test_criterion_1_printed_example_ideals(report):
    ok = True
    for L in ("y", "x"):
        R = reduce(node(), L)
        ok &= R.deg == 1 and monomial_ideal_matches(R, [(0, 1), (1, 0)])
    for k in range(2, 6):
        ok &= monomial_ideal_matches(reduce(a_odd(k), "y"), [(0, 1), (k, 0)])
        ok &= monomial_ideal_matches(reduce(a_odd(k), "x"), [(0, 2), (k - 1, 1), (2 * k - 1, 0)])
        ok &= monomial_ideal_matches(reduce(a_even(k), "y"), [(0, 1), (k + 1, 0)])
        ok &= monomial_ideal_matches(reduce(a_even(k), "x"), [(0, 2), (k, 1), (2 * k, 0)])
    report("1 reduction examples match their monomial ideals", ok, 1)
    assert ok


def test_criterion_2_extension_examples(report):
    X = cusp()
    Y = extend(X, X.line_points()[1])
    ok = Y.branches[0].germ.series.terms == ((5, mpq(1)),)
    ok &= Y.tree().multiplicity_string() == "2-2-1-1" and Y.deg - X.deg == 3

    T = two_cusps()
    for idx, exps, tree in ((1, [5, 7], "4-4-3<(1-1;1)"), (2, [3, 7], "4-3<(2-1-1;1)")):
        q = T.line_points()[idx]
        E = extend(T, q)
        n = extension_n(T, q)
        ok &= sorted(b.germ.series.terms[0][0] for b in E.branches) == exps
        ok &= E.tree().multiplicity_string() == tree
        ok &= E.deg - T.deg == n * (n + 1) // 2
    report("2 extension examples", ok, 1)
    assert ok


def test_criterion_3_duality_and_bookkeeping(corpus, report):
    ok = True
    for inst in corpus:
        X = inst.scheme
        ok &= X.deg == sum(m * (m + 1) // 2 for m in X.weights.values())
        for L in ("y", "x"):
            ok &= reduce(X, L, seed=inst.seed).deg + intersect_line(X, L).degree == X.deg
    report("3 degree duality and reduction bookkeeping", ok, 30)
    assert ok


@pytest.mark.xfail(strict=True, reason="the contact-order degree formula is wrong for germs mixing branch multiplicities")
def test_criterion_3_contact_formula(corpus, report):
    bad = [inst.index for inst in corpus if degree_via_contacts(inst.scheme) != inst.scheme.deg]
    report("3 contact-order degree formula", not bad, 30, f"{len(bad)}/{len(corpus)} disagree, e.g. instances {bad[:5]}")
    assert not bad


def test_criterion_4_certifier_soundness(corpus, report):
    counter, certified = [], 0
    for inst in corpus:
        X = inst.scheme
        if X.deg > 12:
            continue
        kinds = [("gs1", certify_gs1), ("gs", certify_gs)] if X.in_GS1 else [("gs", certify_gs)]
        for kind, fn in kinds:
            for d in range(1, 11):
                if not entry_holds(X, d, kind):
                    continue
                cert = fn(X, d, mode="strict", seed=inst.seed)
                if not cert.success:
                    continue
                certified += 1
                for lv in replay(cert).levels:
                    if oracle.h0_h1(lv.scheme, lv.d)["h1"] != 0:
                        counter.append((inst.index, kind, d, lv.label))
    ok = not counter
    report("4 certifier soundness against the oracle", ok, 600, f"{certified} certificates, {len(counter)} counterexamples")
    assert ok


def test_criterion_5_constants(report):
    ok = BETA0 * (ALPHA0 + 8) == 1
    lhs, rhs = alpha0_equation_sides(ALPHA0)
    ok &= lhs == rhs
    ok &= BETA == 3 - 2 * SQRT2 and gs1_ratio(ALPHA) == BETA and ALPHA == SQRT2 + 1
    # maximum: the derivative of (a - 1)/(a + a^2) has numerator -a^2 + 2a + 1, zero at 1 + sqrt 2
    ok &= -ALPHA * ALPHA + 2 * ALPHA + 1 == 0
    for a in (ALPHA - mpq(1, 100), ALPHA + mpq(1, 100)):
        ok &= gs1_ratio(a) < BETA
    ok &= BETA0.decimal(5) == "0.10340" and ALPHA0.decimal(4) == "1.6706"
    report("5 constants", ok, 1)
    assert ok


def test_criterion_6_prop58(corpus, report):
    ok, n = True, 0
    for inst in corpus:
        X = inst.scheme
        s = B.sigma(X)
        if X.mu >= 2:
            n += 1
            ok &= (s + 1) * (s + 2) <= 196 * X.mu and s * s < 196 * X.mu
        if X.is_ordinary:
            ok &= (s + 1) * (s + 2) <= 30 * X.mu
    report("6 sigma against 196 mu and 14 sqrt(mu)", ok, 5, f"{n} types with mu >= 2")
    assert ok


def test_criterion_7_sigma_lemma411(corpus, report):
    scoped = [inst for inst in corpus if not inst.scheme.is_ordinary]
    bad = [inst.index for inst in scoped if not B.check_lemma411(inst.scheme, B.sigma(inst.scheme))["holds"]]
    skipped = len(corpus) - len(scoped)
    report("7 sigma passes the irreducible-curve existence check", not bad, 5, f"{len(scoped)} non-ordinary types checked, {skipped} ordinary types out of scope")
    assert not bad


def test_criterion_8_negative_controls(report):
    ok = True
    cert = certify_gs(cusp(), 20)
    i = next(k for k, s in enumerate(cert.steps) if s["op"] == "extend_block")
    cert.steps[i]["params"]["s_j"] += 1
    try:
        replay(cert)
        ok = False
    except ReplayMismatch as exc:
        ok &= exc.step == i
    try:
        certify_gs(cusp(), 8, mode="strict")
        ok = False
    except Refusal as exc:
        ok &= exc.reason == "EntryConditionFails"
    ok &= certify_gs(cusp(), 20, mode="strict").success
    # refusal happens exactly below the first degree where 5 (alpha0 + 8) <= (d - 4)^2
    for d in range(5, 21):
        try:
            certify_gs(cusp(), d, mode="strict")
            ok &= d >= 11
        except Refusal:
            ok &= d < 11
    report("8 negative controls", ok, 1)
    assert ok
