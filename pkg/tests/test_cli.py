import json

import pytest

from glscalc.cli import main
from glscalc.scheme import GSScheme
from schemes import a_even, a_odd, cusp, node, two_cusps


@pytest.fixture
def write(tmp_path):
    def _write(name, obj):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj), encoding="utf-8")
        return str(p)

    return _write


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def scheme_file(write, X, name="x.json"):
    return write(name, X.to_json())


def test_invariants(capsys, write):
    code, out, _ = run(capsys, "invariants", scheme_file(write, cusp()))
    assert code == 0
    inv = out["invariants"]
    assert (inv["deg"], inv["mt"], inv["mts"], inv["mu"]) == (5, 2, 2, 2)
    code, out, _ = run(capsys, "invariants", scheme_file(write, node()))
    assert (out["invariants"]["deg"], out["invariants"]["mts"], out["invariants"]["mu"]) == (3, 0, 1)


def test_invariants_empty(capsys, write):
    code, out, _ = run(capsys, "invariants", write("e.json", {"branches": []}))
    assert code == 0 and out["invariants"]["deg"] == 0 and out["invariants"]["mu"] == 0


def test_reduce(capsys, write):
    code, out, _ = run(capsys, "reduce", scheme_file(write, a_odd(2)), "--line", "y")
    assert code == 0 and out["invariants"]["deg"] == 2
    assert out["bookkeeping"][0]["deg_cap_L"] == 4
    code, out, _ = run(capsys, "reduce", scheme_file(write, a_even(2)), "--line", "x")
    assert out["invariants"]["deg"] == a_odd(2).deg
    code, out, _ = run(capsys, "reduce", scheme_file(write, node()))
    assert out["invariants"]["deg"] == 1
    # the dump parses back to a scheme
    GSScheme.from_json(out["scheme"])


def test_reduce_times(capsys, write):
    code, out, _ = run(capsys, "reduce", scheme_file(write, a_odd(3)), "--times", "2")
    assert [r["deg_after"] for r in out["bookkeeping"]] == [3, 0]


def test_extend(capsys, write):
    code, out, _ = run(capsys, "extend", scheme_file(write, two_cusps()), "--at", "2")
    assert code == 0 and out["increment"] == 3 and out["n"] == 2
    code, _, err = run(capsys, "extend", scheme_file(write, cusp()), "--at", "0")
    assert code == 2 and "QIsCentre" in err


def test_specialize(capsys, write):
    code, out, _ = run(capsys, "specialize", scheme_file(write, a_odd(2)), "--line", "x", "--branch", "0", "--points", "2")
    assert code == 0 and (out["deg_cap_L_before"], out["deg_cap_L_after"]) == (2, 4)


def test_certify_and_validate(capsys, write, tmp_path):
    cert = tmp_path / "c.jsonl"
    code, out, _ = run(capsys, "certify", scheme_file(write, cusp()), "-d", "20", "--strict", "-o", cert)
    assert code == 0 and out["status"] == "success"
    code, out, _ = run(capsys, "oracle", "-c", cert)
    assert code == 0 and out["verdict"] == "valid"
    assert all(lv["h1"] == 0 for lv in out["levels"])


def test_certify_refused(capsys, write):
    code, out, _ = run(capsys, "certify", scheme_file(write, cusp()), "-d", "8", "--strict")
    assert code == 1 and out["status"] == "refused" and out["reason"] == "EntryConditionFails"


def test_tampered_certificate(capsys, write, tmp_path):
    cert = tmp_path / "c.jsonl"
    run(capsys, "certify", scheme_file(write, cusp()), "-d", "20", "-o", cert)
    lines = cert.read_text().splitlines()
    step = json.loads(lines[1])
    step["params"]["s_j"] += 1
    lines[1] = json.dumps(step)
    cert.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "oracle", "-c", cert)
    assert code != 0 and out["verdict"] == "mismatch" and out["step"] == 0


def test_oracle_scheme(capsys, write, tmp_path):
    csv = tmp_path / "m.csv"
    code, out, _ = run(capsys, "oracle", scheme_file(write, cusp()), "-d", "3", "--dump-matrix", csv)
    assert code == 0 and (out["h0"], out["h1"], out["rank"]) == (5, 0, 5)
    assert csv.read_text().strip()


def test_oracle_needs_degree(capsys, write):
    code, _, err = run(capsys, "oracle", scheme_file(write, cusp()))
    assert code == 2


def test_bounds(capsys, write):
    code, out, _ = run(capsys, "bounds", scheme_file(write, cusp()), "-d", "24")
    assert code == 0 and out["sigma"] == 15 and out["checks"]["lemma55"]["holds"]
    code, out, _ = run(capsys, "bounds", write("t.json", {"types": [1] * 100}), "-d", "198")
    assert out["theorem1"]["holds"] and out["theorem1_min_degree"] == 198 and "lemma55" not in out
    code, out, _ = run(capsys, "bounds", write("t2.json", {"types": [cusp().to_json()]}), "-d", "24")
    assert out["lemma55"]["holds"]


def test_bad_json_reports_position(capsys, write):
    code, _, err = run(capsys, "invariants", write("bad.json", '{"branches": [\n  {"den": 2,}\n]}'))
    assert code == 2
    msg = json.loads(err)["message"]
    assert ":2:" in msg


def test_schema_error(capsys, write):
    code, _, err = run(capsys, "invariants", write("bad.json", {"branches": [{"den": 0, "terms": []}]}))
    assert code == 2


def test_missing_file(capsys):
    code, _, _ = run(capsys, "invariants", "/nonexistent/scheme.json")
    assert code == 2


def test_corpus_empty(capsys):
    code, out, _ = run(capsys, "corpus", "--count", "0")
    assert code == 0 and out["count"] == 0 and out["properties"] == {}


def test_corpus_small(capsys, tmp_path):
    dump = tmp_path / "corpus.jsonl"
    code, out, _ = run(capsys, "corpus", "--count", "6", "--seed", "1", "--out", dump)
    assert not out["errors"]
    assert len(dump.read_text().splitlines()) == 6
    failing = {k for k, v in out["properties"].items() if v["failed"]}
    assert failing <= {"deg_via_contacts"}
    assert code == (1 if failing else 0)


def test_pretty_and_canonical(capsys, write):
    f = scheme_file(write, cusp())
    main(["invariants", f, "--pretty"])
    pretty = capsys.readouterr().out
    main(["invariants", f])
    compact = capsys.readouterr().out
    assert "\n  " in pretty and json.loads(pretty) == json.loads(compact)
    assert compact.strip() == json.dumps(json.loads(compact), sort_keys=True, separators=(",", ":"), ensure_ascii=False)
