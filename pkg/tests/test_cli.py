import json
import shutil
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest
from referencing import Registry, Resource

from modlie.cli import main
from modlie.corpus import ENTRIES, regenerate

from conftest import ROOT

SCHEMAS = ROOT / "schemas"
CORPUS = ROOT / "corpus"


def _registry():
    resources = []
    for f in SCHEMAS.glob("*.schema.json"):
        resources.append((f.name, Resource.from_contents(json.loads(f.read_text()))))
    return Registry().with_resources(resources)


REGISTRY = _registry()


def validate(doc, schema_name):
    schema = json.loads((SCHEMAS / schema_name).read_text())
    jsonschema.Draft202012Validator(schema, registry=REGISTRY).validate(doc)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


SP4 = '{"classical": {"kind": "sp", "n": 4, "p": 5}}'
WITT = '{"witt": {"p": 5}}'
SL2_L3 = '{"sl2_simple": {"m": 3, "p": 5}}'
SL2_O1 = '{"witt_sl2_o1": {"p": 5}}'
FIB = '{"fibonacci": {"n": 5, "p": 13}}'


# ---------------------------------------------------------------------------
# construct


def test_construct_classical(capsys):
    code, out, _ = run(capsys, "construct", SP4)
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "algebra" and doc["dim"] == 10
    validate(doc, "algebra.schema.json")


def test_construct_witt_writes_file(capsys, tmp_path):
    out_file = tmp_path / "witt.json"
    code, out, _ = run(capsys, "construct", WITT, "--out", str(out_file))
    assert code == 0 and "module O1 of dim 5" in out and "module O1/k of dim 4" in out
    doc = json.loads(out_file.read_text())
    validate(doc, "example.schema.json")
    assert {k: m["dim"] for k, m in doc["modules"].items()} == {"O1": 5, "O1/k": 4}


def test_construct_fibonacci_bundle(capsys):
    code, out, _ = run(capsys, "construct", FIB)
    assert code == 0
    doc = json.loads(out)
    validate(doc, "example.schema.json")
    assert doc["algebra"]["n"] == 22
    assert doc["attachments"]["block_sizes"] == [7, 6, 5, 4]


def test_construct_from_file_and_p_override(capsys, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(SP4)
    code, out, _ = run(capsys, "construct", str(spec), "--p", "7")
    assert code == 0 and json.loads(out)["p"] == 7


@pytest.mark.parametrize(
    "spec, path",
    [
        ('{"classical": {"kind": "sp", "n": 4, "p": 4}}', "$"),
        ('{"classical": {"kind": "sp", "n": 3, "p": 5}}', "$"),
        ('{"nonsense": {}}', "$"),
        ('{"classical": {"kind": "sp", "n": "4", "p": 5}}', "$"),
        ("{not json", "$"),
    ],
)
def test_construct_validation_errors(capsys, spec, path):
    code, out, err = run(capsys, "construct", spec)
    assert code == 2 and out == ""
    diag = json.loads(err)
    assert diag["error"] == "validation" and diag["path"].startswith(path) and diag["message"]


def test_missing_file_is_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "analyze", "cohomology", str(tmp_path / "nope.json"))
    assert code == 2 and "cannot read" in json.loads(err)["message"]


def test_bad_algebra_document(capsys, tmp_path):
    f = tmp_path / "bad.json"
    f.write_text(json.dumps({"kind": "algebra", "p": 5, "n": 2, "basis": [[0, 1, 0, 0], [0, 0, 1, 0]]}))
    code, _, err = run(capsys, "analyze", "normalizer", str(f))
    assert code == 2 and json.loads(err)["error"] == "validation"
    f.write_text(json.dumps({"kind": "algebra", "p": 5, "n": 2, "basis": [[0, 7, 0, 0]]}))
    code, _, err = run(capsys, "analyze", "normalizer", str(f))
    assert code == 2 and json.loads(err)["path"].startswith("$.basis")


# ---------------------------------------------------------------------------
# analyze


def test_analyze_cohomology(capsys):
    code, out, _ = run(capsys, "analyze", "cohomology", SL2_L3, "--kmax", "2", "--json")
    assert code == 0
    doc = json.loads(out)
    validate(doc, "cohomology_report.schema.json")
    assert doc["dims"] == [0, 2, 2]
    assert doc["complex_shapes"] == [[12, 4], [12, 12], [4, 12]]


def test_analyze_semisimplicity(capsys, tmp_path):
    code, out, _ = run(capsys, "analyze", "semisimplicity", SL2_O1, "--json")
    assert code == 0
    doc = json.loads(out)
    validate(doc, "semisimplicity_report.schema.json")
    assert doc["semisimple"] is False and doc["factor_dims"] == [1, 4]
    # the same answer through a file written by construct and a named module
    f = tmp_path / "w.json"
    run(capsys, "construct", WITT, "--out", str(f))
    code, out, _ = run(capsys, "analyze", "semisimplicity", str(f), "--module", "O1", "--json")
    assert json.loads(out)["factor_dims"] == [1, 4]
    code, _, err = run(capsys, "analyze", "semisimplicity", str(f))
    assert code == 2 and "--module" in json.loads(err)["message"]


def test_analyze_normalizer(capsys):
    code, out, _ = run(capsys, "analyze", "normalizer", WITT, "--ambient", "sl", "--json")
    doc = json.loads(out)
    validate(doc, "normalizer_report.schema.json")
    assert (doc["dim_normalizer"], doc["dim_centralizer"]) == (5, 0)
    code, out, _ = run(capsys, "analyze", "normalizer", WITT, "--json")
    assert json.loads(out)["dim_normalizer"] == 6


def test_analyze_smoothness_fibonacci(capsys, tmp_path):
    f = tmp_path / "fib.json"
    assert run(capsys, "construct", FIB, "--out", str(f))[0] == 0
    code, out, _ = run(capsys, "analyze", "smoothness", str(f), "--json", "--emit-witness")
    assert code == 0
    doc = json.loads(out)
    validate(doc, "smoothness_report.schema.json")
    assert doc["verdict"] == "Obstructed"
    assert doc["torus_part"]["witness"] is not None
    assert all(c["same_family"] and c["same_lattice"] for c in doc["conjugate_checks"])
    # over F_7 the same construction is not obstructed
    code, out, _ = run(capsys, "analyze", "smoothness", str(f), "--p", "7", "--no-conjugates", "--json")
    doc = json.loads(out)
    validate(doc, "smoothness_report.schema.json")
    assert doc["verdict"] != "Obstructed" and not doc["torus_part"]["obstructed"]


def test_summary_and_json_are_separate(capsys, tmp_path):
    f = tmp_path / "r.json"
    code, out, _ = run(capsys, "analyze", "cohomology", SL2_L3, "--out", str(f))
    assert code == 0 and out.startswith("dim H^k") and "{" not in out
    assert json.loads(f.read_text())["dims"] == [0, 2, 2]


def test_search_exhausted_exit_3(capsys, monkeypatch):
    from modlie import repn

    def boom(*a, **k):
        raise repn.SearchExhausted("no proper submodule found")

    monkeypatch.setattr(repn, "composition_series", boom)
    code, _, err = run(capsys, "analyze", "semisimplicity", SL2_O1)
    assert code == 3 and json.loads(err)["error"] == "search exhausted"


def test_complex_too_large_exit_2(capsys, monkeypatch):
    monkeypatch.setattr(sys.modules["modlie.cohomology"], "MAX_COCHAIN_DIM", 5)
    code, _, err = run(capsys, "analyze", "cohomology", SL2_L3)
    assert code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "cohomology", SL2_L3, "--json", "--seed", "3"],
        ["analyze", "semisimplicity", SL2_O1, "--json", "--seed", "11"],
        ["construct", WITT],
    ],
)
def test_repeated_runs_are_byte_identical(capsys, argv):
    outs = {run(capsys, *argv)[1] for _ in range(3)}
    assert len(outs) == 1


def test_entry_point_subprocess(tmp_path):
    out = tmp_path / "a.json"
    r = subprocess.run(
        [sys.executable, "-m", "modlie.cli", "construct", SP4, "--out", str(out)],
        capture_output=True,
        text=True,
        cwd=tmp_path,
    )
    assert r.returncode == 0, r.stderr
    assert json.loads(out.read_text())["dim"] == 10


# ---------------------------------------------------------------------------
# corpus


def test_shipped_corpus_matches_regeneration(tmp_path):
    regenerate(tmp_path)
    shipped = sorted(p.name for p in CORPUS.glob("*.json"))
    fresh = sorted(p.name for p in tmp_path.glob("*.json"))
    assert shipped == fresh == sorted(f"{e['id']}.json" for e in ENTRIES)
    for name in shipped:
        assert (CORPUS / name).read_bytes() == (tmp_path / name).read_bytes(), name


def test_corpus_entries_validate():
    for f in CORPUS.glob("*.json"):
        validate(json.loads(f.read_text()), "corpus_entry.schema.json")


def test_full_corpus_passes(capsys):
    code, out, _ = run(capsys, "corpus", str(CORPUS), "--jobs", "4", "--json")
    doc = json.loads(out)
    validate(doc, "corpus_report.schema.json")
    assert code == 0 and doc["failed"] == 0 and doc["passed"] > 0
    # results are ordered by entry id
    ids = [r["entry"] for r in doc["results"]]
    assert ids == sorted(ids)


def test_corpus_filter(capsys):
    code, out, _ = run(capsys, "corpus", str(CORPUS), "--filter", "fibonacci", "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["entries"] and all("fibonacci" in e for e in doc["entries"])


def test_tampered_divisor_is_exit_1(capsys, tmp_path):
    src = CORPUS / "fibonacci-n5-p13.json"
    entry = json.loads(src.read_text())
    for e in entry["expected"]:
        if e["probe"] == "elementary_divisors":
            e["value"] = {"0": 4, "1": 17, "11": 1}
    (tmp_path / src.name).write_text(json.dumps(entry))
    code, out, _ = run(capsys, "corpus", str(tmp_path))
    assert code == 1
    assert "elementary divisors" in out and "FAIL" in out


def test_corrupt_corpus_is_exit_2(capsys, tmp_path):
    shutil.copy(CORPUS / "witt-p5.json", tmp_path)
    (tmp_path / "broken.json").write_text("{ not json")
    code, _, err = run(capsys, "corpus", str(tmp_path))
    assert code == 2 and json.loads(err)["error"] == "corrupt corpus"
    (tmp_path / "broken.json").write_text(json.dumps({"id": "x", "constructor": "witt"}))
    code, _, _ = run(capsys, "corpus", str(tmp_path))
    assert code == 2


def test_digest_mismatch_is_reported(capsys, tmp_path):
    src = CORPUS / "witt-p5.json"
    entry = json.loads(src.read_text())
    entry["digest"] = "0" * 64
    (tmp_path / src.name).write_text(json.dumps(entry))
    code, out, _ = run(capsys, "corpus", str(tmp_path))
    assert code == 1
