"""Executable records of worked examples and the runner that re-checks them.

Each entry names a constructor spec, a list of expectations and the sha256
digest of the constructor's canonical output. An expectation applies a
named probe (with optional arguments) to the built object and compares the
result, exactly, with a frozen JSON value.
"""
from __future__ import annotations

import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Iterable, Optional

import numpy as np

from .cohomology import ComplexTooLarge, cohomology, ext1
from . import repn as R
from .constructions import classical
from .exactlinalg import FpMatrix, hermite_normal_form
from .liealg import Subspace, batch_bracket, center, centralizer, normalizer, trace_form_gram
from .registry import Built, build
from .serialization import ValidationError, canonical_dumps, digest
from .smoothness import smoothness_report, torus_lift_test

__all__ = [
    "CorruptCorpus",
    "ExpectationResult",
    "PROBES",
    "ENTRIES",
    "entry_digest",
    "make_entry",
    "regenerate",
    "load_corpus",
    "run_entry",
    "run_corpus",
    "format_table",
]

CORPUS_VERSION = 1


class CorruptCorpus(ValueError):
    pass


# ---------------------------------------------------------------------------
# probes


def _ambient(b: Built, which: str) -> Subspace:
    return classical(which, b.algebra.n, b.algebra.p)


def _basis(b: Built) -> Optional[list[np.ndarray]]:
    if "basis" not in b.attachments:
        return None
    n = b.algebra.n
    return [np.array(v, dtype=np.int64).reshape(n, n) for v in b.attachments["basis"]]


def _lift_report(b: Built):
    if "lift" not in b.extra:
        b.extra["lift"] = torus_lift_test(b.algebra, _basis(b), b.algebra.p)
    return b.extra["lift"]


def _divisor_multiset(b: Built) -> dict[str, int]:
    c = Counter(_lift_report(b).elementary_divisors)
    return {str(k): v for k, v in sorted(c.items())}


def _toral_normalises(b: Built) -> bool:
    n, p = b.algebra.n, b.algebra.p
    s = np.array(b.attachments["toral_element"], dtype=np.int64).reshape(n, n)
    return b.algebra.contains_all(batch_bracket(s[None], b.algebra.matrices, p))


def _relation_digest(b: Built) -> str:
    # the relation lattice, not the raw rows: extra support pairs may add redundant rows
    R_ = _lift_report(b).relation_matrix
    return digest([[str(x) for x in r] for r in hermite_normal_form(R_.entries, R_.cols)])


def _gram_ok(b: Built) -> bool:
    G = np.array(b.attachments["gram"], dtype=np.int64)
    p = b.algebra.p
    alternating = not np.remainder(G + G.T, p).any() and not np.diag(G).any()
    return bool(alternating and FpMatrix(G, p).rank() == G.shape[0] and b.attachments["invariant"])


def _factor_dims(b: Built, module: Optional[str] = None, seed: int = 0) -> list[int]:
    return R.composition_series(b.pick_module(module), seed).factor_dims


def _cohomology(b: Built, module: Optional[str] = None, kmax: int = 2) -> list[int]:
    return cohomology(b.pick_module(module), kmax).dims


def _ext1_from(b: Built, other: dict, module: Optional[str] = None) -> int:
    target = b.pick_module(module)
    src = build(other).pick_module(None)
    if src.algebra != target.algebra:
        raise ValidationError("ext1 probe: modules over different algebras")
    return ext1(R.restrict(src, target.algebra), target)


PROBES: dict[str, Callable[..., Any]] = {
    "dim": lambda b: b.algebra.dim,
    "module_dim": lambda b, module=None: b.pick_module(module).dim,
    "factor_dims": _factor_dims,
    "semisimple": lambda b, module=None, seed=0: R.is_semisimple(b.pick_module(module), seed),
    "preserved_forms_dim": lambda b, module=None: len(R.preserved_bilinear_forms(b.pick_module(module))),
    "normalizer_dim": lambda b, ambient="gl": normalizer(_ambient(b, ambient), b.algebra).dim,
    "centralizer_dim": lambda b, ambient="gl": centralizer(_ambient(b, ambient), b.algebra).dim,
    "center_dim": lambda b: center(b.algebra).dim,
    "trace_form_rank": lambda b: trace_form_gram(b.algebra)[1],
    "elementary_divisors": _divisor_multiset,
    "obstructed": lambda b: _lift_report(b).obstructed,
    "nullities": lambda b: [_lift_report(b).modp_nullity, _lift_report(b).integral_nullity],
    "divisors_divisible_by_p": lambda b: _lift_report(b).divisors_divisible_by_p,
    "relation_matrix_digest": _relation_digest,
    "toral_normalises": _toral_normalises,
    "gram_alternating_nondegenerate": _gram_ok,
    "smoothness_verdict": lambda b, ambient="gl": smoothness_report(_ambient(b, ambient), b.algebra, basis=_basis(b)).verdict,
    "attachment": lambda b, key: b.attachments[key],
    "cohomology": _cohomology,
    "ext1_from": _ext1_from,
}


# ---------------------------------------------------------------------------
# entries

LIT = "literature value"


def _ora(how: str) -> str:
    return f"oracle: {how}"


def _e(name: str, probe: str, value: Any, provenance: str, **args) -> dict:
    return {"name": name, "probe": probe, "args": args, "value": value, "provenance": provenance}


def _sl2(m: int, p: int) -> dict:
    return {"sl2_simple": {"m": m, "p": p}}


SNF = _ora("sympy Smith normal form of the integer relation matrix")
LINSOLVE = _ora("dense linear solve over F_p, cross-checked by brute-force span")
CE = _ora("independent cocycle/coboundary rank count")
MEATAXE = _ora("brute-force enumeration of invariant subspaces")

ENTRIES: list[dict] = [
    {
        "id": "fibonacci-n5-p13",
        "constructor": "fibonacci",
        "params": {"n": 5, "p": 13},
        "expected": [
            _e("elementary divisors", "elementary_divisors", {"0": 4, "1": 17, "13": 1}, LIT),
            _e("torus lift obstructed", "obstructed", True, LIT),
            _e("mod-p vs integral nullity", "nullities", [5, 4], SNF),
            _e("toral element normalises h", "toral_normalises", True, LIT),
            _e("smoothness verdict", "smoothness_verdict", "Obstructed", LIT),
        ],
    },
    {
        "id": "fibonacci-n5-p13-lambda123",
        "constructor": "fibonacci",
        "params": {"n": 5, "p": 13, "lambdas": [1, 2, 3]},
        "expected": [
            _e("elementary divisors", "elementary_divisors", {"0": 4, "1": 17, "13": 1}, LIT),
            _e("relation lattice independent of lambda", "relation_matrix_digest", None, LIT),
            _e("torus lift obstructed", "obstructed", True, LIT),
        ],
    },
    {
        "id": "fibonacci-n5-p7",
        "constructor": "fibonacci",
        "params": {"n": 5, "p": 7},
        "expected": [
            _e("no divisor divisible by p", "divisors_divisible_by_p", 0, SNF),
            _e("torus lift obstructed", "obstructed", False, SNF),
            _e("toral element normalises h", "toral_normalises", False, LINSOLVE),
        ],
    },
    {
        "id": "fibonacci-n6-p7",
        "constructor": "fibonacci",
        "params": {"n": 6, "p": 7},
        "expected": [
            _e("elementary divisors", "elementary_divisors", {"0": 4, "1": 19, "21": 1}, LIT),
            _e("torus lift obstructed", "obstructed", True, LIT),
        ],
    },
    {
        "id": "witt-p5",
        "constructor": "witt",
        "params": {"p": 5},
        "expected": [
            _e("dim W1", "dim", 5, LIT),
            _e("dim O1", "module_dim", 5, LIT, module="O1"),
            _e("dim O1/k", "module_dim", 4, LIT, module="O1/k"),
            _e("O1 composition factors", "factor_dims", [1, 4], LIT, module="O1"),
            _e("O1/k irreducible", "factor_dims", [4], LIT, module="O1/k"),
            _e("normaliser in gl4", "normalizer_dim", 6, LIT, ambient="gl"),
            _e("normaliser in sl4", "normalizer_dim", 5, LIT, ambient="sl"),
            _e("centraliser in gl4", "centralizer_dim", 1, LINSOLVE, ambient="gl"),
            _e("centre", "center_dim", 0, LINSOLVE),
            _e("invariant bilinear forms on O1/k", "preserved_forms_dim", 1, LINSOLVE, module="O1/k"),
        ],
    },
    {
        "id": "witt-p7",
        "constructor": "witt",
        "params": {"p": 7},
        "expected": [
            _e("dim W1", "dim", 7, LIT),
            _e("normaliser in gl6", "normalizer_dim", 8, LIT, ambient="gl"),
            _e("normaliser in sl6", "normalizer_dim", 7, LIT, ambient="sl"),
            _e("O1 composition factors", "factor_dims", [1, 6], LIT, module="O1"),
        ],
    },
    {
        "id": "witt-sp-p5",
        "constructor": "witt_sp",
        "params": {"p": 5},
        "expected": [_e("alternating nondegenerate invariant form", "gram_alternating_nondegenerate", True, LIT)],
    },
    {
        "id": "witt-sp-p7",
        "constructor": "witt_sp",
        "params": {"p": 7},
        "expected": [_e("alternating nondegenerate invariant form", "gram_alternating_nondegenerate", True, LIT)],
    },
    {
        "id": "witt-o1-semidirect-p5",
        "constructor": "witt_o1_semidirect",
        "params": {"p": 5},
        "expected": [
            _e("dim", "dim", 10, LIT),
            _e("O1 irreducible", "factor_dims", [5], MEATAXE),
        ],
    },
    {
        "id": "witt-sl2-o1-p5",
        "constructor": "witt_sl2_o1",
        "params": {"p": 5},
        "expected": [
            _e("composition factors", "factor_dims", [1, 4], LIT),
            _e("semisimple", "semisimple", False, LIT),
        ],
    },
    {
        "id": "smooth-unipotent-p5",
        "constructor": "smooth_unipotent",
        "params": {"p": 5},
        "expected": [
            _e("normaliser inside Borel", "attachment", True, LIT, key="normalizer_in_borel"),
            _e("normaliser dim", "normalizer_dim", 6, LINSOLVE),
        ],
    },
    {
        "id": "sl2-small-rep-p5",
        "constructor": "sl2_small_rep",
        "params": {"p": 5, "seed": 0},
        "expected": [
            _e("image dim", "dim", 3, LIT),
            _e("dim M", "module_dim", 5, LIT, module="M"),
            _e("factors of M", "attachment", [3, 2], LIT, key="M_factor_dims"),
            _e("M semisimple", "semisimple", False, LIT, module="M"),
            _e("h normalises M", "attachment", True, LIT, key="h_in_normalizer_of_M"),
        ],
    },
    {
        "id": "sl2-small-rep-p7",
        "constructor": "sl2_small_rep",
        "params": {"p": 7, "seed": 0},
        "expected": [
            _e("dim M", "module_dim", 7, LIT, module="M"),
            _e("factors of M", "attachment", [5, 2], LIT, key="M_factor_dims"),
            _e("h normalises M", "attachment", True, LIT, key="h_in_normalizer_of_M"),
        ],
    },
    {
        "id": "cohomology-sl2-trivial-p5",
        "constructor": "trivial",
        "params": {"classical": {"kind": "sl", "n": 2, "p": 5}},
        "expected": [_e("H^0..H^2", "cohomology", [1, 0, 0], LIT)],
    },
    {
        "id": "cohomology-sl2-L3-p5",
        "constructor": "sl2_simple",
        "params": {"m": 3, "p": 5},
        "expected": [
            _e("H^0..H^2", "cohomology", [0, 2, 2], CE),
            _e("Ext1(L0, L3)", "ext1_from", 2, LIT, other=_sl2(0, 5)),
        ],
    },
    {
        "id": "cohomology-sl2-L1-p5",
        "constructor": "sl2_simple",
        "params": {"m": 1, "p": 5},
        "expected": [_e("Ext1(L1, L1)", "ext1_from", 0, LIT, other=_sl2(1, 5))],
    },
    {
        "id": "cohomology-sl2-L1-p7",
        "constructor": "sl2_simple",
        "params": {"m": 1, "p": 7},
        "expected": [_e("H^0..H^2", "cohomology", [0, 0, 0], CE)],
    },
    {
        "id": "cohomology-sl3-S2-p5",
        "constructor": "sym_power",
        "params": {"module": {"natural": {"classical": {"kind": "sl", "n": 3, "p": 5}}}, "k": 2},
        "expected": [
            _e("irreducible of dim 6", "factor_dims", [6], MEATAXE),
            _e("H^0..H^2", "cohomology", [0, 0, 3], LIT),
        ],
    },
    {
        "id": "cohomology-sl3-trivial-p3",
        "constructor": "trivial",
        "params": {"classical": {"kind": "sl", "n": 3, "p": 3}},
        "expected": [_e("H^0..H^2", "cohomology", [1, 0, 6], LIT)],
    },
]


def entry_digest(b: Built) -> str:
    return digest(b.to_json())


def make_entry(template: dict) -> dict:
    """Fill derived fields (digest, relation-matrix cross references) into a template."""
    entry = json.loads(json.dumps(template))
    b = build({entry["constructor"]: entry["params"]})
    entry["version"] = CORPUS_VERSION
    entry["digest"] = entry_digest(b)
    for ex in entry["expected"]:
        if ex["probe"] == "relation_matrix_digest" and ex["value"] is None:
            base = dict(entry["params"])
            base.pop("lambdas", None)
            ex["value"] = _relation_digest(build({entry["constructor"]: base}))
    return entry


def regenerate(directory: Path | str, templates: Iterable[dict] = ENTRIES) -> list[Path]:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for t in templates:
        entry = make_entry(t)
        path = d / f"{entry['id']}.json"
        path.write_text(json.dumps(entry, sort_keys=True, indent=2) + "\n")
        paths.append(path)
    return paths


# ---------------------------------------------------------------------------
# running


_REQUIRED = {"id": str, "version": int, "constructor": str, "params": dict, "expected": list, "digest": str}


def _validate(entry: Any, where: str) -> dict:
    if not isinstance(entry, dict):
        raise CorruptCorpus(f"{where}: entry is not an object")
    for k, typ in _REQUIRED.items():
        if not isinstance(entry.get(k), typ):
            raise CorruptCorpus(f"{where}: field {k!r} missing or of the wrong type")
    for i, ex in enumerate(entry["expected"]):
        if not isinstance(ex, dict) or not {"name", "probe", "value", "provenance"} <= set(ex):
            raise CorruptCorpus(f"{where}: expectation {i} is malformed")
        if ex["probe"] not in PROBES:
            raise CorruptCorpus(f"{where}: unknown probe {ex['probe']!r}")
    return entry


def load_corpus(directory: Path | str, filter: Optional[str] = None) -> list[dict]:
    d = Path(directory)
    if not d.is_dir():
        raise CorruptCorpus(f"{d} is not a directory")
    out = []
    for path in sorted(d.glob("*.json")):
        try:
            entry = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise CorruptCorpus(f"{path.name}: invalid JSON ({exc})") from None
        _validate(entry, path.name)
        if filter is None or filter in entry["id"]:
            out.append(entry)
    ids = [e["id"] for e in out]
    if len(set(ids)) != len(ids):
        raise CorruptCorpus("duplicate entry ids")
    return sorted(out, key=lambda e: e["id"])


@dataclass
class ExpectationResult:
    entry: str
    name: str
    expected: Any
    got: Any
    provenance: str
    ok: bool

    def to_json(self) -> dict:
        return {
            "entry": self.entry,
            "expectation": self.name,
            "expected": self.expected,
            "got": self.got,
            "provenance": self.provenance,
            "ok": self.ok,
        }


def run_entry(entry: dict) -> list[ExpectationResult]:
    eid = entry["id"]
    try:
        b = build({entry["constructor"]: entry["params"]})
    except ValidationError as exc:
        raise CorruptCorpus(f"{eid}: {exc}") from None
    got_digest = entry_digest(b)
    results = [ExpectationResult(eid, "constructor digest", entry["digest"], got_digest, "regenerated output", got_digest == entry["digest"])]
    for ex in entry["expected"]:
        try:
            got = PROBES[ex["probe"]](b, **(ex.get("args") or {}))
        except (KeyError, TypeError) as exc:
            raise CorruptCorpus(f"{eid}: probe {ex['probe']!r} failed ({exc!r})") from None
        got = json.loads(canonical_dumps(got))
        ok = canonical_dumps(got) == canonical_dumps(ex["value"])
        results.append(ExpectationResult(eid, ex["name"], ex["value"], got, ex["provenance"], ok))
    return results


def run_corpus(entries: list[dict], jobs: int = 1) -> list[ExpectationResult]:
    if jobs > 1 and len(entries) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(run_entry, entries))
    else:
        chunks = [run_entry(e) for e in entries]
    return [r for chunk in chunks for r in chunk]


def _short(v: Any, width: int = 40) -> str:
    s = canonical_dumps(v)
    return s if len(s) <= width else s[: width - 3] + "..."


def format_table(results: list[ExpectationResult]) -> str:
    rows = [("entry", "expectation", "got", "provenance", "status")]
    for r in results:
        status = "pass" if r.ok else f"FAIL (expected {_short(r.expected)})"
        rows.append((r.entry, r.name, _short(r.got), r.provenance, status))
    widths = [max(len(row[i]) for row in rows) for i in range(4)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row[:4], widths)) + "  " + row[4] for row in rows]
    return "\n".join(lines)
