"""``modlie`` command line: construct, analyze, corpus.

Exit codes: 0 finished (whatever the mathematical verdict), 1 corpus
mismatch, 2 invalid input or I/O failure, 3 a randomised search ran out of
attempts. Human-readable summaries go to stdout; JSON goes to ``--out``
(or to stdout alone with ``--json``).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np

from .cohomology import ComplexTooLarge, cohomology, ext1
from . import repn as R
from .constructions import classical
from .corpus import CorruptCorpus, format_table, load_corpus, regenerate, run_corpus
from .liealg import centralizer, normalizer
from .registry import Built, build, load_document, with_prime
from .serialization import ValidationError, algebra_to_json, canonical_dumps
from .smoothness import fibonacci_conjugate_checks, smoothness_report

EXIT_OK, EXIT_MISMATCH, EXIT_VALIDATION, EXIT_SEARCH = 0, 1, 2, 3


def _read_json(arg: str) -> Any:
    text = arg if arg.lstrip().startswith("{") else None
    if text is None:
        try:
            text = Path(arg).read_text()
        except OSError as exc:
            raise ValidationError(f"cannot read {arg}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _load(arg: str, p: Optional[int] = None) -> Built:
    doc = _read_json(arg)
    if p is None:
        return load_document(doc)
    spec = doc.get("source") if isinstance(doc, dict) and "kind" in doc else doc
    if spec is None:
        raise ValidationError("--p needs a constructor spec or a file written by construct")
    return build(with_prime(spec, p))


def _emit(args, payload: dict, summary: str) -> None:
    text = canonical_dumps(payload) + "\n"
    if args.json:
        sys.stdout.write(text)
        return
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            raise ValidationError(f"cannot write {args.out}: {exc.strerror}") from None
    print(summary)


# ---------------------------------------------------------------------------
# construct


def cmd_construct(args) -> int:
    spec = _read_json(args.spec)
    if args.p is not None:
        spec = with_prime(spec, args.p)
    b = build(spec)
    doc = b.to_json()
    if args.out is None and not args.json:
        args.json = True
    parts = [f"constructed {b.kind}"]
    if b.algebra is not None:
        parts.append(f"algebra of dim {b.algebra.dim} in gl_{b.algebra.n} over F_{b.algebra.p}")
    if b.module is not None:
        parts.append(f"module of dim {b.module.dim} over an algebra of dim {b.module.algebra.dim}")
    for name, m in b.modules.items():
        parts.append(f"module {name} of dim {m.dim}")
    _emit(args, doc, "; ".join(parts))
    return EXIT_OK


# ---------------------------------------------------------------------------
# analyze


def _ambient(args, b: Built):
    n, p = b.algebra.n, b.algebra.p
    if args.ambient in ("gl", "sl"):
        return classical(args.ambient, n, p)
    g = _load(args.ambient).algebra
    if g is None or g.n != n or g.p != p:
        raise ValidationError("ambient algebra must live in the same gl_n over the same field")
    return g


def _analyze_normalizer(args, b: Built):
    if b.algebra is None:
        raise ValidationError("normalizer needs an algebra")
    g = _ambient(args, b)
    h = b.algebra
    nrm = normalizer(g, h)
    cen = centralizer(g, h)
    rep = {
        "kind": "normalizer",
        "p": h.p,
        "n": h.n,
        "dim_h": h.dim,
        "ambient_dim": g.dim,
        "dim_normalizer": nrm.dim,
        "dim_centralizer": cen.dim,
        "h_in_normalizer": bool(h <= nrm),
        "normalizer": algebra_to_json(nrm),
    }
    return rep, f"dim n_g(h) = {nrm.dim}, dim c_g(h) = {cen.dim} (dim h = {h.dim}, dim g = {g.dim})"


def _analyze_smoothness(args, b: Built):
    if b.algebra is None:
        raise ValidationError("smoothness needs an algebra")
    g = _ambient(args, b)
    h = b.algebra
    basis = None
    if "basis" in b.attachments:
        basis = [np.array(v, dtype=np.int64).reshape(h.n, h.n) for v in b.attachments["basis"]]
    checks = None
    src = b.source or {}
    if "fibonacci" in src and not args.no_conjugates:
        q = src["fibonacci"]
        checks = fibonacci_conjugate_checks(q.get("n", 5), h.p, q.get("lambdas", (0, 0, 0)), ts=(1,))
    r = smoothness_report(g, h, basis=basis, conjugate_checks=checks)
    rep = {"kind": "smoothness", "p": h.p, "n": h.n, "dim_h": h.dim}
    rep.update(r.to_json(args.emit_witness))
    lines = [f"verdict: {r.verdict}", f"dim Lie normaliser = {r.dim_lie_normalizer}, nilpotent part generates {r.generated_dim}, torus dim {r.torus_dim}"]
    if r.torus_part is not None:
        t = r.torus_part
        lines.append(f"relation matrix {t.relation_matrix.rows}x{t.relation_matrix.cols}: nullity mod p {t.modp_nullity}, over Z {t.integral_nullity}, obstructed = {t.obstructed}")
    lines += [f"note: {n}" for n in r.notes]
    return rep, "\n".join(lines)


def _analyze_cohomology(args, b: Built):
    m = b.pick_module(args.module)
    r = cohomology(m, args.kmax)
    rep = {"kind": "cohomology", "p": m.p, "algebra_dim": m.algebra.dim, "module_dim": m.dim, "k_max": args.kmax}
    rep.update(r.to_json())
    return rep, f"dim H^k for k = 0..{args.kmax}: {r.dims}"


def _analyze_semisimplicity(args, b: Built):
    m = b.pick_module(args.module)
    cs = R.composition_series(m, args.seed)
    J = R.jacobson_radical(m, args.seed, cs)
    rep = {
        "kind": "semisimplicity",
        "p": m.p,
        "algebra_dim": m.algebra.dim,
        "module_dim": m.dim,
        "semisimple": J.dim == 0,
        "factor_dims": cs.factor_dims,
        "absolutely_irreducible": list(cs.absolutely_irreducible),
        "jacobson_radical_dim": J.dim,
    }
    return rep, f"semisimple = {J.dim == 0}; composition factor dims {cs.factor_dims}"


_ANALYZERS = {
    "normalizer": _analyze_normalizer,
    "smoothness": _analyze_smoothness,
    "cohomology": _analyze_cohomology,
    "semisimplicity": _analyze_semisimplicity,
}


def cmd_analyze(args) -> int:
    b = _load(args.input, args.p)
    rep, summary = _ANALYZERS[args.kind](args, b)
    rep["seed"] = args.seed
    _emit(args, rep, summary)
    return EXIT_OK


# ---------------------------------------------------------------------------
# corpus


def cmd_corpus(args) -> int:
    if args.regenerate:
        paths = regenerate(args.directory)
        print(f"wrote {len(paths)} entries to {args.directory}")
        return EXIT_OK
    try:
        entries = load_corpus(args.directory, args.filter)
        results = run_corpus(entries, args.jobs)
    except CorruptCorpus as exc:
        print(json.dumps({"error": "corrupt corpus", "message": str(exc)}), file=sys.stderr)
        return EXIT_VALIDATION
    failed = [r for r in results if not r.ok]
    payload = {
        "kind": "corpus",
        "entries": sorted({r.entry for r in results}),
        "results": [r.to_json() for r in results],
        "passed": len(results) - len(failed),
        "failed": len(failed),
    }
    summary = format_table(results) + f"\n{len(results) - len(failed)} passed, {len(failed)} failed"
    _emit(args, payload, summary)
    return EXIT_MISMATCH if failed else EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="modlie", description="Modular matrix Lie algebra computations.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON result to this file")
    common.add_argument("--json", action="store_true", help="print the JSON result to stdout instead of a summary")
    common.add_argument("--seed", type=int, default=0, help="seed for randomised searches (default 0)")
    common.add_argument("--p", type=int, default=None, help="rebuild the input over F_p")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", parents=[common], help="build an algebra, module or example bundle")
    c.add_argument("spec", help="constructor spec: a JSON file or an inline JSON object")
    c.set_defaults(func=cmd_construct)

    a = sub.add_parser("analyze", parents=[common], help="run an analysis on an algebra or module")
    a.add_argument("kind", choices=sorted(_ANALYZERS))
    a.add_argument("input", help="file written by construct, or a constructor spec")
    a.add_argument("--ambient", default="gl", help="gl, sl, or an algebra spec/file (default gl)")
    a.add_argument("--module", default=None, help="module name inside an example bundle")
    a.add_argument("--kmax", type=int, default=2, help="top cohomological degree (default 2)")
    a.add_argument("--emit-witness", action="store_true", help="include the unliftable toral vector")
    a.add_argument("--no-conjugates", action="store_true", help="skip the sampled centraliser-conjugate checks")
    a.set_defaults(func=cmd_analyze)

    k = sub.add_parser("corpus", parents=[common], help="re-check the example corpus")
    k.add_argument("directory", nargs="?", default="corpus")
    k.add_argument("--filter", default=None, help="only entries whose id contains this string")
    k.add_argument("--jobs", type=int, default=1, help="worker processes")
    k.add_argument("--regenerate", action="store_true", help="rewrite the corpus from the built-in templates")
    k.set_defaults(func=cmd_corpus)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(json.dumps(exc.to_json()), file=sys.stderr)
        return EXIT_VALIDATION
    except ComplexTooLarge as exc:
        print(json.dumps({"error": "validation", "path": "$", "message": str(exc)}), file=sys.stderr)
        return EXIT_VALIDATION
    except R.SearchExhausted as exc:
        print(json.dumps({"error": "search exhausted", "message": str(exc)}), file=sys.stderr)
        return EXIT_SEARCH


if __name__ == "__main__":
    sys.exit(main())
