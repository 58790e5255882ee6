"""Named constructors driven by small JSON specs.

A spec is a one-key object ``{"<constructor>": {params}}``. Module
constructors take their algebra or module argument as a nested spec, e.g.
``{"sym_power": {"module": {"natural": {"classical": {"kind": "sl", "n": 3, "p": 5}}}, "k": 2}}``.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from . import constructions as C
from . import repn as R
from .liealg import MatrixLieAlgebra, Subspace
from .serialization import (
    ValidationError,
    algebra_from_json,
    algebra_to_json,
    module_from_json,
    module_to_json,
)

__all__ = ["Built", "build", "load_document", "with_prime", "CONSTRUCTORS"]


@dataclass
class Built:
    """Result of a constructor: an algebra, a module, or an example bundle."""

    kind: str
    source: Optional[dict]
    algebra: Optional[Subspace] = None
    module: Optional[R.LieModule] = None
    modules: dict[str, R.LieModule] = field(default_factory=dict)
    attachments: dict[str, Any] = field(default_factory=dict)
    name: str = ""
    extra: dict[str, Any] = field(default_factory=dict)

    def pick_module(self, name: Optional[str]) -> R.LieModule:
        if name is None:
            if self.module is not None:
                return self.module
            if len(self.modules) == 1:
                return next(iter(self.modules.values()))
            if self.algebra is not None and not self.modules:
                return R.natural_module(self.algebra)
            raise ValidationError(f"choose a module with --module from {sorted(self.modules)}")
        if name == "natural" and self.algebra is not None:
            return R.natural_module(self.algebra)
        if name not in self.modules:
            raise ValidationError(f"no module {name!r}; available: {sorted(self.modules)}")
        return self.modules[name]

    def to_json(self) -> dict:
        out: dict[str, Any]
        if self.kind == "algebra":
            out = algebra_to_json(self.algebra)
        elif self.kind == "module":
            out = module_to_json(self.module)
        else:
            out = {
                "kind": "example",
                "name": self.name,
                "algebra": algebra_to_json(self.algebra),
                "modules": {k: module_to_json(m) for k, m in self.modules.items()},
                "attachments": self.attachments,
            }
        if self.source is not None:
            out["source"] = self.source
        return out


def _flat(mats) -> list[list[int]]:
    return [np.asarray(m).ravel().tolist() for m in mats]


def _param(params: dict, key: str, default=None, typ=int):
    if key not in params:
        if default is None:
            raise ValidationError(f"missing parameter {key!r}")
        return default
    v = params[key]
    if typ is int and (isinstance(v, bool) or not isinstance(v, int)):
        raise ValidationError(f"parameter {key!r} must be an integer")
    return v


def _c_classical(q: dict) -> Built:
    kind = _param(q, "kind", typ=str)
    h = C.classical(kind, _param(q, "n"), _param(q, "p"))
    return Built("algebra", None, algebra=h)


def _c_witt(q: dict) -> Built:
    W = C.witt_algebra(_param(q, "p"))
    return Built(
        "example",
        None,
        algebra=W.algebra,
        modules={"O1": W.rep_on_o1, "O1/k": W.rep_on_o1_mod_k},
        name=f"witt(p={W.p})",
        attachments={"indices": W.indices, "elements": _flat(W.elements[i] for i in W.indices)},
    )


def _c_witt_sp(q: dict) -> Built:
    p = _param(q, "p")
    W = C.witt_algebra(p)
    G, ok = C.witt_sp_embedding(p)
    return Built(
        "example",
        None,
        algebra=W.algebra,
        modules={"O1/k": W.rep_on_o1_mod_k},
        name=f"witt_sp(p={p})",
        attachments={
            "gram": G.array.tolist(),
            "bivector": C.witt_invariant_bivector(p).array.tolist(),
            "invariant": ok,
        },
    )


def _c_witt_o1_semidirect(q: dict) -> Built:
    return Built("algebra", None, algebra=C.witt_o1_semidirect(_param(q, "p")))


def _c_witt_sl2_o1(q: dict) -> Built:
    p = _param(q, "p")
    W = C.witt_algebra(p)
    triple = [W.on_o1[i] for i in (-1, 0, 1)]
    sub = MatrixLieAlgebra(triple, p, p, label="sl2 in W1 on O1")
    return Built("module", None, module=R.natural_module(sub))


def _c_fibonacci(q: dict) -> Built:
    lam = tuple(q.get("lambdas", (0, 0, 0)))
    ex = C.fibonacci_example(_param(q, "n", 5), _param(q, "p", 13), lam)
    a = ex.attachments
    att = {
        "block_sizes": list(a["block_sizes"]),
        "toral_element": a["toral_element"].ravel().tolist(),
        "toral_diagonal": [str(x) for x in a["toral_diagonal"]],
        "basis": _flat(a["basis"]),
        "integer_basis": [[str(x) for x in np.asarray(m).ravel()] for m in a["integer_basis"]],
        "expected_divisors": {k: str(v) for k, v in a["expected_divisors"].items()},
        "lambdas": list(a["lambdas"]),
        "fibonacci_index": a["fibonacci_index"],
    }
    return Built("example", None, algebra=ex.algebra, name=ex.name, attachments=att, extra={"example": ex})


def _c_smooth_unipotent(q: dict) -> Built:
    ex = C.smooth_unipotent_example(_param(q, "p"))
    a = ex.attachments
    att = {
        "normalizer": algebra_to_json(a["normalizer"]),
        "borel": algebra_to_json(a["borel"]),
        "normalizer_in_borel": bool(a["normalizer_in_borel"]),
    }
    return Built("example", None, algebra=ex.algebra, name=ex.name, attachments=att, extra={"example": ex})


def _c_sl2_small_rep(q: dict) -> Built:
    ex = C.sl2_small_rep_example(_param(q, "p"), _param(q, "seed", 0))
    a = ex.attachments
    M = a["module_M"]
    att = {
        "module_M": algebra_to_json(M),
        "M_factor_dims": list(a["M_factor_dims"]),
        "M_semisimple": bool(a["M_semisimple"]),
        "normalizer_of_M": algebra_to_json(a["normalizer_of_M"]),
        "h_in_normalizer_of_M": bool(ex.algebra <= a["normalizer_of_M"]),
    }
    V = R.ambient_adjoint_module(ex.algebra)
    mod_M = V.submodule(M.echelon)
    mod_M.label = "M"
    return Built("example", None, algebra=ex.algebra, modules={"M": mod_M}, name=ex.name, attachments=att, extra={"example": ex})


def _c_sl2_simple(q: dict) -> Built:
    return Built("module", None, module=R.sl2_simple(_param(q, "m"), _param(q, "p")))


def _c_inline_algebra(q: dict) -> Built:
    return Built("algebra", None, algebra=algebra_from_json(q, "$.algebra"))


def _sub_algebra(spec) -> MatrixLieAlgebra:
    b = build(spec)
    if b.algebra is None:
        raise ValidationError("expected an algebra spec")
    return b.algebra


def _sub_module(spec) -> R.LieModule:
    return build(spec).pick_module(None)


def _c_natural(q: dict) -> Built:
    return Built("module", None, module=R.natural_module(_sub_algebra(q)))


def _c_trivial(q: dict) -> Built:
    dim = q.get("dim", 1)
    alg = q.get("algebra", q)
    return Built("module", None, module=R.trivial_module(_sub_algebra(alg), dim))


def _c_adjoint(q: dict) -> Built:
    return Built("module", None, module=R.adjoint_module(_sub_algebra(q)))


def _c_dual(q: dict) -> Built:
    return Built("module", None, module=R.dual(_sub_module(q)))


def _c_tensor(q: dict) -> Built:
    return Built("module", None, module=R.tensor(_sub_module(q["left"]), _sub_module(q["right"])))


def _c_sym_power(q: dict) -> Built:
    return Built("module", None, module=R.sym_power(_sub_module(q["module"]), _param(q, "k")))


def _c_ext_power(q: dict) -> Built:
    return Built("module", None, module=R.ext_power(_sub_module(q["module"]), _param(q, "k")))


def _c_direct_sum(q: dict) -> Built:
    mods = [_sub_module(s) for s in q["modules"]]
    return Built("module", None, module=R.direct_sum(*mods))


CONSTRUCTORS: dict[str, Callable[[dict], Built]] = {
    "classical": _c_classical,
    "witt": _c_witt,
    "witt_sp": _c_witt_sp,
    "witt_o1_semidirect": _c_witt_o1_semidirect,
    "witt_sl2_o1": _c_witt_sl2_o1,
    "fibonacci": _c_fibonacci,
    "smooth_unipotent": _c_smooth_unipotent,
    "sl2_small_rep": _c_sl2_small_rep,
    "sl2_simple": _c_sl2_simple,
    "algebra": _c_inline_algebra,
    "natural": _c_natural,
    "trivial": _c_trivial,
    "adjoint": _c_adjoint,
    "dual": _c_dual,
    "tensor": _c_tensor,
    "sym_power": _c_sym_power,
    "ext_power": _c_ext_power,
    "direct_sum": _c_direct_sum,
}

_EXPECTED = (
    ValueError,
    KeyError,
    TypeError,
    ArithmeticError,
)


def build(spec: Any) -> Built:
    """Run the constructor named by ``spec``; bad parameters raise :class:`ValidationError`."""
    if not isinstance(spec, dict) or len(spec) != 1:
        raise ValidationError("a spec is an object with exactly one constructor key")
    (name, params), = spec.items()
    if name not in CONSTRUCTORS:
        raise ValidationError(f"unknown constructor {name!r}; known: {sorted(CONSTRUCTORS)}")
    if not isinstance(params, dict):
        raise ValidationError(f"parameters of {name!r} must be an object")
    try:
        out = CONSTRUCTORS[name](params)
    except ValidationError:
        raise
    except R.SearchExhausted:
        raise
    except _EXPECTED as exc:
        raise ValidationError(f"{name}: {exc}") from None
    out.source = copy.deepcopy(spec)
    return out


def load_document(doc: Any) -> Built:
    """Accept either a constructor spec or a file previously written by ``construct``."""
    if isinstance(doc, dict) and "kind" not in doc:
        # bare documents in the plain algebra / module formats
        if {"p", "n", "basis"} <= set(doc):
            doc = {**doc, "kind": "algebra"}
        elif {"algebra", "dim", "action"} <= set(doc):
            doc = {**doc, "kind": "module"}
    if isinstance(doc, dict) and "kind" in doc:
        kind = doc["kind"]
        src = doc.get("source")
        if kind == "algebra":
            return Built("algebra", src, algebra=algebra_from_json(doc))
        if kind == "module":
            return Built("module", src, module=module_from_json(doc))
        if kind == "example":
            alg = algebra_from_json(doc.get("algebra"), "$.algebra")
            mods = {k: module_from_json(v, f"$.modules.{k}") for k, v in (doc.get("modules") or {}).items()}
            return Built("example", src, algebra=alg, modules=mods, attachments=doc.get("attachments") or {}, name=doc.get("name", ""))
        raise ValidationError(f"unknown document kind {kind!r}", "$.kind")
    return build(doc)


def with_prime(spec: Any, p: int) -> Any:
    """Copy of ``spec`` with every ``"p"`` parameter replaced."""
    if isinstance(spec, dict):
        return {k: (p if k == "p" and isinstance(v, int) else with_prime(v, p)) for k, v in spec.items()}
    if isinstance(spec, list):
        return [with_prime(v, p) for v in spec]
    return spec
