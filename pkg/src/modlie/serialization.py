"""JSON encoding of algebras, modules and example bundles.

Mod-p matrices are stored row-major as flat lists of ints in ``[0, p)``
(nested row arrays are also accepted on input); integer matrices are arrays
of row arrays of decimal strings, so no precision is lost. Output is canonical (sorted keys, fixed separators) so that
regenerated files are byte-identical.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

import numpy as np

from .exactlinalg import IntMatrix, is_prime
from .liealg import ClosureFailure, MatrixLieAlgebra, Subspace
from .repn import LieModule

__all__ = [
    "ValidationError",
    "canonical_dumps",
    "digest",
    "algebra_to_json",
    "algebra_from_json",
    "module_to_json",
    "module_from_json",
    "intmatrix_to_json",
    "intmatrix_from_json",
    "to_jsonable",
]


class ValidationError(ValueError):
    """Input JSON is malformed or violates an invariant."""

    def __init__(self, message: str, path: str = "$"):
        self.path = path
        super().__init__(f"{path}: {message}")

    def to_json(self) -> dict:
        return {"error": "validation", "path": self.path, "message": str(self)}


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def canonical_dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, separators=(",", ":"))


def digest(obj: Any) -> str:
    return hashlib.sha256(canonical_dumps(obj).encode()).hexdigest()


def intmatrix_to_json(m: IntMatrix) -> list[list[str]]:
    return [[str(x) for x in row] for row in m.entries]


def intmatrix_from_json(rows, path: str = "$") -> IntMatrix:
    try:
        return IntMatrix([[int(x) for x in r] for r in rows])
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad integer matrix ({exc})", path) from None


def algebra_to_json(h: Subspace, raw: bool = False) -> dict:
    out = {
        "kind": "algebra",
        "p": h.p,
        "n": h.n,
        "dim": h.dim,
        "basis": [m.ravel().tolist() for m in h.matrices],
        "label": h.label or "",
    }
    if raw:
        out["raw"] = True
    return out


def _require(d: dict, key: str, typ, path: str):
    if not isinstance(d, dict) or key not in d:
        raise ValidationError(f"missing field {key!r}", path)
    v = d[key]
    if typ is int and (isinstance(v, bool) or not isinstance(v, int)):
        raise ValidationError(f"field {key!r} must be an integer", f"{path}.{key}")
    if typ is not int and not isinstance(v, typ):
        raise ValidationError(f"field {key!r} has the wrong type", f"{path}.{key}")
    return v


def _matrix_stack(data, p: int, n: int, path: str) -> np.ndarray:
    try:
        arr = np.array(data, dtype=object)
    except ValueError:
        raise ValidationError("ragged matrix data", path) from None
    if arr.size == 0:
        return np.zeros((0, n, n), dtype=np.int64)
    if arr.ndim == 2 and arr.shape[1] == n * n:
        arr = arr.reshape(-1, n, n)
    if arr.ndim != 3 or arr.shape[1:] != (n, n):
        raise ValidationError(f"expected a list of {n}x{n} matrices, got shape {arr.shape}", path)
    for x in arr.flat:
        if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < p:
            raise ValidationError(f"entry {x!r} is not an integer in [0, {p})", path)
    return arr.astype(np.int64)


def algebra_from_json(d: dict, path: str = "$") -> MatrixLieAlgebra:
    """Load and validate an algebra; non-closed bases are rejected unless ``raw`` is set."""
    p = _require(d, "p", int, path)
    n = _require(d, "n", int, path)
    if not is_prime(p) or p >= 2**31:
        raise ValidationError(f"p = {p} is not a usable prime", f"{path}.p")
    if n < 1:
        raise ValidationError("n must be positive", f"{path}.n")
    basis = _matrix_stack(_require(d, "basis", list, path), p, n, f"{path}.basis")
    raw = bool(d.get("raw", False))
    try:
        h = MatrixLieAlgebra(basis, p, n, label=d.get("label") or None, raw=raw)
    except ClosureFailure as exc:
        raise ValidationError(str(exc), f"{path}.basis") from None
    if h.dim != basis.shape[0]:
        raise ValidationError("basis matrices are linearly dependent", f"{path}.basis")
    return h


def module_to_json(m: LieModule) -> dict:
    return {
        "kind": "module",
        "algebra": algebra_to_json(m.algebra),
        "dim": m.dim,
        "action": [a.ravel().tolist() for a in m.action],
        "label": m.label or "",
    }


def module_from_json(d: dict, path: str = "$") -> LieModule:
    alg_d = _require(d, "algebra", (dict, str), path)
    if isinstance(alg_d, str):
        try:
            alg_d = json.loads(Path(alg_d).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot load algebra file {alg_d!r} ({exc})", f"{path}.algebra") from None
    h = algebra_from_json(alg_d, f"{path}.algebra")
    dim = _require(d, "dim", int, path)
    act = _require(d, "action", list, path)
    if len(act) != h.dim:
        raise ValidationError(f"need {h.dim} action matrices, got {len(act)}", f"{path}.action")
    stack = _matrix_stack(act, h.p, dim, f"{path}.action") if act else np.zeros((0, dim, dim), np.int64)
    try:
        return LieModule(h, stack, label=d.get("label") or None)
    except ValueError as exc:
        raise ValidationError(str(exc), f"{path}.action") from None
