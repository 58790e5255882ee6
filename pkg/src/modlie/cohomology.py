"""Chevalley-Eilenberg cohomology of matrix Lie algebras with module coefficients.

``C^k = Hom(Lambda^k g, V)`` has basis pairs ``(S, a)`` with ``S`` a
k-subset of the algebra basis in lexicographic order and ``a`` a module
basis index; the flat index is ``S_index * dim V + a``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Optional

import numpy as np

from .exactlinalg import FpMatrix, mod_matmul, rank_nullspace
from .repn import IncompatibleAlgebras, LieModule, dual, invariants, tensor

__all__ = [
    "ComplexTooLarge",
    "CochainComplex",
    "CohomologyReport",
    "chevalley_eilenberg",
    "cohomology_dims",
    "cohomology",
    "ext1",
    "MAX_COCHAIN_DIM",
]

MAX_COCHAIN_DIM = 100_000


class ComplexTooLarge(ValueError):
    pass


@dataclass
class CochainComplex:
    module: LieModule
    k_max: int
    space_dims: list[int]
    differentials: list[FpMatrix]  # d^k : C^k -> C^{k+1}, k = 0..k_max

    @property
    def algebra_dim(self) -> int:
        return self.module.algebra.dim

    @property
    def module_dim(self) -> int:
        return self.module.dim


@dataclass
class CohomologyReport:
    dims: list[int]
    ranks: list[int]
    space_dims: list[int]

    @property
    def complex_shapes(self) -> list[tuple[int, int]]:
        return [(self.space_dims[k + 1], self.space_dims[k]) for k in range(len(self.ranks))]

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "ranks": list(self.ranks),
            "complex_shapes": [list(s) for s in self.complex_shapes],
        }


def _sort_sign(m: int, rest: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Sign of moving ``m`` from the front into sorted position among ``rest``."""
    pos = sum(1 for r in rest if r < m)
    return (-1) ** pos, tuple(sorted(rest + (m,)))


def chevalley_eilenberg(m: LieModule, k_max: int = 2) -> CochainComplex:
    """Cochain complex up to ``C^(k_max + 1)``, with ``d^(k+1) d^k = 0`` verified."""
    g = m.algebra.dim
    v, p = m.dim, m.p
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    top = min(k_max + 1, g)
    # C^k = 0 above the algebra dimension
    sizes = [comb(g, k) * v for k in range(k_max + 2)]
    if max(sizes) > MAX_COCHAIN_DIM:
        raise ComplexTooLarge(f"cochain space of dimension {max(sizes)} exceeds {MAX_COCHAIN_DIM}")
    c = m.algebra.structure_constants() if g else np.zeros((0, 0, 0), np.int64)
    rho = m.action
    eye = np.eye(v, dtype=np.int64)
    subsets = [list(itertools.combinations(range(g), k)) for k in range(top + 1)]
    index = [{s: i for i, s in enumerate(ss)} for ss in subsets]
    diffs = []
    for k in range(k_max + 1):
        rows = comb(g, k + 1) * v
        D = np.zeros((rows, sizes[k]), dtype=np.int64)
        if k + 1 <= top:
            for ti, T in enumerate(subsets[k + 1]):
                r0 = ti * v
                for i, t in enumerate(T):
                    S = T[:i] + T[i + 1 :]
                    c0 = index[k][S] * v
                    D[r0 : r0 + v, c0 : c0 + v] += (-1) ** i * rho[t]
                for i, j in itertools.combinations(range(k + 1), 2):
                    rest = T[:i] + T[i + 1 : j] + T[j + 1 :]
                    for mm in np.flatnonzero(c[T[i], T[j]]):
                        mm = int(mm)
                        if mm in rest:
                            continue
                        sign, S = _sort_sign(mm, rest)
                        coef = (-1) ** (i + j) * sign * int(c[T[i], T[j], mm])
                        c0 = index[k][S] * v
                        D[r0 : r0 + v, c0 : c0 + v] += coef * eye
        diffs.append(FpMatrix(np.remainder(D, p), p))
    for k in range(len(diffs) - 1):
        if diffs[k + 1].cols == diffs[k].rows and (diffs[k + 1] @ diffs[k]).array.any():
            raise AssertionError(f"d^{k + 1} d^{k} != 0")
    return CochainComplex(m, k_max, sizes, diffs)


def cohomology_dims(cx: CochainComplex) -> CohomologyReport:
    """``dim H^k = dim C^k - rank d^k - rank d^(k-1)`` for ``k <= k_max``."""
    ranks = [rank_nullspace(d)[0] if d.rows and d.cols else 0 for d in cx.differentials]
    dims = []
    for k in range(cx.k_max + 1):
        dims.append(cx.space_dims[k] - ranks[k] - (ranks[k - 1] if k else 0))
    h0 = invariants(cx.module).dim
    if dims[0] != h0:
        raise AssertionError(f"H^0 from ranks ({dims[0]}) differs from the invariants ({h0})")
    # Euler characteristic of the truncated complex
    K = cx.k_max
    lhs = sum((-1) ** k * dims[k] for k in range(K + 1))
    rhs = sum((-1) ** k * cx.space_dims[k] for k in range(K + 1)) - (-1) ** K * ranks[K]
    if lhs != rhs:
        raise AssertionError("Euler characteristic identity fails")
    return CohomologyReport(dims, ranks, list(cx.space_dims))


def cohomology(m: LieModule, k_max: int = 2) -> CohomologyReport:
    return cohomology_dims(chevalley_eilenberg(m, k_max))


def ext1(a: LieModule, b: LieModule) -> int:
    """``dim Ext^1(a, b) = dim H^1(g, b (x) a^*)``."""
    if a.algebra is not b.algebra and a.algebra != b.algebra:
        raise IncompatibleAlgebras("modules are over different algebras")
    return cohomology(tensor(b, dual(a)), 1).dims[1]
