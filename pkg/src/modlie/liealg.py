"""Matrix Lie algebras over F_p.

A subspace of ``gl_n`` is stored through the reduced echelon form of its
vectorised basis (row-major ``vec``), so two subspaces are equal exactly
when their stored bases are. Brackets are evaluated in batches with
broadcast matrix products.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import polyfp
from .exactlinalg import (
    EchelonBasis,
    FpMatrix,
    _check_modulus,
    kernel_intersection,
    mod_matmul,
    nullspace,
    rref,
)

__all__ = [
    "Subspace",
    "MatrixLieAlgebra",
    "ClosureFailure",
    "DegenerateForm",
    "SeriesResult",
    "bracket",
    "batch_bracket",
    "lie_closure",
    "p_closure",
    "normalizer",
    "centralizer",
    "center",
    "series",
    "jordan_decomposition",
    "is_semisimple_element",
    "is_toral",
    "trace_form_gram",
    "invariant_complement",
    "span_of_products",
]

MatrixLike = Union[FpMatrix, np.ndarray, Sequence[Sequence[int]]]


class ClosureFailure(ValueError):
    """A basis that was supposed to be bracket-closed is not."""


class DegenerateForm(ValueError):
    """The trace form is degenerate on the subalgebra."""


def _as_stack(mats, p: int, n: Optional[int] = None) -> np.ndarray:
    if isinstance(mats, np.ndarray):
        arr = mats
    else:
        mats = list(mats)
        if not mats:
            if n is None:
                raise ValueError("empty generating set needs an explicit size n")
            return np.zeros((0, n, n), dtype=np.int64)
        arr = np.stack([m.array if isinstance(m, FpMatrix) else np.asarray(m, dtype=np.int64) for m in mats])
    arr = np.remainder(np.asarray(arr, dtype=np.int64), p)
    if arr.ndim == 2:
        if n is None:
            n = int(round(arr.shape[1] ** 0.5))
        arr = arr.reshape(arr.shape[0], n, n)
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise ValueError("expected a stack of square matrices")
    return arr


def bracket(x: FpMatrix, y: FpMatrix) -> FpMatrix:
    """Commutator ``xy - yx``."""
    if x.p != y.p:
        raise ValueError(f"modulus mismatch: {x.p} vs {y.p}")
    if x.shape != y.shape or x.rows != x.cols:
        raise ValueError(f"bracket needs equal square shapes, got {x.shape} and {y.shape}")
    return x @ y - y @ x


def batch_bracket(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Brackets of stacks, broadcasting like ``np.matmul``."""
    return np.remainder(mod_matmul(a, b, p) - mod_matmul(b, a, p), p)


class Subspace:
    """Subspace of ``n x n`` matrices over F_p with a canonical basis."""

    def __init__(self, gens, p: int, n: Optional[int] = None, label: Optional[str] = None):
        p = _check_modulus(p)
        stack = _as_stack(gens, p, n)
        self.p = p
        self.n = stack.shape[1] if n is None else n
        self.echelon = EchelonBasis(stack.reshape(stack.shape[0], self.n * self.n), p, self.n * self.n)
        self.label = label

    @classmethod
    def _from_echelon(cls, ech: EchelonBasis, n: int, label: Optional[str] = None, **kw):
        obj = cls.__new__(cls)
        obj.p, obj.n, obj.echelon, obj.label = ech.p, n, ech, label
        for k, v in kw.items():
            setattr(obj, k, v)
        return obj

    @classmethod
    def zero(cls, n: int, p: int) -> "Subspace":
        return cls(np.zeros((0, n, n), dtype=np.int64), p, n)

    @property
    def dim(self) -> int:
        return self.echelon.dim

    @property
    def vectors(self) -> np.ndarray:
        return self.echelon.rows

    @property
    def matrices(self) -> np.ndarray:
        return self.echelon.rows.reshape(-1, self.n, self.n)

    @property
    def basis(self) -> list[FpMatrix]:
        return [FpMatrix._wrap(m, self.p) for m in self.matrices]

    def _vec(self, x) -> np.ndarray:
        if isinstance(x, FpMatrix):
            x = x.array
        return np.remainder(np.asarray(x, dtype=np.int64), self.p).reshape(-1, self.n * self.n)

    def contains(self, x: MatrixLike) -> bool:
        return self.echelon.contains_all(self._vec(x))

    def contains_all(self, xs) -> bool:
        return self.echelon.contains_all(_as_stack(xs, self.p, self.n).reshape(-1, self.n * self.n))

    def coords(self, x: MatrixLike) -> Optional[np.ndarray]:
        return self.echelon.coords(self._vec(x)[0])

    def residue(self, stack: np.ndarray) -> np.ndarray:
        """Reduce a stack of matrices modulo the span (returned as vectors)."""
        return self.echelon.residue(np.asarray(stack).reshape(-1, self.n * self.n))

    def _compatible(self, other: "Subspace") -> None:
        if self.p != other.p or self.n != other.n:
            raise ValueError("subspaces live in different ambients")

    def __le__(self, other: "Subspace") -> bool:
        self._compatible(other)
        return self.echelon <= other.echelon

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.p == other.p and self.n == other.n and self.echelon == other.echelon

    def __hash__(self) -> int:
        return hash((self.n, self.echelon))

    def __add__(self, other: "Subspace") -> "Subspace":
        self._compatible(other)
        return Subspace._from_echelon(self.echelon.extend(other.vectors), self.n)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._compatible(other)
        return Subspace._from_echelon(self.echelon.intersect(other.echelon), self.n)

    def as_subspace(self) -> "Subspace":
        return Subspace._from_echelon(self.echelon, self.n, self.label)

    def __repr__(self) -> str:
        name = f" {self.label!r}" if self.label else ""
        return f"{type(self).__name__}{name}(p={self.p}, n={self.n}, dim={self.dim})"

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "basis": [m.reshape(-1).tolist() for m in self.matrices],
            "label": self.label or "",
        }


class MatrixLieAlgebra(Subspace):
    """Bracket-closed subspace of ``gl_n``.

    Closure is verified at construction unless ``raw=True``; a failed check
    raises :class:`ClosureFailure` naming one offending pair.
    """

    def __init__(self, gens, p: int, n: Optional[int] = None, label: Optional[str] = None, raw: bool = False):
        super().__init__(gens, p, n, label)
        self.raw = raw
        self._structure: Optional[np.ndarray] = None
        if not raw:
            bad = _first_unclosed_pair(self)
            if bad is not None:
                raise ClosureFailure(f"bracket of basis elements {bad} leaves the span")

    @classmethod
    def from_subspace(cls, s: Subspace, label: Optional[str] = None, check: bool = True) -> "MatrixLieAlgebra":
        obj = cls._from_echelon(s.echelon, s.n, label or s.label, raw=not check, _structure=None)
        if check:
            bad = _first_unclosed_pair(obj)
            if bad is not None:
                raise ClosureFailure(f"bracket of basis elements {bad} leaves the span")
        return obj

    @classmethod
    def _trusted(cls, ech: EchelonBasis, n: int, label: Optional[str] = None) -> "MatrixLieAlgebra":
        return cls._from_echelon(ech, n, label, raw=False, _structure=None)

    def structure_constants(self) -> np.ndarray:
        """``c[i, j, k]`` with ``[b_i, b_j] = sum_k c[i, j, k] b_k``."""
        if self._structure is None:
            d = self.dim
            M = self.matrices
            out = np.zeros((d, d, d), dtype=np.int64)
            piv = self.echelon.pivots
            for i in range(d):
                br = batch_bracket(M[i][None], M, self.p).reshape(d, -1)
                out[i] = br[:, piv]
            self._structure = out
            self._structure.setflags(write=False)
        return self._structure

    def bracket_coords(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Bracket of coordinate vectors (last axis) in this basis."""
        c = self.structure_constants()
        return np.remainder(np.einsum("...i,...j,ijk->...k", u, v, c), self.p)

    def ad_matrices(self) -> np.ndarray:
        """Adjoint action: ``ad[i]`` is the matrix of ``ad(b_i)`` (column convention)."""
        c = self.structure_constants()
        return np.ascontiguousarray(np.transpose(c, (0, 2, 1)))


def _first_unclosed_pair(h: Subspace, chunk: int = 16) -> Optional[tuple[int, int]]:
    M = h.matrices
    d = M.shape[0]
    for i0 in range(0, d, chunk):
        A = M[i0 : i0 + chunk]
        # antisymmetry: partners with index below i0 were already tested
        br = batch_bracket(A[:, None], M[None, i0:], h.p)
        res = h.residue(br).reshape(A.shape[0], d - i0, -1)
        bad = np.argwhere(res.any(axis=2))
        if bad.size:
            i, j = bad[0]
            return (i0 + int(i), i0 + int(j))
    return None


def _as_gens(gens, p: Optional[int], n: Optional[int]) -> tuple[np.ndarray, int]:
    if isinstance(gens, Subspace):
        return gens.matrices, gens.p
    gens = list(gens)
    if p is None:
        ps = {g.p for g in gens if isinstance(g, FpMatrix)}
        if len(ps) != 1:
            raise ValueError("cannot infer the modulus; pass p explicitly")
        p = ps.pop()
    return _as_stack(gens, p, n), p


def _saturate(ech: EchelonBasis, fresh: np.ndarray, step, p: int, n: int) -> EchelonBasis:
    """Add images of ``step`` on new vectors until nothing new appears."""
    while fresh.shape[0]:
        imgs = step(ech, fresh.reshape(-1, n, n))
        if not imgs.shape[0]:
            break
        imgs = imgs.reshape(imgs.shape[0], n * n)
        res = ech.residue(imgs)
        res = res[res.any(axis=1)]
        if not res.shape[0]:
            break
        R, _ = rref(res, p)
        ech = ech.extend(R)
        # the genuinely new directions are the residues of R modulo the old span
        fresh = R
    return ech


def lie_closure(gens, p: Optional[int] = None, n: Optional[int] = None, label: Optional[str] = None) -> MatrixLieAlgebra:
    """Smallest bracket-closed subspace containing ``gens``."""
    stack, p = _as_gens(gens, p, n)
    n = stack.shape[1]
    ech = EchelonBasis(stack.reshape(stack.shape[0], n * n), p, n * n)
    ech = _close_brackets(ech, ech.rows, p, n)
    return MatrixLieAlgebra._trusted(ech, n, label)


def _close_brackets(ech: EchelonBasis, fresh: np.ndarray, p: int, n: int) -> EchelonBasis:
    def step(cur: EchelonBasis, new: np.ndarray) -> np.ndarray:
        allm = cur.rows.reshape(-1, n, n)
        out = []
        for x in new:
            out.append(batch_bracket(x[None], allm, p))
        return np.concatenate(out) if out else np.zeros((0, n, n), dtype=np.int64)

    return _saturate(ech, fresh, step, p, n)


def _matrix_power(x: np.ndarray, k: int, p: int) -> np.ndarray:
    return (FpMatrix._wrap(x, p) ** k).array


def p_closure(gens, p: Optional[int] = None, n: Optional[int] = None, label: Optional[str] = None) -> MatrixLieAlgebra:
    """Smallest subalgebra closed under brackets and ``x -> x**p``.

    The p-th powers of a basis suffice after bracket closure, because
    ``(x + y)**p - x**p - y**p`` is a Lie polynomial in ``x`` and ``y``.
    """
    stack, p = _as_gens(gens, p, n)
    n = stack.shape[1]
    ech = EchelonBasis(stack.reshape(stack.shape[0], n * n), p, n * n)
    ech = _close_brackets(ech, ech.rows, p, n)
    while True:
        powers = np.stack([_matrix_power(m, p, p) for m in ech.rows.reshape(-1, n, n)]) if ech.dim else np.zeros((0, n, n), np.int64)
        res = ech.residue(powers.reshape(powers.shape[0], n * n))
        res = res[res.any(axis=1)]
        if not res.shape[0]:
            break
        R, _ = rref(res, p)
        ech = _close_brackets(ech.extend(R), R, p, n)
    return MatrixLieAlgebra._trusted(ech, n, label)


def _kernel_sub(g: Subspace, h: Subspace, relative: bool) -> EchelonBasis:
    """Coordinates (in g's basis) of x with [x, b] in h (or = 0) for all b in h."""
    if g.p != h.p or g.n != h.n:
        raise ValueError("g and h live in different ambients")
    p, n = g.p, g.n
    G = g.matrices
    target = h if relative else Subspace.zero(n, p)
    comp = target.echelon.complement_pivots()

    def mk(b):
        def f(K):
            X = mod_matmul(K, G.reshape(G.shape[0], -1), p).reshape(-1, n, n)
            br = batch_bracket(X, b[None], p).reshape(K.shape[0], -1)
            return target.echelon.residue(br)[:, comp]
        return f

    K = kernel_intersection((mk(b) for b in h.matrices), p, g.dim)
    vecs = mod_matmul(K, G.reshape(G.shape[0], -1), p) if K.shape[0] else np.zeros((0, n * n), np.int64)
    return EchelonBasis(vecs, p, n * n)


def normalizer(g: Subspace, h: Subspace, label: Optional[str] = None) -> MatrixLieAlgebra:
    """``{x in g : [x, h] <= h}``; ``h`` need not lie in ``g``."""
    return MatrixLieAlgebra._trusted(_kernel_sub(g, h, True), g.n, label)


def centralizer(g: Subspace, h: Subspace, label: Optional[str] = None) -> MatrixLieAlgebra:
    return MatrixLieAlgebra._trusted(_kernel_sub(g, h, False), g.n, label)


def center(h: Subspace) -> Subspace:
    return centralizer(h, h).as_subspace()


def span_of_products(a: Subspace, b: Subspace) -> Subspace:
    """Span of all brackets ``[x, y]`` with ``x`` in ``a`` and ``y`` in ``b``."""
    a._compatible(b)
    if not a.dim or not b.dim:
        return Subspace.zero(a.n, a.p)
    br = batch_bracket(a.matrices[:, None], b.matrices[None, :], a.p)
    return Subspace(br.reshape(-1, a.n, a.n), a.p, a.n)


@dataclass(frozen=True)
class SeriesResult:
    kind: str
    dims: tuple[int, ...]

    @property
    def reaches_zero(self) -> bool:
        return self.dims[-1] == 0

    @property
    def solvable(self) -> bool:
        if self.kind != "derived":
            raise AttributeError("solvability is read off the derived series")
        return self.reaches_zero

    @property
    def nilpotent(self) -> bool:
        if self.kind != "lower_central":
            raise AttributeError("nilpotency is read off the lower central series")
        return self.reaches_zero


def series(h: Subspace, kind: str = "derived") -> SeriesResult:
    """Derived or lower central series, as the chain of dimensions until it stabilises."""
    if kind not in ("derived", "lower_central"):
        raise ValueError(f"unknown series kind {kind!r}")
    dims = [h.dim]
    cur = h.as_subspace() if isinstance(h, Subspace) else h
    while cur.dim:
        nxt = span_of_products(cur, cur) if kind == "derived" else span_of_products(h, cur)
        dims.append(nxt.dim)
        if nxt.dim == cur.dim:
            break
        cur = nxt
    return SeriesResult(kind, tuple(dims))


def jordan_decomposition(x: FpMatrix) -> tuple[FpMatrix, FpMatrix]:
    """Additive Jordan decomposition ``x = s + n`` with ``s`` a polynomial in ``x``."""
    if x.rows != x.cols:
        raise ValueError("Jordan decomposition of a non-square matrix")
    p, a = x.p, x.array
    f = polyfp.radical(polyfp.charpoly(a, p), p)
    df = polyfp.derivative(f, p)
    s = a.copy()
    for _ in range(2 * max(a.shape[0], 1).bit_length() + 2):
        fs = polyfp.eval_matrix(f, s, p)
        if not fs.any():
            break
        inv = FpMatrix._wrap(polyfp.eval_matrix(df, s, p), p).inverse().array
        s = np.remainder(s - mod_matmul(fs, inv, p), p)
    else:
        raise ArithmeticError("Newton iteration for the semisimple part did not converge")
    S = FpMatrix._wrap(s, p)
    return S, x - S


def is_semisimple_element(x: FpMatrix) -> bool:
    """Squarefree minimal polynomial, tested as ``rad(charpoly)(x) == 0``."""
    f = polyfp.radical(polyfp.charpoly(x.array, x.p), x.p)
    return not polyfp.eval_matrix(f, x.array, x.p).any()


def is_toral(h: Subspace) -> bool:
    """Abelian, closed under p-th powers and spanned by semisimple elements."""
    if not h.dim:
        return True
    if span_of_products(h, h).dim:
        return False
    p = h.p
    for m in h.matrices:
        if not h.contains(_matrix_power(m, p, p)):
            return False
        if not is_semisimple_element(FpMatrix._wrap(m, p)):
            return False
    return True


def trace_form_gram(h: Subspace) -> tuple[FpMatrix, int]:
    """Gram matrix ``tr(b_i b_j)`` of the trace form and its rank."""
    V = h.vectors
    Vt = np.ascontiguousarray(np.transpose(h.matrices, (0, 2, 1))).reshape(h.dim, h.n * h.n)
    G = FpMatrix._wrap(mod_matmul(V, Vt.T, h.p), h.p)
    return G, G.rank() if h.dim else 0


def invariant_complement(h: Subspace) -> Subspace:
    """Trace-orthogonal complement ``m`` of ``h`` in ``gl_n``, with ``[h, m] <= m`` checked."""
    p, n = h.p, h.n
    _, rk = trace_form_gram(h)
    if rk < h.dim:
        raise DegenerateForm(f"trace form has rank {rk} on a {h.dim}-dimensional subalgebra")
    # tr(y b) = vec(y) . vec(b^T)
    Bt = np.ascontiguousarray(np.transpose(h.matrices, (0, 2, 1))).reshape(h.dim, h.n * h.n)
    K = nullspace(Bt, p) if h.dim else np.eye(n * n, dtype=np.int64)
    m = Subspace(K.reshape(-1, n, n), p, n)
    if m.dim + h.dim != n * n or (m + h).dim != n * n:
        raise DegenerateForm("orthogonal complement is not transverse")
    if m.dim and h.dim and not m.contains_all(span_of_products(h, m).matrices):
        raise DegenerateForm("orthogonal complement is not h-stable")
    return m
