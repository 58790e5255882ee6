"""Exact dense linear algebra over prime fields and over the integers.

Matrices over F_p are numpy ``int64`` arrays with entries in ``[0, p)``.
Products go through float64 BLAS whenever the inner dimension keeps every
partial sum below 2**53, and through ``int64`` otherwise. Integer matrices
use Python ints throughout, so nothing in the Smith normal form can
overflow.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "FpMatrix",
    "IntMatrix",
    "SmithForm",
    "EchelonBasis",
    "is_prime",
    "mod_matmul",
    "rref",
    "rank_nullspace",
    "solve_linear",
    "smith_normal_form",
    "int_kernel",
    "hermite_normal_form",
    "bareiss_rank",
    "bareiss_det",
]

_MAX_P = 2**31


def is_prime(p: int) -> bool:
    """Trial-division primality test."""
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def _check_modulus(p: int) -> int:
    p = int(p)
    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    if p >= _MAX_P:
        raise ValueError(f"modulus {p} too large (must be < 2**31)")
    return p


def mod_matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """``a @ b mod p`` for residue arrays; batched like ``np.matmul``."""
    inner = a.shape[-1]
    if inner == 0:
        shape = np.broadcast_shapes(a.shape[:-2], b.shape[:-2]) + (a.shape[-2], b.shape[-1])
        return np.zeros(shape, dtype=np.int64)
    if inner * (p - 1) ** 2 < 2**53:
        out = np.matmul(a.astype(np.float64), b.astype(np.float64))
        return np.remainder(out, p).astype(np.int64)
    if inner * (p - 1) ** 2 < 2**63:
        return np.remainder(np.matmul(a, b), p)
    out = np.matmul(a.astype(object), b.astype(object))
    return np.remainder(out, p).astype(np.int64)


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_p.

    Returns the nonzero rows of the RREF and the list of pivot columns.
    """
    A = np.remainder(np.array(a, dtype=np.int64), p)
    if A.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    m, n = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, c]), -1, p)
        if inv != 1:
            A[r] = np.remainder(A[r] * inv, p)
        col = A[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            A[rows] = np.remainder(A[rows] - np.outer(col[rows], A[r]), p)
        pivots.append(c)
        r += 1
    return A[:r].copy(), pivots


def _nullspace_from_rref(R: np.ndarray, pivots: Sequence[int], n: int, p: int) -> np.ndarray:
    free = [j for j in range(n) if j not in set(pivots)]
    K = np.zeros((len(free), n), dtype=np.int64)
    for t, f in enumerate(free):
        K[t, f] = 1
        if len(pivots):
            K[t, list(pivots)] = np.remainder(-R[:, f], p)
    # each row is already in RREF position order: the free column is the
    # leading entry only after re-echelonising, so canonicalise.
    if K.shape[0]:
        K, _ = rref(K, p)
    return K


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Right kernel of ``a`` over F_p as canonical RREF rows."""
    a = np.asarray(a)
    R, piv = rref(a, p)
    return _nullspace_from_rref(R, piv, a.shape[1], p)


class FpMatrix:
    """Immutable dense matrix over the prime field F_p."""

    __slots__ = ("p", "_a")

    def __init__(self, entries, p: int):
        p = _check_modulus(p)
        a = np.array(entries, dtype=object if _has_big(entries) else None)
        if a.ndim == 1 and a.size == 0:
            a = a.reshape(0, 0)
        if a.ndim != 2:
            raise ValueError("FpMatrix needs a 2-d array of entries")
        a = np.remainder(a.astype(object) if a.dtype == object else a.astype(np.int64), p)
        a = np.asarray(a, dtype=np.int64)
        a.setflags(write=False)
        self.p = p
        self._a = a

    @classmethod
    def _wrap(cls, a: np.ndarray, p: int) -> "FpMatrix":
        obj = cls.__new__(cls)
        a = np.ascontiguousarray(a, dtype=np.int64)
        a.setflags(write=False)
        obj.p = p
        obj._a = a
        return obj

    @classmethod
    def identity(cls, n: int, p: int) -> "FpMatrix":
        return cls(np.eye(n, dtype=np.int64), p)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "FpMatrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the residues."""
        return self._a

    @property
    def T(self) -> "FpMatrix":
        return FpMatrix._wrap(self._a.T, self.p)

    def tolist(self) -> list[list[int]]:
        return self._a.tolist()

    def is_zero(self) -> bool:
        return not self._a.any()

    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, FpMatrix):
            if other.p != self.p:
                raise ValueError(f"modulus mismatch: {self.p} vs {other.p}")
            return other._a
        return np.remainder(np.asarray(other, dtype=np.int64), self.p)

    def __matmul__(self, other) -> "FpMatrix":
        b = self._coerce(other)
        if self.cols != b.shape[0]:
            raise ValueError(f"shape mismatch {self.shape} @ {b.shape}")
        return FpMatrix._wrap(mod_matmul(self._a, b, self.p), self.p)

    def __add__(self, other) -> "FpMatrix":
        b = self._coerce(other)
        if b.shape != self.shape:
            raise ValueError("shape mismatch")
        return FpMatrix._wrap(np.remainder(self._a + b, self.p), self.p)

    def __sub__(self, other) -> "FpMatrix":
        b = self._coerce(other)
        if b.shape != self.shape:
            raise ValueError("shape mismatch")
        return FpMatrix._wrap(np.remainder(self._a - b, self.p), self.p)

    def __neg__(self) -> "FpMatrix":
        return FpMatrix._wrap(np.remainder(-self._a, self.p), self.p)

    def __mul__(self, c: int) -> "FpMatrix":
        return FpMatrix._wrap(np.remainder(self._a * (int(c) % self.p), self.p), self.p)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "FpMatrix":
        if self.rows != self.cols:
            raise ValueError("power of a non-square matrix")
        result = np.eye(self.rows, dtype=np.int64)
        base = self._a
        while k:
            if k & 1:
                result = mod_matmul(result, base, self.p)
            k >>= 1
            if k:
                base = mod_matmul(base, base, self.p)
        return FpMatrix._wrap(result, self.p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self) -> int:
        return hash((self.p, self.shape, self._a.tobytes()))

    def __repr__(self) -> str:
        return f"FpMatrix(p={self.p}, {self.tolist()})"

    def trace(self) -> int:
        return int(np.trace(self._a)) % self.p

    def rank(self) -> int:
        return rank_nullspace(self)[0]

    def inverse(self) -> "FpMatrix":
        n = self.rows
        if n != self.cols:
            raise ValueError("inverse of a non-square matrix")
        R, piv = rref(np.hstack([self._a, np.eye(n, dtype=np.int64)]), self.p)
        if piv[:n] != list(range(n)) or len(piv) < n:
            raise ZeroDivisionError("matrix is singular mod p")
        return FpMatrix._wrap(R[:n, n:], self.p)


def _has_big(entries) -> bool:
    try:
        arr = np.asarray(entries)
    except (ValueError, OverflowError):
        return True
    return arr.dtype == object


def rank_nullspace(a: FpMatrix) -> tuple[int, np.ndarray]:
    """Rank and right kernel of ``a``.

    The kernel comes back as a ``(k, cols)`` array whose rows are the
    canonical (reduced echelon) basis of the kernel.
    """
    R, piv = rref(a.array, a.p)
    return len(piv), _nullspace_from_rref(R, piv, a.cols, a.p)


def solve_linear(a: FpMatrix, b) -> Optional[np.ndarray]:
    """One solution of ``a x = b`` over F_p, or ``None`` when inconsistent."""
    b = np.remainder(np.asarray(b, dtype=np.int64).reshape(-1), a.p)
    if b.shape[0] != a.rows:
        raise ValueError("right-hand side length must equal the number of rows")
    n = a.cols
    R, piv = rref(np.hstack([a.array, b.reshape(-1, 1)]), a.p)
    if piv and piv[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    for row, c in enumerate(piv):
        x[c] = R[row, n]
    return x


class EchelonBasis:
    """Canonical (RREF) basis of a subspace of F_p^d.

    Membership and coordinates are read off the pivot columns, which is the
    workhorse of every span computation in the package.
    """

    __slots__ = ("p", "d", "rows", "pivots")

    def __init__(self, vectors, p: int, d: Optional[int] = None):
        vecs = np.asarray(vectors, dtype=np.int64)
        if vecs.size == 0:
            if d is None:
                d = vecs.shape[-1] if vecs.ndim == 2 else 0
            vecs = np.zeros((0, d), dtype=np.int64)
        elif vecs.ndim != 2:
            vecs = vecs.reshape(vecs.shape[0], -1)
        self.p = p
        self.d = vecs.shape[1] if d is None else d
        if vecs.shape[0]:
            self.rows, self.pivots = rref(vecs, p)
        else:
            self.rows, self.pivots = np.zeros((0, self.d), dtype=np.int64), []
        self.rows.setflags(write=False)

    @classmethod
    def _from_rref(cls, rows: np.ndarray, pivots: list[int], p: int) -> "EchelonBasis":
        obj = cls.__new__(cls)
        obj.p, obj.d = p, rows.shape[1]
        obj.rows, obj.pivots = rows, list(pivots)
        obj.rows.setflags(write=False)
        return obj

    @property
    def dim(self) -> int:
        return self.rows.shape[0]

    def residue(self, v: np.ndarray) -> np.ndarray:
        """Reduce vectors (last axis) modulo the span; zero iff contained."""
        v = np.remainder(np.asarray(v, dtype=np.int64), self.p)
        if not self.dim:
            return v
        coeff = v[..., self.pivots]
        return np.remainder(v - mod_matmul(coeff, self.rows, self.p), self.p)

    def contains(self, v) -> bool:
        r = self.residue(v)
        return not r.any()

    def contains_all(self, vs) -> bool:
        vs = np.asarray(vs, dtype=np.int64).reshape(-1, self.d)
        return not self.residue(vs).any()

    def coords(self, v) -> Optional[np.ndarray]:
        """Coordinates of ``v`` in the echelon basis, ``None`` if outside."""
        v = np.remainder(np.asarray(v, dtype=np.int64), self.p)
        c = v[..., self.pivots]
        if self.dim and not np.array_equal(mod_matmul(c, self.rows, self.p), v):
            return None
        if not self.dim and v.any():
            return None
        return c

    def extend(self, vectors) -> "EchelonBasis":
        vectors = np.asarray(vectors, dtype=np.int64).reshape(-1, self.d)
        return EchelonBasis(np.vstack([self.rows, vectors]), self.p, self.d)

    def intersect(self, other: "EchelonBasis") -> "EchelonBasis":
        if not self.dim or not other.dim:
            return EchelonBasis(np.zeros((0, self.d)), self.p, self.d)
        # x U = y W  <=>  (x, -y) in left kernel of [U; W]
        stacked = np.vstack([self.rows, np.remainder(-other.rows, self.p)])
        K = nullspace(stacked.T, self.p)
        vecs = mod_matmul(K[:, : self.dim], self.rows, self.p)
        return EchelonBasis(vecs, self.p, self.d)

    def complement_pivots(self) -> list[int]:
        ps = set(self.pivots)
        return [j for j in range(self.d) if j not in ps]

    def quotient_coords(self, v) -> np.ndarray:
        """Coordinates of ``v`` modulo this span, on the non-pivot columns."""
        return self.residue(v)[..., self.complement_pivots()]

    def __eq__(self, other) -> bool:
        if not isinstance(other, EchelonBasis):
            return NotImplemented
        return self.p == other.p and self.d == other.d and np.array_equal(self.rows, other.rows)

    def __le__(self, other: "EchelonBasis") -> bool:
        return other.contains_all(self.rows) if self.dim else True

    def __hash__(self) -> int:
        return hash((self.p, self.d, self.rows.tobytes()))

    def __repr__(self) -> str:
        return f"EchelonBasis(p={self.p}, d={self.d}, dim={self.dim})"


def kernel_intersection(maps, p: int, dim: int) -> np.ndarray:
    """Common kernel of linear maps given lazily.

    ``maps`` yields callables ``f(K) -> array`` that evaluate one map on the
    rows of ``K`` (a basis of the current candidate space, shape
    ``(k, dim)``) and return the images as rows. The candidate space shrinks
    after every map, so later evaluations are cheap.
    """
    K = np.eye(dim, dtype=np.int64)
    for f in maps:
        if not K.shape[0]:
            break
        img = np.remainder(np.asarray(f(K), dtype=np.int64), p).reshape(K.shape[0], -1)
        if not img.any():
            continue
        # combinations c of rows with c @ img = 0
        C = nullspace(img.T, p)
        K = mod_matmul(C, K, p) if C.shape[0] else np.zeros((0, dim), dtype=np.int64)
    if K.shape[0]:
        K, _ = rref(K, p)
    return K


# ---------------------------------------------------------------------------
# integers


class IntMatrix:
    """Immutable dense integer matrix with arbitrary-precision entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable[int]], cols: Optional[int] = None):
        data = tuple(tuple(int(x) for x in row) for row in entries)
        if cols is None:
            cols = len(data[0]) if data else 0
        if any(len(r) != cols for r in data):
            raise ValueError("ragged integer matrix")
        self.rows = len(data)
        self.cols = cols
        self.entries = data

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def __getitem__(self, ij) -> int:
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols_b = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntMatrix(
            [[sum(x * y for x, y in zip(r, c)) for c in cols_b] for r in self.entries],
            other.cols,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()})"

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix([list(c) for c in zip(*self.entries)] if self.rows else [], self.rows)

    def mod(self, p: int) -> FpMatrix:
        arr = np.array([[x % p for x in r] for r in self.entries], dtype=np.int64).reshape(self.rows, self.cols)
        return FpMatrix(arr, p)

    def det(self) -> int:
        return bareiss_det(self)

    def rank(self) -> int:
        return bareiss_rank(self)


def bareiss_rank(a: IntMatrix) -> int:
    """Rank over Q by fraction-free elimination."""
    M = [list(r) for r in a.entries]
    m, n = a.rows, a.cols
    r, prev = 0, 1
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, m):
            for j in range(c + 1, n):
                M[i][j] = (M[i][j] * M[r][c] - M[i][c] * M[r][j]) // prev
            M[i][c] = 0
        prev = M[r][c]
        r += 1
        if r == m:
            break
    return r


def bareiss_det(a: IntMatrix) -> int:
    if a.rows != a.cols:
        raise ValueError("determinant of a non-square matrix")
    n = a.rows
    M = [list(r) for r in a.entries]
    sign, prev = 1, 1
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            return 0
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class SmithForm:
    """Result of :func:`smith_normal_form`: ``u @ a @ v == diag(d)`` padded."""

    d: tuple[int, ...]
    u: IntMatrix
    v: IntMatrix
    original_shape: tuple[int, int]

    @property
    def nonzero(self) -> tuple[int, ...]:
        return tuple(x for x in self.d if x)

    @property
    def rank(self) -> int:
        return len(self.nonzero)

    def diagonal_matrix(self) -> IntMatrix:
        m, n = self.original_shape
        return IntMatrix([[self.d[i] if i == j and i < len(self.d) else 0 for j in range(n)] for i in range(m)], n)

    def modp_nullity(self, p: int) -> int:
        """Nullity of the original matrix reduced mod p, read off the divisors."""
        m, n = self.original_shape
        return n - sum(1 for x in self.d if x % p)


def smith_normal_form(a: IntMatrix) -> SmithForm:
    """Smith normal form with unimodular transforms.

    Pivot: the nonzero entry of least absolute value in the working
    submatrix, ties broken in row-major order.
    """
    m, n = a.rows, a.cols
    A = [list(r) for r in a.entries]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        if q:
            ra, rs = A[dst], A[src]
            for k in range(n):
                ra[k] -= q * rs[k]
            ua, us = U[dst], U[src]
            for k in range(m):
                ua[k] -= q * us[k]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        if q:
            for row in A:
                row[dst] -= q * row[src]
            for row in V:
                row[dst] -= q * row[src]

    def least(t):
        best, where = 0, None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                x = row[j]
                if x and (where is None or abs(x) < best):
                    best, where = abs(x), (i, j)
        return where

    s = min(m, n)
    t = 0
    while t < s:
        where = least(t)
        if where is None:
            break
        while True:
            i, j = where
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            piv = A[t][t]
            for i in range(t + 1, m):
                add_row(i, t, A[i][t] // piv)
            for j in range(t + 1, n):
                add_col(j, t, A[t][j] // piv)
            dirty = any(A[i][t] for i in range(t + 1, m)) or any(A[t][j] for j in range(t + 1, n))
            if not dirty:
                bad = next(
                    ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv),
                    None,
                )
                if bad is None:
                    break
                # fold the offending row into the pivot row, then reduce again
                add_row(t, bad[0], -1)
            # re-pick least entry in the cross of row t / column t
            cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
            cand += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
            _, bi, bj = min(cand, key=lambda c: (c[0], c[1], c[2]))
            where = (bi, bj)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1

    d = tuple(A[i][i] for i in range(s))
    return SmithForm(d=d, u=IntMatrix(U, m), v=IntMatrix(V, n), original_shape=(m, n))


def hermite_normal_form(vectors: Sequence[Sequence[int]], n: Optional[int] = None) -> list[tuple[int, ...]]:
    """Row Hermite normal form of the lattice spanned by ``vectors``.

    Positive pivots, entries above each pivot reduced into ``[0, pivot)``,
    zero rows dropped. Two lattices are equal iff their HNFs are.
    """
    M = [list(map(int, v)) for v in vectors]
    if n is None:
        n = len(M[0]) if M else 0
    r = 0
    pivots = []
    for c in range(n):
        rows = [i for i in range(r, len(M)) if M[i][c]]
        if not rows:
            continue
        while True:
            rows = [i for i in range(r, len(M)) if M[i][c]]
            k = min(rows, key=lambda i: (abs(M[i][c]), i))
            M[r], M[k] = M[k], M[r]
            done = True
            for i in range(r + 1, len(M)):
                if M[i][c]:
                    q = M[i][c] // M[r][c]
                    M[i] = [x - q * y for x, y in zip(M[i], M[r])]
                    if M[i][c]:
                        done = False
            if done:
                break
        if M[r][c] < 0:
            M[r] = [-x for x in M[r]]
        for i in range(r):
            q = M[i][c] // M[r][c]
            if q:
                M[i] = [x - q * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return [tuple(row) for row in M[:r]]


def int_kernel(a: IntMatrix) -> list[tuple[int, ...]]:
    """Basis of the (saturated) integer kernel lattice of ``a``, in HNF."""
    sf = smith_normal_form(a)
    r = sf.rank
    V = sf.v.entries
    vecs = [tuple(V[i][j] for i in range(a.cols)) for j in range(r, a.cols)]
    return hermite_normal_form(vecs, a.cols) if vecs else []


def lattice_gcd(values: Iterable[int]) -> int:
    g = 0
    for x in values:
        g = gcd(g, int(x))
    return g
