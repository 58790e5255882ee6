"""Slow, independent reference computations used to check the library.

Nothing here imports the code under test except for plain data
conversion: ranks are computed by schoolbook elimination over Python
ints, Smith forms come from sympy, cohomology is computed from explicit
cocycle equations.
"""
from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np
import sympy
from sympy.matrices.normalforms import invariant_factors


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    M = [[int(x) % p for x in r] for r in rows]
    if not M:
        return 0
    ncols = len(M[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][c], -1, p)
        M[rank] = [x * inv % p for x in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[rank])]
        rank += 1
    return rank


def rank_q(rows: Sequence[Sequence[int]], ncols: int) -> int:
    if not rows:
        return 0
    return sympy.Matrix([list(map(int, r)) for r in rows]).rank()


def elementary_divisors(rows: Sequence[Sequence[int]], ncols: int) -> list[int]:
    """Nonzero invariant factors (sympy), sorted."""
    if not rows:
        return []
    from sympy.polys.domains import ZZ

    fs = invariant_factors(sympy.Matrix([list(map(int, r)) for r in rows]), domain=ZZ)
    return sorted(abs(int(f)) for f in fs if f != 0)


def vec(m) -> list[int]:
    return [int(x) for x in np.asarray(m).ravel()]


def span_rank(mats, p: int) -> int:
    return rank_mod_p([vec(m) for m in mats], p)


def in_span(mats, x, p: int) -> bool:
    return span_rank(list(mats) + [x], p) == span_rank(mats, p)


def matmul(a, b, p: int) -> np.ndarray:
    return np.remainder(np.asarray(a, dtype=object).dot(np.asarray(b, dtype=object)), p).astype(np.int64)


def bracket(a, b, p: int) -> np.ndarray:
    return np.remainder(matmul(a, b, p) - matmul(b, a, p), p)


def all_vectors(d: int, p: int):
    return itertools.product(range(p), repeat=d)


def normalizer_dim_bruteforce(ambient, h, p: int) -> int:
    """Enumerate every element of a tiny ambient algebra; count the normaliser by size."""
    amb = [np.asarray(a) for a in ambient]
    count = 0
    for c in all_vectors(len(amb), p):
        x = sum(ci * a for ci, a in zip(c, amb)) % p
        if all(in_span(h, bracket(x, b, p), p) for b in h):
            count += 1
    # the normaliser is a subspace; its size is p^dim
    d = 0
    while p**d < count:
        d += 1
    assert p**d == count
    return d


def subspaces(d: int, p: int):
    """All subspaces of F_p^d, as lists of reduced echelon basis rows."""
    yield []
    for k in range(1, d + 1):
        for piv in itertools.combinations(range(d), k):
            free = [(i, j) for i in range(k) for j in range(d) if j > piv[i] and j not in piv]
            for vals in itertools.product(range(p), repeat=len(free)):
                rows = [[0] * d for _ in range(k)]
                for i in range(k):
                    rows[i][piv[i]] = 1
                for (i, j), v in zip(free, vals):
                    rows[i][j] = v
                yield rows


def invariant_subspaces(action, d: int, p: int) -> list[list[list[int]]]:
    act = [np.asarray(a, dtype=np.int64) for a in action]
    out = []
    for rows in subspaces(d, p):
        if not rows:
            out.append(rows)
            continue
        r = rank_mod_p(rows, p)
        ok = True
        for a in act:
            imgs = [list(np.remainder(a @ np.array(v), p)) for v in rows]
            if rank_mod_p(rows + imgs, p) != r:
                ok = False
                break
        if ok:
            out.append(rows)
    return out


def semisimple_bruteforce(action, d: int, p: int) -> bool:
    """Every invariant subspace has an invariant complement."""
    inv = invariant_subspaces(action, d, p)
    for W in inv:
        if not W or len(W) == d:
            continue
        if not any(len(U) == d - len(W) and rank_mod_p(W + U, p) == d for U in inv):
            return False
    return True


def cohomology_dims_oracle(structure, action, p: int) -> list[int]:
    """``dim H^0, H^1, H^2`` from cocycle and coboundary equations written out by hand.

    ``structure[i][j]`` is the coordinate vector of ``[x_i, x_j]``; ``action[i]``
    the matrix of ``x_i``.
    """
    g = len(action)
    v = action[0].shape[0] if g else 0
    rho = [np.asarray(a, dtype=object) for a in action]
    c = [[[int(t) for t in structure[i][j]] for j in range(g)] for i in range(g)]

    # H^0
    h0 = v - rank_mod_p(np.vstack(rho).tolist() if g else [], p) if g else v

    # 1-cochains: f(x_i) = column block i of an unknown vector of length g*v
    def one_index(i, a):
        return i * v + a

    # cocycle: f([x_i,x_j]) = x_i f(x_j) - x_j f(x_i), for i<j
    z1_rows = []
    for i, j in itertools.combinations(range(g), 2):
        for a in range(v):
            row = [0] * (g * v)
            for m in range(g):
                if c[i][j][m]:
                    row[one_index(m, a)] += c[i][j][m]
            for b in range(v):
                row[one_index(j, b)] -= int(rho[i][a, b])
                row[one_index(i, b)] += int(rho[j][a, b])
            z1_rows.append(row)
    dim_z1 = g * v - rank_mod_p(z1_rows, p)
    # coboundaries f(x_i) = x_i w
    b1_rows = [[int(rho[i][a, w]) for i in range(g) for a in range(v)] for w in range(v)]
    dim_b1 = rank_mod_p(b1_rows, p)
    h1 = dim_z1 - dim_b1

    # 2-cochains: f(x_i, x_j) for i<j, stored at pair index; extended by antisymmetry
    pairs = list(itertools.combinations(range(g), 2))
    pidx = {pr: k for k, pr in enumerate(pairs)}

    def f_coeffs(i, j, a):
        """Coefficient vector of the a-th coordinate of f(x_i, x_j) in the unknowns."""
        row = [0] * (len(pairs) * v)
        if i == j:
            return row
        s = 1
        if i > j:
            i, j, s = j, i, -1
        row[pidx[(i, j)] * v + a] = s
        return row

    def add(r1, r2, k=1):
        return [x + k * y for x, y in zip(r1, r2)]

    z2_rows = []
    for i, j, k in itertools.combinations(range(g), 3):
        for a in range(v):
            row = [0] * (len(pairs) * v)
            # x_i f(x_j,x_k) - x_j f(x_i,x_k) + x_k f(x_i,x_j)
            for b in range(v):
                row = add(row, f_coeffs(j, k, b), int(rho[i][a, b]))
                row = add(row, f_coeffs(i, k, b), -int(rho[j][a, b]))
                row = add(row, f_coeffs(i, j, b), int(rho[k][a, b]))
            # - f([x_i,x_j],x_k) + f([x_i,x_k],x_j) - f([x_j,x_k],x_i)
            for m in range(g):
                if c[i][j][m]:
                    row = add(row, f_coeffs(m, k, a), -c[i][j][m])
                if c[i][k][m]:
                    row = add(row, f_coeffs(m, j, a), c[i][k][m])
                if c[j][k][m]:
                    row = add(row, f_coeffs(m, i, a), -c[j][k][m])
            z2_rows.append(row)
    dim_z2 = len(pairs) * v - rank_mod_p(z2_rows, p)
    # coboundaries of 1-cochains: (dh)(x_i,x_j) = x_i h(x_j) - x_j h(x_i) - h([x_i,x_j])
    b2_cols = []
    for m0 in range(g):
        for a0 in range(v):
            col = []
            for i, j in pairs:
                for a in range(v):
                    val = 0
                    if m0 == j:
                        val += int(rho[i][a, a0])
                    if m0 == i:
                        val -= int(rho[j][a, a0])
                    if a == a0:
                        val -= c[i][j][m0]
                    col.append(val)
            b2_cols.append(col)
    dim_b2 = rank_mod_p(b2_cols, p) if pairs else 0
    h2 = dim_z2 - dim_b2
    return [h0, h1, h2]


def structure_from_matrices(mats, p: int) -> list[list[list[int]]]:
    """Coordinates of brackets in the given basis, by solving with sympy over GF(p)."""
    g = len(mats)
    B = sympy.Matrix([vec(m) for m in mats]).T
    out = [[None] * g for _ in range(g)]
    for i in range(g):
        for j in range(g):
            target = sympy.Matrix(vec(bracket(mats[i], mats[j], p)))
            sol = _solve_mod_p(B, target, p)
            out[i][j] = sol
    return out


def _solve_mod_p(B: sympy.Matrix, t: sympy.Matrix, p: int) -> list[int]:
    aug = B.row_join(t)
    rows = [[int(x) % p for x in aug.row(i)] for i in range(aug.rows)]
    ncols = B.cols
    piv_cols = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, len(rows)):
        assert rows[i][-1] == 0, "bracket leaves the span"
    sol = [0] * ncols
    for i, c in enumerate(piv_cols):
        sol[c] = rows[i][-1]
    return sol
