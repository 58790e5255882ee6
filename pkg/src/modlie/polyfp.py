"""Dense univariate polynomials over F_p, stored low degree first.

Only what the Jordan decomposition and the submodule search need: the
field is tiny and the degrees are at most a few dozen, so plain Python
lists beat anything clever.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .exactlinalg import mod_matmul

Poly = list[int]


def trim(f: Sequence[int], p: int) -> Poly:
    f = [int(c) % p for c in f]
    while f and f[-1] == 0:
        f.pop()
    return f


def deg(f: Poly) -> int:
    return len(f) - 1


def monic(f: Poly, p: int) -> Poly:
    if not f:
        return f
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def add(f: Poly, g: Poly, p: int) -> Poly:
    n = max(len(f), len(g))
    return trim([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)], p)


def sub(f: Poly, g: Poly, p: int) -> Poly:
    return add(f, [-c for c in g], p)


def mul(f: Poly, g: Poly, p: int) -> Poly:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim(out, p)


def divmod_(f: Poly, g: Poly, p: int) -> tuple[Poly, Poly]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - len(g) + 1, 0)
    while len(f) >= len(g) and f:
        c = f[-1] * inv % p
        k = len(f) - len(g)
        q[k] = c
        for i, b in enumerate(g):
            f[k + i] = (f[k + i] - c * b) % p
        f = trim(f, p)
    return trim(q, p), f


def gcd(f: Poly, g: Poly, p: int) -> Poly:
    while g:
        f, g = g, divmod_(f, g, p)[1]
    return monic(f, p)


def derivative(f: Poly, p: int) -> Poly:
    return trim([i * f[i] for i in range(1, len(f))], p)


def radical(f: Poly, p: int) -> Poly:
    """Product of the distinct monic irreducible factors of ``f``."""
    f = monic(trim(f, p), p)
    if deg(f) <= 0:
        return [1] if f else []
    df = derivative(f, p)
    if not df:
        # f(t) = g(t^p) = g(t)^p over the prime field
        return radical(f[::p], p)
    g = gcd(f, df, p)
    head = divmod_(f, g, p)[0]
    if deg(g) == 0:
        return monic(head, p)
    tail = radical(g, p)
    common = gcd(head, tail, p)
    return monic(divmod_(mul(head, tail, p), common, p)[0], p)


def powmod(base: Poly, e: int, modulus: Poly, p: int) -> Poly:
    result: Poly = [1]
    base = divmod_(base, modulus, p)[1]
    while e:
        if e & 1:
            result = divmod_(mul(result, base, p), modulus, p)[1]
        e >>= 1
        if e:
            base = divmod_(mul(base, base, p), modulus, p)[1]
    return result


def eval_matrix(f: Poly, x: np.ndarray, p: int) -> np.ndarray:
    """Horner evaluation of ``f`` at a square residue matrix."""
    n = x.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    eye = np.eye(n, dtype=np.int64)
    for c in reversed(f):
        out = mod_matmul(out, x, p)
        if c:
            out = np.remainder(out + c * eye, p)
    return out


def charpoly(x: np.ndarray, p: int) -> Poly:
    """Characteristic polynomial ``det(t - x)`` via Hessenberg reduction."""
    H = np.remainder(np.array(x, dtype=np.int64), p)
    n = H.shape[0]
    for j in range(n - 2):
        nz = np.flatnonzero(H[j + 1 :, j])
        if nz.size == 0:
            continue
        i = j + 1 + int(nz[0])
        if i != j + 1:
            H[[i, j + 1]] = H[[j + 1, i]]
            H[:, [i, j + 1]] = H[:, [j + 1, i]]
        inv = pow(int(H[j + 1, j]), -1, p)
        for r in range(j + 2, n):
            c = int(H[r, j]) * inv % p
            if c:
                H[r] = (H[r] - c * H[j + 1]) % p
                H[:, j + 1] = (H[:, j + 1] + c * H[:, r]) % p
    # recurrence on leading principal minors of t - H
    polys: list[Poly] = [[1]]
    for k in range(n):
        nxt = mul([-int(H[k, k]), 1], polys[k], p)
        prod = 1
        for i in range(k - 1, -1, -1):
            prod = prod * int(H[i + 1, i]) % p
            if not prod:
                break
            term = [c * prod * int(H[i, k]) % p for c in polys[i]]
            nxt = sub(nxt, term, p)
        polys.append(nxt)
    return polys[n]


def distinct_degree(f: Poly, p: int) -> list[tuple[int, Poly]]:
    """Split a monic squarefree ``f`` into products of irreducibles of equal degree."""
    f = monic(trim(f, p), p)
    out = []
    h: Poly = [0, 1]
    d = 0
    while deg(f) >= 2 * (d + 1):
        d += 1
        h = powmod(h, p, f, p)
        g = gcd(f, sub(h, [0, 1], p), p)
        if deg(g) > 0:
            out.append((d, g))
            f = divmod_(f, g, p)[0]
            h = divmod_(h, f, p)[1]
    if deg(f) > 0:
        out.append((deg(f), f))
    return out


def equal_degree(f: Poly, d: int, p: int, rng) -> list[Poly]:
    """Cantor-Zassenhaus splitting of a product of degree-``d`` irreducibles."""
    f = monic(f, p)
    if deg(f) == d:
        return [f]
    n = deg(f)
    while True:
        a = trim([int(c) for c in rng.integers(0, p, size=n)], p)
        if deg(a) < 1:
            continue
        if p == 2:
            t, acc = a, a
            for _ in range(d - 1):
                t = divmod_(mul(t, t, p), f, p)[1]
                acc = add(acc, t, p)
            b = acc
        else:
            e = (p**d - 1) // 2
            b = sub(powmod(a, e, f, p), [1], p)
        g = gcd(f, b, p)
        if 0 < deg(g) < n:
            return equal_degree(g, d, p, rng) + equal_degree(divmod_(f, g, p)[0], d, p, rng)


def irreducible_factors(f: Poly, p: int, rng) -> list[Poly]:
    """Distinct monic irreducible factors of ``f``, lowest degree first."""
    r = radical(f, p)
    out: list[Poly] = []
    for d, g in distinct_degree(r, p):
        out.extend(sorted(equal_degree(g, d, p, rng)))
    return out
