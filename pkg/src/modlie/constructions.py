"""Classical algebras, the Witt algebra and a corpus of worked examples."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from .exactlinalg import EchelonBasis, FpMatrix, IntMatrix, _check_modulus, kernel_intersection, mod_matmul
from .liealg import ClosureFailure, MatrixLieAlgebra, Subspace, batch_bracket, normalizer
from .repn import (
    LieModule,
    SearchExhausted,
    ambient_adjoint_module,
    composition_series,
    is_semisimple,
    module_from_images,
    natural_module,
    sl2_simple,
    spin,
    jacobson_radical,
)
from .rng import SeedLike, make_rng

__all__ = [
    "BadParams",
    "BadPrime",
    "PaperExample",
    "WittAlgebra",
    "classical",
    "form_algebra",
    "witt_algebra",
    "witt_sp_embedding",
    "witt_invariant_bivector",
    "witt_o1_semidirect",
    "fibonacci",
    "fibonacci_example",
    "smooth_unipotent_example",
    "sl2_small_rep_example",
    "sl2_triple_algebra",
]


class BadParams(ValueError):
    pass


class BadPrime(ValueError):
    pass


@dataclass
class PaperExample:
    """A named algebra inside ``gl_n`` together with attached data."""

    name: str
    algebra: Subspace
    n: int
    p: int
    attachments: dict[str, Any] = field(default_factory=dict)


def _elementary(n: int, positions) -> np.ndarray:
    out = np.zeros((len(positions), n, n), dtype=np.int64)
    for k, (i, j) in enumerate(positions):
        out[k, i, j] = 1
    return out


def form_algebra(gram, p: int, label: Optional[str] = None) -> MatrixLieAlgebra:
    """``{x : x^T G + G x = 0}`` for a Gram matrix ``G``."""
    G = np.remainder(np.asarray(gram, dtype=np.int64), p)
    n = G.shape[0]
    E = np.eye(n * n, dtype=np.int64).reshape(-1, n, n)
    cols = np.transpose(E, (0, 2, 1)) @ G + G @ E
    op = np.remainder(cols.reshape(n * n, -1).T, p)
    K = kernel_intersection([lambda K: mod_matmul(K, op.T, p)], p, n * n)
    return MatrixLieAlgebra(K.reshape(-1, n, n), p, n, label=label)


def classical(kind: str, n: int, p: int) -> MatrixLieAlgebra:
    """``gl``, ``sl``, ``so`` (form ``v^T w``) or ``sp`` (form ``J = [[0, -I], [I, 0]]``)."""
    p = _check_modulus(p)
    if n < 1:
        raise BadParams("n must be positive")
    if kind == "gl":
        return MatrixLieAlgebra(_elementary(n, [(i, j) for i in range(n) for j in range(n)]), p, n, label=f"gl{n}", raw=True)
    if kind == "sl":
        gens = list(_elementary(n, [(i, j) for i in range(n) for j in range(n) if i != j]))
        for i in range(n - 1):
            h = np.zeros((n, n), dtype=np.int64)
            h[i, i], h[i + 1, i + 1] = 1, p - 1
            gens.append(h)
        return MatrixLieAlgebra(np.array(gens).reshape(-1, n, n), p, n, label=f"sl{n}", raw=True)
    if kind in ("so", "sp"):
        if p == 2:
            raise BadParams(f"{kind} needs odd characteristic")
        if kind == "so":
            return form_algebra(np.eye(n, dtype=np.int64), p, label=f"so{n}")
        if n % 2:
            raise BadParams("sp needs even n")
        m = n // 2
        J = np.zeros((n, n), dtype=np.int64)
        J[:m, m:] = -np.eye(m, dtype=np.int64)
        J[m:, :m] = np.eye(m, dtype=np.int64)
        return form_algebra(J, p, label=f"sp{n}")
    raise BadParams(f"unknown classical kind {kind!r}")


# ---------------------------------------------------------------------------
# Witt algebra


@dataclass
class WittAlgebra:
    """``W_1 = Der k[X]/(X^p)`` with basis ``e_i = X^(i+1) d/dX``, ``i = -1 .. p-2``.

    ``algebra`` is the faithful image in ``gl_{p-1}`` acting on ``O_1 / k``
    (basis ``X, .., X^(p-1)``); ``on_o1`` holds the ``p x p`` matrices on
    ``O_1`` (basis ``1, X, .., X^(p-1)``).
    """

    p: int
    algebra: MatrixLieAlgebra
    elements: dict[int, np.ndarray]
    on_o1: dict[int, np.ndarray]
    o1_algebra: MatrixLieAlgebra
    rep_on_o1: LieModule
    rep_on_o1_mod_k: LieModule

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def indices(self) -> list[int]:
        return list(range(-1, self.p - 1))


def _witt_o1_matrix(i: int, p: int) -> np.ndarray:
    m = np.zeros((p, p), dtype=np.int64)
    for k in range(p):
        if 0 <= k + i < p:
            m[k + i, k] = k % p
    return m


def witt_algebra(p: int) -> WittAlgebra:
    p = _check_modulus(p)
    if p <= 3:
        raise BadPrime("the Witt algebra constructions need p > 3")
    idx = range(-1, p - 1)
    on_o1 = {i: _witt_o1_matrix(i, p) for i in idx}
    elements = {i: on_o1[i][1:, 1:].copy() for i in idx}
    alg = MatrixLieAlgebra(list(elements.values()), p, p - 1, label="W1")
    if alg.dim != p:
        raise AssertionError("O_1 / k is not faithful")
    for i in idx:
        for j in idx:
            br = batch_bracket(elements[i], elements[j], p)
            want = (j - i) * elements[i + j] if i + j in elements else np.zeros_like(br)
            if not np.array_equal(br, np.remainder(want, p)):
                raise AssertionError(f"[e_{i}, e_{j}] != ({j - i}) e_{i + j}")
    o1_alg = MatrixLieAlgebra(list(on_o1.values()), p, p, label="W1 on O1")
    src = [elements[i] for i in idx]
    rep_o1 = module_from_images(alg, src, [on_o1[i] for i in idx], label="O1")
    rep_q = natural_module(alg)
    rep_q.label = "O1/k"
    return WittAlgebra(p, alg, elements, on_o1, o1_alg, rep_o1, rep_q)


def witt_invariant_bivector(p: int) -> FpMatrix:
    """Coefficient matrix of ``sum_i (1/i) X^i ^ X^(p-i)`` in the second exterior power of ``O_1 / k``."""
    n = p - 1
    B = np.zeros((n, n), dtype=np.int64)
    for i in range(1, p):
        B[i - 1, p - i - 1] = pow(i, -1, p)
    return FpMatrix(B, p)


def witt_sp_embedding(p: int) -> tuple[FpMatrix, bool]:
    """Alternating form on ``O_1 / k`` preserved by ``W_1``, and the check ``x^T G + G x = 0``.

    The invariant lives naturally in the exterior square as a bivector ``B``;
    the bilinear form it induces on ``O_1 / k`` has Gram matrix ``B^-1``.
    Both invariance statements are verified.
    """
    W = witt_algebra(p)
    B = witt_invariant_bivector(p)
    G = B.inverse()
    ok = True
    for x in W.elements.values():
        if np.remainder(x @ B.array + B.array @ x.T, p).any():
            ok = False
        if np.remainder(x.T @ G.array + G.array @ x, p).any():
            ok = False
    return G, ok


def witt_o1_semidirect(p: int) -> MatrixLieAlgebra:
    """Derivations and multiplication operators of ``O_1``, inside ``sl_p``."""
    W = witt_algebra(p)
    mults = []
    for k in range(p):
        m = np.zeros((p, p), dtype=np.int64)
        for j in range(p - k):
            m[j + k, j] = 1
        mults.append(m)
    return MatrixLieAlgebra(list(W.on_o1.values()) + mults, p, p, label="W1+O1")


# ---------------------------------------------------------------------------
# the Fibonacci family


def fibonacci(k: int) -> int:
    """``F_0 = F_1 = 1``, ``F_2 = 2``, ..."""
    a, b = 1, 1
    for _ in range(k):
        a, b = b, a + b
    return a


def _fibonacci_parameters(n: int, lam: tuple[int, int, int]) -> tuple[int, list[dict], tuple[int, ...]]:
    """Integer basis matrices (as position -> coefficient dicts) of the Fibonacci algebra.

    Every named parameter contributes one matrix (the sum of the positions it
    occupies, with their coefficients); every starred position contributes an
    elementary matrix. Block offsets follow the block sizes n+2, n+1, 5, 4.
    """
    l1, l2, l3 = lam
    N = 2 * n + 12
    sizes = (n + 2, n + 1, 5, 4)
    offs = [0, n + 2, 2 * n + 3, 2 * n + 8, N]
    params: dict[str, dict] = {}

    def put(block, i, j, name, c=1):
        o = offs[block]
        d = params.setdefault(name, {})
        d[(o + i - 1, o + j - 1)] = d.get((o + i - 1, o + j - 1), 0) + c

    a = lambda i: f"a{i}"  # noqa: E731
    b = lambda i: f"b{i}"  # noqa: E731
    stars = []

    # block A
    put(0, 1, 2, a(1))
    put(0, 2, 3, a(1))
    for k in range(3, n + 2):
        put(0, k, k + 1, a(k - 1))
    put(0, 1, 3, a(2))
    for k in range(2, n):
        put(0, k, k + 2, a(k + 1))
        put(0, k, k + 2, b(k - 1))
    put(0, n, n + 2, b(n - 1))
    put(0, n - 2, n + 1, "c")
    put(0, n - 2, n + 2, "e")
    put(0, n - 2, n + 2, a(n - 1), l1)
    put(0, n - 2, n + 2, b(n - 3), l1)
    put(0, n - 1, n + 2, a(n - 2), 1 + l1)
    put(0, n - 1, n + 2, "d")
    fixed = {(1, 2), (2, 3), (1, 3), (n - 2, n + 1), (n - 2, n + 2), (n - 1, n + 2), (n, n + 2)}
    fixed |= {(k, k + 1) for k in range(1, n + 2)} | {(k, k + 2) for k in range(2, n)}
    stars += [(i - 1, j - 1) for i in range(1, n + 3) for j in range(i + 1, n + 3) if (i, j) not in fixed]

    # block B
    for k in range(1, n + 1):
        put(1, k, k + 1, a(k))
    for k in range(1, n):
        put(1, k, k + 2, b(k))
    stars += [(offs[1] + i - 1, offs[1] + j - 1) for i in range(1, n + 2) for j in range(i + 3, n + 2)]

    # block C
    put(2, 1, 2, a(n - 3))
    put(2, 2, 3, a(n - 2))
    put(2, 3, 4, a(n - 1))
    put(2, 4, 5, a(n))
    put(2, 1, 3, a(n - 1))
    put(2, 1, 3, b(n - 3))
    put(2, 2, 4, a(n))
    put(2, 2, 4, b(n - 2))
    put(2, 3, 5, b(n - 1))
    put(2, 1, 4, "c")
    put(2, 1, 5, "e")
    put(2, 1, 5, a(n - 1), l2)
    put(2, 1, 5, b(n - 3), l2)
    put(2, 2, 5, a(n - 2), 1 + l2)
    put(2, 2, 5, "d")

    # block D
    put(3, 1, 2, a(n - 2))
    put(3, 2, 3, a(n - 1))
    put(3, 3, 4, a(n))
    put(3, 1, 3, a(n))
    put(3, 1, 3, b(n - 2))
    put(3, 2, 4, b(n - 1))
    put(3, 1, 4, "d")
    put(3, 1, 4, a(n - 2), l3)

    # everything above the diagonal blocks is free
    for bi in range(4):
        for bj in range(bi + 1, 4):
            stars += [(i, j) for i in range(offs[bi], offs[bi + 1]) for j in range(offs[bj], offs[bj + 1])]

    mats = [{k: v for k, v in d.items() if v} for d in params.values()]
    mats = [m for m in mats if m]
    mats += [{s: 1} for s in stars]
    return N, mats, sizes


def fibonacci_example(n: int = 5, p: int = 13, lambdas: tuple[int, int, int] = (0, 0, 0)) -> PaperExample:
    """Strictly upper triangular subalgebra of ``gl_{2n+12}`` normalised by a Fibonacci toral element.

    Raises :class:`ClosureFailure` if the transcribed basis is not closed mod ``p``.
    """
    if n < 4:
        raise BadParams("the Fibonacci construction needs n >= 4")
    p = _check_modulus(p)
    lam = tuple(int(x) for x in lambdas)
    if len(lam) != 3:
        raise BadParams("exactly three lambda parameters")
    N, mats, sizes = _fibonacci_parameters(n, lam)
    int_basis = np.zeros((len(mats), N, N), dtype=np.int64)
    for k, m in enumerate(mats):
        for (i, j), v in m.items():
            int_basis[k, i, j] = v
    basis = np.remainder(int_basis, p)
    keep = basis.reshape(len(mats), -1).any(axis=1)
    basis = basis[keep]
    h = MatrixLieAlgebra(basis, p, N, label=f"fibonacci(n={n})")
    if h.dim != basis.shape[0]:
        raise ClosureFailure("transcribed basis matrices are linearly dependent mod p")
    F = fibonacci
    diag = [F(k) for k in range(1, n + 3)]
    diag += [F(k) + 4 for k in range(2, n + 3)]
    diag += [F(k) + 1 for k in range(n - 2, n + 3)]
    diag += [F(k) + 2 for k in range(n - 1, n + 3)]
    s = np.diag(np.remainder(diag, p)).astype(np.int64)
    divisor = F(n + 1)
    expected = {"zeros": 4, "ones": 2 * n + 7, "top": divisor}
    att = {
        "block_sizes": sizes,
        "toral_element": s,
        "toral_diagonal": diag,
        "basis": list(basis),
        "integer_basis": list(int_basis[keep]),
        "expected_divisors": expected,
        "lambdas": lam,
        "fibonacci_index": n + 1,
    }
    return PaperExample(f"fibonacci(n={n}, p={p})", h, N, p, att)


# ---------------------------------------------------------------------------
# smaller examples


def smooth_unipotent_example(p: int) -> PaperExample:
    """``h = k E_13`` in ``gl_3`` with its normaliser and Borel containment."""
    p = _check_modulus(p)
    if p < 3:
        raise BadParams("needs p >= 3")
    h = MatrixLieAlgebra(_elementary(3, [(0, 2)]), p, 3, label="kE13")
    gl3 = classical("gl", 3, p)
    nrm = normalizer(gl3, h)
    borel = Subspace(_elementary(3, [(i, j) for i in range(3) for j in range(i, 3)]), p, 3)
    return PaperExample(
        "smooth_unipotent",
        h,
        3,
        p,
        {"normalizer": nrm, "borel": borel, "normalizer_in_borel": nrm <= borel},
    )


def sl2_triple_algebra(p: int) -> tuple[MatrixLieAlgebra, tuple[np.ndarray, np.ndarray, np.ndarray]]:
    e = np.array([[0, 1], [0, 0]], dtype=np.int64)
    f = np.array([[0, 0], [1, 0]], dtype=np.int64)
    h = np.array([[1, 0], [0, p - 1]], dtype=np.int64)
    return MatrixLieAlgebra([e, h, f], p, 2, label="sl2"), (e, h, f)


def sl2_small_rep_example(p: int, seed: SeedLike = 0, attempts: int = 200) -> PaperExample:
    """Image of ``sl_2`` under ``L((p+1)/2)`` inside ``gl_m``, ``m = (p+3)/2``.

    Attaches a ``p``-dimensional non-split submodule ``M`` of ``gl_m`` with
    factors of dimensions ``p-2`` and ``2``, found by spinning random vectors
    of the radical ``J gl_m`` of the adjoint module.
    """
    p = _check_modulus(p)
    if p < 5:
        raise BadParams("needs p >= 5")
    k = (p + 1) // 2
    m = k + 1
    L = sl2_simple(k, p)
    e, h, f = (L.act(x) for x in sl2_triple_algebra(p)[1])
    img = MatrixLieAlgebra([e, h, f], p, m, label=f"sl2 via L({k})")
    V = ambient_adjoint_module(img)
    J = jacobson_radical(V, seed)
    if not J.dim:
        raise SearchExhausted("adjoint module is semisimple; no candidate vectors")
    n2 = m * m
    JV = np.transpose(J.rows.reshape(-1, n2, n2), (0, 2, 1)).reshape(-1, n2)
    JVb = EchelonBasis(JV, p, n2)
    rng = make_rng(seed)
    for _ in range(attempts):
        c = rng.integers(0, p, size=JVb.dim)
        v = mod_matmul(c[None], JVb.rows, p)[0]
        if not v.any():
            continue
        S = spin(V, v)
        if S.dim != p:
            continue
        sub = V.submodule(S)
        cs = composition_series(sub, int(rng.integers(0, 2**62)))
        if cs.factor_dims != [p - 2, 2] or is_semisimple(sub, 0):
            continue
        M = Subspace(S.rows.reshape(-1, m, m), p, m, label="M")
        return PaperExample(
            f"sl2_small_rep(p={p})",
            img,
            m,
            p,
            {
                "module_M": M,
                "M_factor_dims": cs.factor_dims,
                "M_semisimple": False,
                "normalizer_of_M": normalizer(classical("gl", m, p), M),
            },
        )
    raise SearchExhausted(f"no suitable submodule after {attempts} attempts")
