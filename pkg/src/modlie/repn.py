"""Finite-dimensional modules over matrix Lie algebras.

An action matrix acts on column vectors. Subspaces of a module are
:class:`EchelonBasis` objects whose rows are the spanning vectors.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Optional, Sequence

import numpy as np

from . import polyfp
from .exactlinalg import EchelonBasis, FpMatrix, kernel_intersection, mod_matmul, nullspace, rref, solve_linear
from .liealg import MatrixLieAlgebra, Subspace, batch_bracket, center, span_of_products, is_toral
from .rng import SeedLike, make_rng

__all__ = [
    "LieModule",
    "CompositionSeries",
    "ParabolicData",
    "SearchExhausted",
    "IncompatibleAlgebras",
    "WeightOutOfRange",
    "NotPReductive",
    "CenterNotToral",
    "NotDirect",
    "BadFlag",
    "module_from_images",
    "natural_module",
    "trivial_module",
    "adjoint_module",
    "ambient_adjoint_module",
    "restrict",
    "dual",
    "tensor",
    "direct_sum",
    "sym_power",
    "ext_power",
    "sl2_simple",
    "spin",
    "find_submodule",
    "composition_series",
    "enveloping_algebra",
    "jacobson_radical",
    "is_semisimple",
    "socle",
    "v_nilpotent_radical",
    "strongly_p_reductive_decomposition",
    "preserved_bilinear_forms",
    "endomorphism_dim",
    "invariants",
    "parabolic_from_flag",
]


class SearchExhausted(RuntimeError):
    """Randomized submodule search ran out of attempts without a verdict."""


class IncompatibleAlgebras(ValueError):
    pass


class WeightOutOfRange(ValueError):
    pass


class NotPReductive(ValueError):
    pass


class CenterNotToral(ValueError):
    pass


class NotDirect(ValueError):
    pass


class BadFlag(ValueError):
    pass


class LieModule:
    """Representation of ``algebra``: ``action[i]`` is the image of basis element ``i``."""

    def __init__(self, algebra: MatrixLieAlgebra, action, check: bool = True, label: Optional[str] = None):
        p = algebra.p
        act = np.remainder(np.asarray(action, dtype=np.int64), p)
        if act.ndim == 2 and algebra.dim == 0:
            act = act.reshape(0, act.shape[0], act.shape[1])
        if act.ndim != 3 or act.shape[0] != algebra.dim or act.shape[1] != act.shape[2]:
            raise ValueError(f"need {algebra.dim} square action matrices, got shape {act.shape}")
        act.setflags(write=False)
        self.algebra = algebra
        self.action = act
        self.label = label
        if check:
            bad = self.bracket_defect()
            if bad is not None:
                raise ValueError(f"action does not respect the bracket of basis elements {bad}")

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def dim(self) -> int:
        return self.action.shape[1]

    def bracket_defect(self) -> Optional[tuple[int, int]]:
        """First basis pair whose bracket is not represented correctly, or ``None``."""
        d = self.algebra.dim
        if not d:
            return None
        c = self.algebra.structure_constants()
        A = self.action
        for i in range(d):
            lhs = batch_bracket(A[i][None], A, self.p)
            rhs = np.remainder(np.einsum("jk,kab->jab", c[i], A), self.p)
            bad = np.flatnonzero((lhs != rhs).reshape(d, -1).any(axis=1))
            if bad.size:
                return (i, int(bad[0]))
        return None

    def act(self, x) -> np.ndarray:
        """Action matrix of an algebra element given as an ambient matrix."""
        if isinstance(x, FpMatrix):
            x = x.array
        c = self.algebra.coords(x)
        if c is None:
            raise ValueError("element is not in the algebra")
        return np.remainder(np.tensordot(c, self.action, axes=1), self.p)

    def submodule(self, sub: EchelonBasis) -> "LieModule":
        """Action on an invariant subspace, in the coordinates of its echelon basis."""
        W = sub.rows
        imgs = mod_matmul(self.action, W.T[None], self.p)  # (d, dim, k)
        act = imgs[:, sub.pivots, :]
        return LieModule(self.algebra, act, check=False)

    def quotient(self, sub: EchelonBasis) -> "LieModule":
        """Action on ``V / sub`` in the coordinates of the non-pivot columns."""
        comp = sub.complement_pivots()
        E = np.zeros((len(comp), self.dim), dtype=np.int64)
        E[np.arange(len(comp)), comp] = 1
        imgs = mod_matmul(self.action, E.T[None], self.p)  # (d, dim, q)
        flat = np.transpose(imgs, (0, 2, 1)).reshape(-1, self.dim)
        red = sub.residue(flat)[:, comp].reshape(self.algebra.dim, len(comp), len(comp))
        return LieModule(self.algebra, np.transpose(red, (0, 2, 1)), check=False)

    def is_invariant(self, sub: EchelonBasis) -> bool:
        if not sub.dim:
            return True
        imgs = mod_matmul(self.action, sub.rows.T[None], self.p)
        return sub.contains_all(np.transpose(imgs, (0, 2, 1)).reshape(-1, self.dim))

    def __repr__(self) -> str:
        name = f" {self.label!r}" if self.label else ""
        return f"LieModule{name}(p={self.p}, algebra dim={self.algebra.dim}, dim={self.dim})"

    def to_json(self) -> dict:
        return {"dim": self.dim, "action": [a.tolist() for a in self.action]}


# ---------------------------------------------------------------------------
# constructors


def module_from_images(algebra: MatrixLieAlgebra, sources, images, label: Optional[str] = None) -> LieModule:
    """Module defined by the images of a spanning set of ``algebra``.

    The map is extended linearly; the result is checked to be a
    representation.
    """
    p = algebra.p
    srcs = [s.array if isinstance(s, FpMatrix) else np.asarray(s) for s in sources]
    imgs = np.stack([i.array if isinstance(i, FpMatrix) else np.asarray(i, dtype=np.int64) for i in images])
    C = np.stack([algebra.coords(s) if algebra.coords(s) is not None else _raise_outside() for s in srcs])
    # express each basis element of the algebra through the sources
    CT = FpMatrix._wrap(C.T, p)
    act = []
    for j in range(algebra.dim):
        e = np.zeros(algebra.dim, dtype=np.int64)
        e[j] = 1
        w = solve_linear(CT, e)
        if w is None:
            raise ValueError("sources do not span the algebra")
        act.append(np.remainder(np.tensordot(w, imgs, axes=1), p))
    return LieModule(algebra, np.stack(act) if act else np.zeros((0, imgs.shape[1], imgs.shape[1]), np.int64), label=label)


def _raise_outside():
    raise ValueError("source element is not in the algebra")


def natural_module(h: MatrixLieAlgebra) -> LieModule:
    return LieModule(h, h.matrices, check=False, label="natural")


def trivial_module(h: MatrixLieAlgebra, dim: int = 1) -> LieModule:
    return LieModule(h, np.zeros((h.dim, dim, dim), dtype=np.int64), check=False, label="trivial")


def adjoint_module(h: MatrixLieAlgebra) -> LieModule:
    return LieModule(h, h.ad_matrices(), check=False, label="adjoint")


def ambient_adjoint_module(h: MatrixLieAlgebra) -> LieModule:
    """``h`` acting on all of ``gl_n`` (row-major ``vec``) by brackets."""
    n, p = h.n, h.p
    eye = np.eye(n, dtype=np.int64)
    act = [np.remainder(np.kron(x, eye) - np.kron(eye, x.T), p) for x in h.matrices]
    return LieModule(h, np.stack(act) if act else np.zeros((0, n * n, n * n), np.int64), check=False, label="gl_n")


def restrict(m: LieModule, sub: MatrixLieAlgebra) -> LieModule:
    """Restriction to a subalgebra of ``m.algebra``."""
    act = [m.act(x) for x in sub.matrices]
    return LieModule(sub, np.stack(act) if act else np.zeros((0, m.dim, m.dim), np.int64), check=False)


def _same_algebra(a: LieModule, b: LieModule) -> None:
    if a.algebra is not b.algebra and a.algebra != b.algebra:
        raise IncompatibleAlgebras("modules are over different algebras")


def dual(m: LieModule) -> LieModule:
    act = np.remainder(-np.transpose(m.action, (0, 2, 1)), m.p)
    return LieModule(m.algebra, act, check=False)


def tensor(a: LieModule, b: LieModule) -> LieModule:
    _same_algebra(a, b)
    Ia, Ib = np.eye(a.dim, dtype=np.int64), np.eye(b.dim, dtype=np.int64)
    act = [np.remainder(np.kron(x, Ib) + np.kron(Ia, y), a.p) for x, y in zip(a.action, b.action)]
    return LieModule(a.algebra, np.stack(act) if act else np.zeros((0, a.dim * b.dim, a.dim * b.dim), np.int64), check=False)


def direct_sum(*mods: LieModule) -> LieModule:
    for m in mods[1:]:
        _same_algebra(mods[0], m)
    total = sum(m.dim for m in mods)
    d = mods[0].algebra.dim
    act = np.zeros((d, total, total), dtype=np.int64)
    o = 0
    for m in mods:
        act[:, o : o + m.dim, o : o + m.dim] = m.action
        o += m.dim
    return LieModule(mods[0].algebra, act, check=False)


def sym_power(m: LieModule, k: int) -> LieModule:
    """k-th symmetric power; basis = sorted index multisets in lexicographic order."""
    monos = list(itertools.combinations_with_replacement(range(m.dim), k))
    index = {mono: i for i, mono in enumerate(monos)}
    p = m.p
    act = np.zeros((m.algebra.dim, len(monos), len(monos)), dtype=np.int64)
    for col, mono in enumerate(monos):
        for pos in range(k):
            a = mono[pos]
            rest = mono[:pos] + mono[pos + 1 :]
            for b in range(m.dim):
                coeff = m.action[:, b, a]
                if not coeff.any():
                    continue
                tgt = index[tuple(sorted(rest + (b,)))]
                act[:, tgt, col] += coeff
    return LieModule(m.algebra, np.remainder(act, p), check=False)


def ext_power(m: LieModule, k: int) -> LieModule:
    """k-th exterior power; basis = increasing index tuples in lexicographic order."""
    subsets = list(itertools.combinations(range(m.dim), k))
    index = {s: i for i, s in enumerate(subsets)}
    act = np.zeros((m.algebra.dim, len(subsets), len(subsets)), dtype=np.int64)
    for col, s in enumerate(subsets):
        for pos, a in enumerate(s):
            for b in range(m.dim):
                coeff = m.action[:, b, a]
                if not coeff.any():
                    continue
                if b != a and b in s:
                    continue
                new = list(s)
                new[pos] = b
                order = sorted(range(k), key=lambda t: new[t])
                sign = _perm_sign(order)
                act[:, index[tuple(new[t] for t in order)], col] += sign * coeff
    return LieModule(m.algebra, np.remainder(act, m.p), check=False)


def _perm_sign(perm: Sequence[int]) -> int:
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def sl2_simple(m: int, p: int, algebra: Optional[MatrixLieAlgebra] = None, triple=None) -> LieModule:
    """The sl2-module ``L(m)`` with basis ``v_0..v_m``.

    ``h v_i = (m - 2i) v_i``, ``f v_i = (i + 1) v_{i+1}``, ``e v_i = (m - i + 1) v_{i-1}``.
    Without arguments the algebra is ``sl_2`` with ``e = E12``, ``f = E21``.
    """
    if not 0 <= m <= p - 1:
        raise WeightOutOfRange(f"highest weight {m} outside 0..{p - 1}")
    if algebra is None:
        e = np.array([[0, 1], [0, 0]])
        f = np.array([[0, 0], [1, 0]])
        h = np.array([[1, 0], [0, p - 1]])
        algebra = MatrixLieAlgebra([e, h, f], p, label="sl2")
        triple = (e, h, f)
    elif triple is None:
        raise ValueError("a custom algebra needs an (e, h, f) triple")
    E = np.zeros((m + 1, m + 1), dtype=np.int64)
    F = np.zeros_like(E)
    H = np.diag([(m - 2 * i) % p for i in range(m + 1)]).astype(np.int64)
    for i in range(m):
        F[i + 1, i] = (i + 1) % p
        E[i, i + 1] = (m - i) % p
    return module_from_images(algebra, list(triple), [E, H, F], label=f"L({m})")


# ---------------------------------------------------------------------------
# submodules


def spin(m: LieModule, vectors) -> EchelonBasis:
    """Smallest invariant subspace containing ``vectors``."""
    vecs = np.remainder(np.asarray(vectors, dtype=np.int64).reshape(-1, m.dim), m.p)
    ech = EchelonBasis(vecs, m.p, m.dim)
    fresh = ech.rows
    while fresh.shape[0] and ech.dim < m.dim:
        imgs = mod_matmul(m.action, fresh.T[None], m.p)
        imgs = np.transpose(imgs, (0, 2, 1)).reshape(-1, m.dim)
        res = ech.residue(imgs)
        res = res[res.any(axis=1)]
        if not res.shape[0]:
            break
        R, _ = rref(res, m.p)
        ech = ech.extend(R)
        fresh = R
    return ech


def _dual_spin(m: LieModule, w: np.ndarray) -> EchelonBasis:
    t = LieModule(m.algebra, np.transpose(m.action, (0, 2, 1)), check=False)
    return spin(t, w)


def _annihilator(W: EchelonBasis, dim: int, p: int) -> EchelonBasis:
    if not W.dim:
        return EchelonBasis(np.eye(dim, dtype=np.int64), p, dim)
    return EchelonBasis(nullspace(W.rows, p), p, dim)


def _random_algebra_element(m: LieModule, rng) -> np.ndarray:
    p, d, n = m.p, m.algebra.dim, m.dim
    if d == 0:
        return np.zeros((n, n), dtype=np.int64)

    def lin():
        return np.remainder(np.tensordot(rng.integers(0, p, size=d), m.action, axes=1), p)

    b = lin()
    word = lin()
    for _ in range(int(rng.integers(1, 4))):
        word = mod_matmul(word, lin(), p)
        b = np.remainder(b + word, p)
    return np.remainder(b + int(rng.integers(0, p)) * np.eye(n, dtype=np.int64), p)


def _lines(basis: np.ndarray, p: int) -> Iterable[np.ndarray]:
    """One representative per F_p-line of the row span of ``basis``."""
    k = basis.shape[0]
    for lead in range(k):
        for tail in itertools.product(range(p), repeat=k - lead - 1):
            c = np.zeros(k, dtype=np.int64)
            c[lead] = 1
            c[lead + 1 :] = tail
            yield mod_matmul(c[None], basis, p)[0]


def find_submodule(m: LieModule, seed: SeedLike = 0, attempts: int = 60, line_limit: int = 500) -> Optional[EchelonBasis]:
    """A proper nonzero submodule of ``m``, or ``None`` when ``m`` is irreducible.

    Uses Norton's criterion: for an element ``t`` of the enveloping algebra
    with nonzero kernel ``N``, ``m`` is irreducible iff every nonzero vector
    of ``N`` spins to ``m`` and one nonzero vector of ``ker t^T`` spins to the
    dual. Raises :class:`SearchExhausted` when no element with a kernel small
    enough to enumerate turns up within ``attempts`` tries.
    """
    p, n = m.p, m.dim
    if n <= 1:
        return None
    if not m.action.any():
        return EchelonBasis(np.eye(1, n, dtype=np.int64), p, n)
    rng = make_rng(seed)
    for _ in range(attempts):
        b = _random_algebra_element(m, rng)
        chi = polyfp.charpoly(b, p)
        for g in polyfp.irreducible_factors(chi, p, rng):
            theta = polyfp.eval_matrix(g, b, p)
            N = nullspace(theta, p)
            if not N.shape[0]:
                continue
            k = N.shape[0]
            # v and f(b) v spin to the same submodule, so one vector per
            # F_p[b]-line is enough when the kernel is a single such line
            if k == len(g) - 1:
                candidates: Iterable[np.ndarray] = [N[0]]
            elif (p**k - 1) // (p - 1) <= line_limit:
                candidates = _lines(N, p)
            else:
                continue
            for v in candidates:
                S = spin(m, v)
                if S.dim < n:
                    return S
            Nt = nullspace(theta.T, p)
            W = _dual_spin(m, Nt[0])
            if W.dim < n:
                return _annihilator(W, n, p)
            return None
    raise SearchExhausted(f"no certificate for a {n}-dimensional module after {attempts} attempts")


@dataclass
class CompositionSeries:
    """Flag ``0 = V_0 < V_1 < ... < V_m = V`` with irreducible factors."""

    flag: list[EchelonBasis]
    factors: list[LieModule]
    absolutely_irreducible: list[bool] = field(default_factory=list)

    @property
    def factor_dims(self) -> list[int]:
        return [f.dim for f in self.factors]

    @property
    def length(self) -> int:
        return len(self.factors)

    def adapted_basis(self) -> np.ndarray:
        """Columns run through ``V_1``, then a complement of ``V_1`` in ``V_2``, and so on."""
        p = self.flag[-1].p
        cols = []
        prev: Optional[EchelonBasis] = None
        for V in self.flag[1:]:
            if prev is None:
                cols.extend(V.rows)
            else:
                cur = prev
                for r in V.rows:
                    if not cur.contains(r):
                        cols.append(r)
                        cur = cur.extend(r)
            prev = V
        return np.remainder(np.array(cols, dtype=np.int64).T, p)


def endomorphism_dim(m: LieModule) -> int:
    """Dimension of the commutant ``{X : X a = a X for every action matrix a}``."""
    n, p = m.dim, m.p
    eye = np.eye(n, dtype=np.int64)

    def mk(a):
        op = np.remainder(np.kron(eye, a.T) - np.kron(a, eye), p)  # vec(Xa - aX)
        return lambda K: mod_matmul(K, op.T, p)

    return kernel_intersection((mk(a) for a in m.action), p, n * n).shape[0]


def composition_series(m: LieModule, seed: SeedLike = 0, attempts: int = 60) -> CompositionSeries:
    """Composition series by recursive submodule search; deterministic per seed."""
    rng = make_rng(seed)
    p, n = m.p, m.dim

    def rec(mod: LieModule) -> tuple[list[np.ndarray], list[LieModule]]:
        # returns flag as a list of row-stacks (cumulative spans) in mod's coordinates
        child = int(rng.integers(0, 2**63 - 1))
        S = find_submodule(mod, child, attempts)
        if S is None:
            return [np.eye(mod.dim, dtype=np.int64)], [mod]
        sub_flag, sub_facs = rec(mod.submodule(S))
        quo_flag, quo_facs = rec(mod.quotient(S))
        flag = [mod_matmul(F, S.rows, p) for F in sub_flag]
        comp = S.complement_pivots()
        for F in quo_flag:
            lift = np.zeros((F.shape[0], mod.dim), dtype=np.int64)
            lift[:, comp] = F
            flag.append(np.vstack([S.rows, lift]))
        return flag, sub_facs + quo_facs

    if n == 0:
        return CompositionSeries([EchelonBasis(np.zeros((0, 0)), p, 0)], [], [])
    stacks, factors = rec(m)
    flag = [EchelonBasis(np.zeros((0, n), dtype=np.int64), p, n)] + [EchelonBasis(F, p, n) for F in stacks]
    for V in flag:
        if not m.is_invariant(V):
            raise AssertionError("composition series member is not invariant")
    absolutely = [endomorphism_dim(f) == 1 for f in factors]
    return CompositionSeries(flag, factors, absolutely)


# ---------------------------------------------------------------------------
# enveloping algebra, radicals


def enveloping_algebra(m: LieModule) -> EchelonBasis:
    """Associative algebra generated by the identity and the action, as vectorised matrices."""
    n, p = m.dim, m.p
    ech = EchelonBasis(np.eye(n, dtype=np.int64).reshape(1, -1), p, n * n)
    fresh = ech.rows
    while fresh.shape[0]:
        prods = mod_matmul(m.action[:, None], fresh.reshape(1, -1, n, n), p).reshape(-1, n * n)
        res = ech.residue(prods)
        res = res[res.any(axis=1)]
        if not res.shape[0]:
            break
        R, _ = rref(res, p)
        ech = ech.extend(R)
        fresh = R
    return ech


def _block_mask(dims: Sequence[int], strict: bool) -> np.ndarray:
    """Mask of diagonal blocks (``strict=False``) as a boolean ``n x n`` array."""
    n = sum(dims)
    mask = np.zeros((n, n), dtype=bool)
    o = 0
    for d in dims:
        mask[o : o + d, o : o + d] = True
        o += d
    return mask


def _diag_block_kernel(mats: np.ndarray, series: CompositionSeries, p: int) -> np.ndarray:
    """Coefficient vectors ``c`` with ``sum c_k mats[k]`` zero on every factor."""
    P = series.adapted_basis()
    Pinv = FpMatrix._wrap(P, p).inverse().array
    conj = mod_matmul(mod_matmul(Pinv[None], mats, p), P[None], p)
    mask = _block_mask(series.factor_dims, False)
    A = conj[:, mask]  # (k, #diag-block entries)
    return nullspace(A.T, p)


def jacobson_radical(m: LieModule, seed: SeedLike = 0, series: Optional[CompositionSeries] = None) -> EchelonBasis:
    """Elements of the enveloping algebra that kill every composition factor."""
    p, n = m.p, m.dim
    if series is None:
        series = composition_series(m, seed)
    A = enveloping_algebra(m)
    K = _diag_block_kernel(A.rows.reshape(-1, n, n), series, p)
    vecs = mod_matmul(K, A.rows, p) if K.shape[0] else np.zeros((0, n * n), np.int64)
    return EchelonBasis(vecs, p, n * n)


def is_semisimple(m: LieModule, seed: SeedLike = 0) -> bool:
    """Complete reducibility via ``J V = 0`` for the Jacobson radical ``J``."""
    if m.dim == 0:
        return True
    return jacobson_radical(m, seed).dim == 0


def radical_of_module(m: LieModule, seed: SeedLike = 0) -> EchelonBasis:
    """``J V``."""
    n = m.dim
    J = jacobson_radical(m, seed)
    if not J.dim:
        return EchelonBasis(np.zeros((0, n), np.int64), m.p, n)
    imgs = np.transpose(J.rows.reshape(-1, n, n), (0, 2, 1)).reshape(-1, n)
    return EchelonBasis(imgs, m.p, n)


def socle(m: LieModule, seed: SeedLike = 0) -> EchelonBasis:
    """Common kernel of the Jacobson radical."""
    n = m.dim
    J = jacobson_radical(m, seed)
    if not J.dim:
        return EchelonBasis(np.eye(n, dtype=np.int64), m.p, n)
    return EchelonBasis(nullspace(J.rows.reshape(-1, n), m.p), m.p, n)


def invariants(m: LieModule) -> EchelonBasis:
    """``{v : a v = 0 for every action matrix a}``."""
    if not m.algebra.dim:
        return EchelonBasis(np.eye(m.dim, dtype=np.int64), m.p, m.dim)
    return EchelonBasis(nullspace(m.action.reshape(-1, m.dim), m.p), m.p, m.dim)


def v_nilpotent_radical(h: MatrixLieAlgebra, m: Optional[LieModule] = None, seed: SeedLike = 0) -> Subspace:
    """Largest ideal of ``h`` acting nilpotently on ``m`` (default: the natural module).

    Computed as the elements acting as zero on every composition factor; the
    ideal property and nilpotency are asserted.
    """
    if m is None:
        m = natural_module(h)
    p = h.p
    if not h.dim:
        return Subspace.zero(h.n, p)
    series = composition_series(m, seed)
    K = _diag_block_kernel(m.action, series, p)
    r = Subspace(mod_matmul(K, h.vectors, p).reshape(-1, h.n, h.n) if K.shape[0] else np.zeros((0, h.n, h.n), np.int64), p, h.n)
    if r.dim and not r.contains_all(span_of_products(h, r).matrices):
        raise AssertionError("V-nilpotent radical is not an ideal")
    for x in r.matrices:
        if (FpMatrix._wrap(m.act(x), p) ** max(m.dim, 1)).array.any():
            raise AssertionError("radical element does not act nilpotently")
    return r


def strongly_p_reductive_decomposition(h: MatrixLieAlgebra, seed: SeedLike = 0) -> tuple[Subspace, MatrixLieAlgebra]:
    """Split ``h = Z(h) + [h, h]`` with a toral centre and a centreless ideal."""
    r = v_nilpotent_radical(h, None, seed)
    if r.dim:
        raise NotPReductive(f"V-nilpotent radical has dimension {r.dim}")
    z = center(h)
    if not is_toral(z):
        raise CenterNotToral("centre is not a torus")
    d = span_of_products(h, h)
    ideal = MatrixLieAlgebra.from_subspace(d, check=False)
    if z.dim + d.dim != h.dim or (z + d).dim != h.dim:
        raise NotDirect(f"dim Z = {z.dim} and dim [h,h] = {d.dim} do not add up to {h.dim}")
    if ideal.dim and center(ideal).dim:
        raise NotDirect("derived algebra has a nonzero centre")
    if ideal.dim and v_nilpotent_radical(ideal, None, seed).dim:
        raise NotDirect("derived algebra has a nonzero V-nilpotent radical")
    return z, ideal


def preserved_bilinear_forms(m: LieModule) -> list[FpMatrix]:
    """Gram matrices ``G`` with ``a^T G + G a = 0`` for every action matrix."""
    n, p = m.dim, m.p
    eye = np.eye(n, dtype=np.int64)

    def mk(a):
        op = np.remainder(np.kron(a.T, eye) + np.kron(eye, a.T), p)
        return lambda K: mod_matmul(K, op.T, p)

    K = kernel_intersection((mk(a) for a in m.action), p, n * n)
    return [FpMatrix._wrap(k.reshape(n, n), p) for k in K]


# ---------------------------------------------------------------------------
# parabolics


@dataclass
class ParabolicData:
    """Block upper triangular stabiliser ``p = l + q`` of a flag in ``F_p^n``."""

    parabolic: MatrixLieAlgebra
    levi: MatrixLieAlgebra
    nilradical: MatrixLieAlgebra
    blocks: tuple[int, ...]
    filtration: list[Subspace]
    factor_shapes: list[list[tuple[int, int]]]

    @property
    def offsets(self) -> list[int]:
        return [sum(self.blocks[:i]) for i in range(len(self.blocks) + 1)]


def _elementary(n: int, positions) -> np.ndarray:
    out = np.zeros((len(positions), n, n), dtype=np.int64)
    for k, (i, j) in enumerate(positions):
        out[k, i, j] = 1
    return out


def parabolic_from_flag(p: int, n: int, flag_dims: Sequence[int]) -> ParabolicData:
    """Parabolic, Levi and nilradical of the standard flag with the given dimensions.

    ``q^(k)`` is spanned by block positions ``(i, j)`` with ``j - i >= k``;
    its factor ``q^(k) / q^(k+1)`` is the sum of the blocks ``V_i (x) V_j^*``
    with ``j - i = k``.
    """
    dims = [int(d) for d in flag_dims]
    if dims and dims[-1] == n:
        dims = dims[:-1]
    if any(d <= 0 or d >= n for d in dims) or any(b <= a for a, b in zip(dims, dims[1:])):
        raise BadFlag(f"flag dimensions {list(flag_dims)} are not strictly increasing inside (0, {n}]")
    cuts = [0] + dims + [n]
    blocks = tuple(b - a for a, b in zip(cuts, cuts[1:]))
    blk = np.zeros(n, dtype=int)
    for t in range(len(blocks)):
        blk[cuts[t] : cuts[t + 1]] = t
    pos_p = [(i, j) for i in range(n) for j in range(n) if blk[i] <= blk[j]]
    pos_l = [(i, j) for (i, j) in pos_p if blk[i] == blk[j]]
    pos_q = [(i, j) for (i, j) in pos_p if blk[i] < blk[j]]
    par = MatrixLieAlgebra(_elementary(n, pos_p), p, n, label="parabolic", raw=True)
    levi = MatrixLieAlgebra(_elementary(n, pos_l), p, n, label="levi", raw=True)
    nil = MatrixLieAlgebra(_elementary(n, pos_q), p, n, label="nilradical", raw=True)
    r = len(blocks)
    filtration = []
    shapes = []
    for k in range(1, r):
        filtration.append(Subspace(_elementary(n, [(i, j) for (i, j) in pos_q if blk[j] - blk[i] >= k]), p, n))
        shapes.append([(blocks[i], blocks[i + k]) for i in range(r - k)])
    filtration.append(Subspace.zero(n, p))
    return ParabolicData(par, levi, nil, blocks, filtration, shapes)
