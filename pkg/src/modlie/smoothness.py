"""Checks on whether the group normalising a subspace of ``gl_n`` is smooth.

Two independent certificates are combined. Nilpotent elements of the
normaliser are exponentiated with the truncated series and tested by
direct conjugation. Toral elements are tested for a lift to a diagonal
cocharacter through the Smith normal form of an integer relation matrix.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Optional, Sequence

import numpy as np

from . import polyfp
from .exactlinalg import (
    EchelonBasis,
    FpMatrix,
    IntMatrix,
    hermite_normal_form,
    int_kernel,
    mod_matmul,
    nullspace,
    rank_nullspace,
    smith_normal_form,
    solve_linear,
)
from .liealg import (
    MatrixLieAlgebra,
    Subspace,
    batch_bracket,
    is_toral,
    jordan_decomposition,
    lie_closure,
    normalizer,
    centralizer,
    invariant_complement,
)
from .repn import ParabolicData, parabolic_from_flag, v_nilpotent_radical
from .rng import SeedLike

__all__ = [
    "NotNormalized",
    "NotSplit",
    "NotNilpotentEnough",
    "RadicalNotInQ",
    "ObstructedAtStep",
    "NotInParabolic",
    "TorusLiftReport",
    "GeneratorStatus",
    "SmoothnessReport",
    "weight_basis",
    "relation_matrix",
    "torus_lift_test",
    "exp_nilpotent",
    "jacobson_coefficients",
    "jacobson_operator",
    "jacobson_kernel_test",
    "ad_exp_check",
    "ad_matrix",
    "conjugation_matrix",
    "nilpotent_lift_normalizer",
    "levi_complement",
    "smoothness_report",
    "reductive_pair_counts",
    "ConjugateCheck",
    "relation_lattice",
    "fibonacci_conjugate_checks",
]


class NotNormalized(ValueError):
    pass


class NotSplit(ValueError):
    pass


class NotNilpotentEnough(ValueError):
    pass


class RadicalNotInQ(ValueError):
    pass


class NotInParabolic(ValueError):
    pass


class ObstructedAtStep(ValueError):
    def __init__(self, step: int, message: str = ""):
        self.step = step
        super().__init__(message or f"coboundary equation has no solution at filtration step {step}")


# ---------------------------------------------------------------------------
# weights and relation matrices


def _ad_on(h: Subspace, z: np.ndarray, coords_basis: np.ndarray) -> np.ndarray:
    """Matrix (column convention) of ``ad z`` on the span of ``coords_basis`` (rows are h-coordinates)."""
    p, n = h.p, h.n
    mats = mod_matmul(coords_basis, h.vectors, p).reshape(-1, n, n)
    br = batch_bracket(z[None], mats, p).reshape(len(mats), -1)
    # coordinates of the brackets with respect to the rows of coords_basis
    hc = np.stack([h.coords(b.reshape(n, n)) for b in br]) if len(br) else np.zeros((0, h.dim), np.int64)
    A = FpMatrix._wrap(coords_basis.T.copy(), p)
    cols = [solve_linear(A, v) for v in hc]
    if any(c is None for c in cols):
        raise NotNormalized("a weight piece is not ad(c)-stable")
    return np.stack(cols, axis=1) if cols else np.zeros((0, 0), np.int64)


def weight_basis(h: Subspace, c: Subspace) -> list[tuple[np.ndarray, tuple[int, ...]]]:
    """Basis of ``h`` by simultaneous ``ad(c)``-eigenvectors, each with its weight.

    The weight of a vector is the tuple of its eigenvalues under the basis of
    ``c``. Within a weight space the basis is the reduced echelon one.
    """
    p, n = h.p, h.n
    if not is_toral(c):
        raise NotSplit("c is not toral")
    if c.dim and h.dim and not h.contains_all(batch_bracket(c.matrices[:, None], h.matrices[None], p).reshape(-1, n, n)):
        raise NotNormalized("[c, h] is not contained in h")
    pieces: list[tuple[np.ndarray, tuple[int, ...]]] = [(np.eye(h.dim, dtype=np.int64), ())]
    for z in c.matrices:
        nxt = []
        for C, w in pieces:
            A = _ad_on(h, z, C)
            chi = polyfp.charpoly(A, p)
            roots = [(-g[0]) % p for g in polyfp.irreducible_factors(chi, p, np.random.default_rng(0)) if len(g) == 2]
            total = 0
            for lam in sorted(roots):
                K = nullspace(np.remainder(A - lam * np.eye(A.shape[0], dtype=np.int64), p), p)
                total += K.shape[0]
                nxt.append((mod_matmul(K, C, p), w + (lam,)))
            if total != C.shape[0]:
                raise NotSplit("ad(c) is not diagonalisable over F_p on h")
        pieces = nxt
    out = []
    for C, w in pieces:
        vecs = EchelonBasis(mod_matmul(C, h.vectors, p), p, n * n).rows
        out.extend((v.reshape(n, n), w) for v in vecs)
    return out


def relation_matrix(basis: Sequence) -> IntMatrix:
    """Integer rows ``e_j - e_k - e_l + e_m`` for pairs of nonzero positions of each basis matrix.

    Zero rows are dropped and duplicates keep their first occurrence.
    """
    mats = [b.array if isinstance(b, FpMatrix) else np.asarray(b) for b in basis]
    if not mats:
        return IntMatrix([], 0)
    n = mats[0].shape[0]
    rows: list[tuple[int, ...]] = []
    seen = set()
    for m in mats:
        pos = list(zip(*np.nonzero(m)))
        for (j, k), (l, mm) in itertools.combinations(pos, 2):
            r = [0] * n
            r[j] += 1
            r[k] -= 1
            r[l] -= 1
            r[mm] += 1
            t = tuple(r)
            if any(t) and t not in seen:
                seen.add(t)
                rows.append(t)
    return IntMatrix(rows, n)


@dataclass
class TorusLiftReport:
    p: int
    relation_matrix: IntMatrix
    modp_nullity: int
    integral_nullity: int
    elementary_divisors: list[int]
    obstructed: bool
    witness: Optional[list[int]] = None
    integral_kernel: list[tuple[int, ...]] = field(default_factory=list)
    basis_kind: str = "supplied"

    @property
    def divisors_divisible_by_p(self) -> int:
        return sum(1 for d in self.elementary_divisors if d and d % self.p == 0)

    def to_json(self, emit_witness: bool = True) -> dict:
        out = {
            "p": self.p,
            "relation_matrix": [[str(x) for x in r] for r in self.relation_matrix.entries],
            "modp_nullity": self.modp_nullity,
            "integral_nullity": self.integral_nullity,
            "elementary_divisors": [str(d) for d in self.elementary_divisors],
            "obstructed": self.obstructed,
            "basis_kind": self.basis_kind,
            "integral_kernel": [[str(x) for x in v] for v in self.integral_kernel],
        }
        if emit_witness:
            out["witness"] = self.witness
        return out


def torus_lift_test(h: Optional[Subspace], basis: Sequence, p: Optional[int] = None, basis_kind: str = "supplied") -> TorusLiftReport:
    """Compare the mod-p and integral nullities of the relation matrix of ``basis``.

    A kernel vector mod ``p`` is a diagonal matrix normalising every basis
    line; a lift to a cocharacter is an integral kernel vector reducing to
    it. The lift fails for some direction exactly when ``p`` divides a
    nonzero elementary divisor.
    """
    if p is None:
        if h is None:
            raise ValueError("need either h or p")
        p = h.p
    R = relation_matrix(basis)
    if not basis:
        raise ValueError("empty basis")
    n = (basis[0].array if isinstance(basis[0], FpMatrix) else np.asarray(basis[0])).shape[0]
    if R.rows == 0:
        R = IntMatrix([], n)
        modp_kernel = np.eye(n, dtype=np.int64)
        sf_d: list[int] = []
        lattice = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    else:
        _, modp_kernel = rank_nullspace(R.mod(p))
        sf = smith_normal_form(R)
        sf_d = list(sf.d)
        lattice = int_kernel(R)
    modp_nullity = modp_kernel.shape[0]
    integral_nullity = len(lattice)
    obstructed = modp_nullity > integral_nullity
    ndiv = sum(1 for d in sf_d if d and d % p == 0)
    if (ndiv > 0) != obstructed or modp_nullity - integral_nullity != ndiv:
        raise AssertionError("divisor count disagrees with the nullity comparison")
    reduced = EchelonBasis(np.remainder(np.array(lattice, dtype=object), p).astype(np.int64) if lattice else np.zeros((0, n)), p, n)
    witness = None
    if obstructed:
        for v in modp_kernel:
            if not reduced.contains(v):
                witness = [int(x) for x in v]
                break
    elif reduced.dim != modp_nullity or not EchelonBasis(modp_kernel, p, n) == reduced:
        raise AssertionError("reduced integral kernel does not span the mod-p kernel")
    return TorusLiftReport(p, R, modp_nullity, integral_nullity, sf_d, obstructed, witness, lattice, basis_kind)


# ---------------------------------------------------------------------------
# exponentials


def _check_nilpotent(x: FpMatrix) -> None:
    if (x ** x.p).array.any():
        raise NotNilpotentEnough(f"x^{x.p} != 0")


def _truncated_exp(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    out = np.eye(n, dtype=np.int64)
    term = np.eye(n, dtype=np.int64)
    for k in range(1, p):
        term = mod_matmul(term, a, p) * pow(k, -1, p) % p
        if not term.any():
            break
        out = np.remainder(out + term, p)
    return out


def exp_nilpotent(x: FpMatrix) -> FpMatrix:
    """``sum_{k<p} x^k / k!`` for ``x`` with ``x^p = 0``."""
    _check_nilpotent(x)
    return FpMatrix._wrap(_truncated_exp(x.array, x.p), x.p)


def jacobson_coefficients(p: int) -> list[int]:
    """``c_i = binom(p, i) / p mod p`` for ``i = 1 .. p-1``, cross-checked against ``(-1)^(i-1) / i``."""
    out = []
    for i in range(1, p):
        c = (comb(p, i) // p) % p
        alt = ((-1) ** (i - 1) * pow(i, -1, p)) % p
        if c != alt:
            raise AssertionError(f"coefficient formulas disagree at i = {i}")
        out.append(c)
    return out


def jacobson_operator(x: FpMatrix, y: np.ndarray) -> np.ndarray:
    """``W(y) = sum_i c_i x^i y (-x)^(p-i)``; ``y`` may be a stack of matrices."""
    p = x.p
    a = x.array
    c = jacobson_coefficients(p)
    eye = np.eye(a.shape[0], dtype=np.int64)
    left, neg = [eye], [eye]
    na = np.remainder(-a, p)
    for _ in range(p):
        left.append(mod_matmul(left[-1], a, p))
        neg.append(mod_matmul(neg[-1], na, p))
    y = np.remainder(np.asarray(y, dtype=np.int64), p)
    out = np.zeros_like(y)
    for i in range(1, p):
        if not left[i].any() or not neg[p - i].any():
            continue
        term = mod_matmul(mod_matmul(left[i], y, p), neg[p - i], p)
        out = np.remainder(out + c[i - 1] * term, p)
    return out


def jacobson_kernel_test(x: FpMatrix, h: Subspace) -> bool:
    """Whether ``W`` annihilates every basis element of ``h``."""
    _check_nilpotent(x)
    return not h.dim or not jacobson_operator(x, h.matrices).any()


def ad_exp_check(x: FpMatrix, h: Subspace) -> bool:
    """Whether ``exp(x) b exp(-x)`` lies in ``h`` for every basis element ``b``."""
    _check_nilpotent(x)
    p = x.p
    E = _truncated_exp(x.array, p)
    Ei = _truncated_exp(np.remainder(-x.array, p), p)
    if not h.dim:
        return True
    conj = mod_matmul(mod_matmul(E[None], h.matrices, p), Ei[None], p)
    return h.contains_all(conj)


def ad_matrix(x: FpMatrix) -> FpMatrix:
    """``ad x`` on row-major ``vec`` of ``gl_n``."""
    n, p = x.rows, x.p
    eye = np.eye(n, dtype=np.int64)
    return FpMatrix._wrap(np.remainder(np.kron(x.array, eye) - np.kron(eye, x.array.T), p), p)


def conjugation_matrix(g: FpMatrix) -> FpMatrix:
    """``y -> g y g^-1`` on row-major ``vec`` of ``gl_n``."""
    gi = g.inverse()
    return FpMatrix._wrap(np.remainder(np.kron(g.array, gi.array.T), g.p), g.p)


# ---------------------------------------------------------------------------
# the nilpotent part


@dataclass
class GeneratorStatus:
    index: int
    in_normalizer: bool
    p_nilpotent: bool
    jacobson: Optional[bool]
    ad_exp: Optional[bool]

    @property
    def passes(self) -> bool:
        return bool(self.in_normalizer and self.p_nilpotent and self.ad_exp)


def nilpotent_lift_normalizer(
    g: Subspace, h: Subspace, nrm: Optional[MatrixLieAlgebra] = None
) -> tuple[MatrixLieAlgebra, list[GeneratorStatus], list[np.ndarray], list[np.ndarray]]:
    """Exponentiate the nilpotent Jordan parts of a basis of ``n_g(h)``.

    Returns the Lie algebra generated by the parts that pass the direct
    conjugation test, the per-generator statuses, the nilpotent generators
    and the semisimple parts.
    """
    p, n = g.p, g.n
    if nrm is None:
        nrm = normalizer(g, h)
    nil, semi = [], []
    for b in nrm.basis:
        s, x = jordan_decomposition(b)
        if x.array.any():
            nil.append(x.array)
        if s.array.any():
            semi.append(s.array)
    # the parts themselves are kept: echelon mixtures of them need not be nilpotent
    statuses = []
    passing = []
    for k, x in enumerate(nil):
        X = FpMatrix._wrap(x, p)
        inn = nrm.contains(x)
        pn = not (X**p).array.any()
        jac = jacobson_kernel_test(X, h) if pn else None
        ade = ad_exp_check(X, h) if pn else None
        st = GeneratorStatus(k, inn, pn, jac, ade)
        statuses.append(st)
        if st.passes:
            passing.append(x)
    gen = lie_closure(passing, p, n) if passing else MatrixLieAlgebra(np.zeros((0, n, n), np.int64), p, n)
    return gen, statuses, nil, semi


# ---------------------------------------------------------------------------
# Levi complements


def _block_diagonal_part(mats: np.ndarray, par: ParabolicData) -> np.ndarray:
    out = np.zeros_like(mats)
    o = par.offsets
    for a, b in zip(o, o[1:]):
        out[:, a:b, a:b] = mats[:, a:b, a:b]
    return out


def levi_complement(h: MatrixLieAlgebra, flag: Sequence[int], seed: SeedLike = 0) -> tuple[MatrixLieAlgebra, Subspace]:
    """Complement ``s`` to the V-nilpotent radical ``r`` of ``h``, with ``h = s + r``.

    A linear section of ``h -> h / r`` is corrected one filtration layer
    ``r_k = r & q^(k)`` at a time by solving the coboundary equation for its
    failure to be a homomorphism. Returns ``(s, r)``.
    """
    p, n = h.p, h.n
    par = parabolic_from_flag(p, n, flag)
    if not h <= par.parabolic:
        raise NotInParabolic("h is not contained in the flag parabolic")
    r = v_nilpotent_radical(h, None, seed)
    if not r <= par.nilradical:
        raise RadicalNotInQ("V-nilpotent radical is not inside the nilradical")
    # image in the Levi factor and a linear section back into h
    proj = _block_diagonal_part(h.matrices, par)
    sbar = Subspace(proj, p, n)
    if sbar.dim + r.dim != h.dim:
        raise RadicalNotInQ("h & q is larger than the radical")
    d = sbar.dim
    if d == 0:
        return MatrixLieAlgebra(np.zeros((0, n, n), np.int64), p, n, label="s"), r
    P = FpMatrix._wrap(proj.reshape(h.dim, -1).T.copy(), p)
    sigma = []
    for a in sbar.matrices:
        c = solve_linear(P, a.reshape(-1))
        sigma.append(mod_matmul(c[None], h.vectors, p)[0].reshape(n, n))
    sigma = np.stack(sigma)
    sb_alg = MatrixLieAlgebra.from_subspace(sbar, check=False)
    C = sb_alg.structure_constants()  # [a_i, a_j] = sum_k C[i,j,k] a_k
    layers = [r.intersect(q) for q in par.filtration]
    pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    for step, (rk, rk1) in enumerate(zip(layers, layers[1:]), start=1):
        if rk.dim == rk1.dim:
            continue
        # failure cocycle f(a_i, a_j) = [s_i, s_j] - sum_k C_ijk s_k, lies in r_k
        f = np.stack([np.remainder(batch_bracket(sigma[i], sigma[j], p) - np.tensordot(C[i, j], sigma, axes=1), p) for i, j in pairs]) if pairs else np.zeros((0, n, n), np.int64)
        if not pairs:
            break
        if not rk.contains_all(f):
            raise AssertionError(f"section fails to be a homomorphism modulo r_{step}")
        comp = rk1.echelon.complement_pivots()
        red = lambda X: rk1.residue(X)[:, comp]  # noqa: E731
        rb = rk.matrices
        m = rb.shape[0]
        # unknown phi(a_i) = sum_t u[i, t] rb[t]; equation per pair (i, j):
        # [s_i, phi a_j] - [s_j, phi a_i] - sum_k C_ijk phi a_k == f_ij  (mod r_{k+1})
        br = batch_bracket(sigma[:, None], rb[None], p)  # br[i, t] = [s_i, rb_t]
        rows_blocks = []
        for (i, j) in pairs:
            coef = np.zeros((d, m, len(comp)), dtype=np.int64)
            coef[j] += red(br[i])
            coef[i] -= red(br[j])
            for k in range(d):
                if C[i, j, k]:
                    coef[k] -= C[i, j, k] * red(rb)
            rows_blocks.append(np.remainder(coef, p).reshape(d * m, len(comp)).T)
        A = FpMatrix._wrap(np.vstack(rows_blocks), p)
        rhs = np.concatenate([red(fij[None])[0] for fij in f])
        u = solve_linear(A, rhs)
        if u is None:
            raise ObstructedAtStep(step)
        u = u.reshape(d, m)
        sigma = np.remainder(sigma - np.tensordot(u, rb, axes=1), p)
    s = Subspace(sigma, p, n)
    if not all(not np.remainder(batch_bracket(sigma[i], sigma[j], p) - np.tensordot(C[i, j], sigma, axes=1), p).any() for i, j in pairs):
        raise AssertionError("corrected section is not a homomorphism")
    s_alg = MatrixLieAlgebra.from_subspace(s, label="s")
    if s.intersect(r).dim or s.dim + r.dim != h.dim or not (s + r) == h.as_subspace():
        raise AssertionError("complement is not transverse to the radical")
    return s_alg, r


# ---------------------------------------------------------------------------
# aggregate report


@dataclass
class SmoothnessReport:
    dim_lie_normalizer: int
    generated_dim: int
    generator_statuses: list[GeneratorStatus]
    torus_dim: int
    torus_part: Optional[TorusLiftReport]
    verdict: str
    notes: list[str] = field(default_factory=list)
    conjugate_checks: list["ConjugateCheck"] = field(default_factory=list)

    def to_json(self, emit_witness: bool = False) -> dict:
        return {
            "dim_lie_normalizer": self.dim_lie_normalizer,
            "nilpotent_part": {
                "generated_dim": self.generated_dim,
                "statuses": [
                    {
                        "index": s.index,
                        "in_normalizer": s.in_normalizer,
                        "p_nilpotent": s.p_nilpotent,
                        "jacobson": s.jacobson,
                        "ad_exp": s.ad_exp,
                    }
                    for s in self.generator_statuses
                ],
            },
            "torus_dim": self.torus_dim,
            "torus_part": self.torus_part.to_json(emit_witness) if self.torus_part else None,
            "verdict": self.verdict,
            "notes": list(self.notes),
            "conjugate_checks": [c.to_json() for c in self.conjugate_checks],
        }


def _diagonal_subspace(n: int, p: int) -> Subspace:
    d = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        d[i, i, i] = 1
    return Subspace(d, p, n)


def smoothness_report(
    g: Subspace,
    h: Subspace,
    torus: Optional[Subspace] = None,
    basis: Optional[Sequence] = None,
    conjugate_checks: Optional[Sequence["ConjugateCheck"]] = None,
) -> SmoothnessReport:
    """Run the nilpotent and toral certificates on ``n_g(h)``.

    Verdicts: ``Obstructed`` when a normalising toral direction has no
    diagonal cocharacter lift for the chosen basis; ``CertifiedSmoothTorus``
    when every nilpotent generator exponentiates into the normaliser and
    the generated algebra plus the lifted torus fill the normaliser;
    ``Inconclusive`` otherwise.
    """
    p, n = g.p, g.n
    notes: list[str] = []
    nrm = normalizer(g, h)
    gen, statuses, _, _ = nilpotent_lift_normalizer(g, h, nrm)
    if torus is None:
        torus = nrm.intersect(_diagonal_subspace(n, p))
        notes.append(f"torus: normaliser meets the diagonal in dimension {torus.dim}")
    report = None
    lifted = Subspace.zero(n, p)
    if torus.dim:
        if basis is None:
            wb = weight_basis(h, torus)
            basis = [b for b, _ in wb]
            kind = "weight"
        else:
            kind = "supplied"
        report = torus_lift_test(h, list(basis), p, kind)
        if not report.obstructed:
            diag = np.zeros((len(report.integral_kernel), n, n), dtype=np.int64)
            for k, v in enumerate(report.integral_kernel):
                diag[k] = np.diag([x % p for x in v])
            lifted = Subspace(diag, p, n).intersect(nrm)
    elif h.dim:
        notes.append("no normalising diagonal torus; toral certificate skipped")
    if report is not None and report.obstructed:
        verdict = "Obstructed"
        notes.append("a normalising toral direction has no diagonal cocharacter lift under the chosen basis")
        if conjugate_checks:
            good = sum(c.passes for c in conjugate_checks)
            notes.append(f"sampled unipotent conjugates keeping s: {good} of {len(conjugate_checks)} keep the relation lattice")
        else:
            notes.append("conjugates of the basis under the centraliser of the torus are not examined")
    elif all(s.passes for s in statuses) and (gen.as_subspace() + lifted).dim == nrm.dim:
        verdict = "CertifiedSmoothTorus"
    else:
        verdict = "Inconclusive"
        failed = [s.index for s in statuses if not s.passes]
        if failed:
            notes.append(f"nilpotent generators failing the exponential test: {failed}")
        notes.append(f"certified part has dimension {(gen.as_subspace() + lifted).dim} of {nrm.dim}")
    return SmoothnessReport(nrm.dim, gen.dim, statuses, torus.dim, report, verdict, notes, list(conjugate_checks or []))


def reductive_pair_counts(h: Subspace, small: Subspace, big: Optional[Subspace] = None) -> tuple[int, int, int]:
    """``(dim n_big(h), dim n_small(h), dim c_m(h))`` with ``m`` the trace complement of ``small``.

    For ``h`` inside ``small`` the first equals the sum of the other two.
    """
    p, n = small.p, small.n
    if big is None:
        big = MatrixLieAlgebra(np.eye(n * n, dtype=np.int64).reshape(-1, n, n), p, n, raw=True)
    m = invariant_complement(small)
    return normalizer(big, h).dim, normalizer(small, h).dim, centralizer(m, h).dim


# ---------------------------------------------------------------------------
# conjugates of the Fibonacci algebra under unipotent centralisers of s


def relation_lattice(basis: Sequence) -> list[tuple[int, ...]]:
    """Hermite normal form of the row lattice of :func:`relation_matrix`."""
    R = relation_matrix(basis)
    return hermite_normal_form(R.entries, R.cols)


@dataclass
class ConjugateCheck:
    generator: tuple[int, int]  # 1-indexed position of the root element
    t: int
    lambdas_after: Optional[tuple[int, int, int]]
    same_family: bool
    same_lattice: bool

    @property
    def passes(self) -> bool:
        return self.same_family and self.same_lattice

    def to_json(self) -> dict:
        return {
            "generator": list(self.generator),
            "t": self.t,
            "lambdas_after": list(self.lambdas_after) if self.lambdas_after else None,
            "same_family": self.same_family,
            "same_lattice": self.same_lattice,
        }


def fibonacci_conjugate_checks(n: int = 5, p: int = 13, lambdas=(0, 0, 0), ts: Sequence[int] = (1,)) -> list[ConjugateCheck]:
    """Conjugate the Fibonacci algebra by ``1 + t E_ij`` for the four root elements commuting with ``s``.

    Three of them move only one of the parameters (``lambda_k -> lambda_k - t``),
    the remaining one normalises ``h``. Each sampled conjugate is compared
    with the family member at the predicted parameters, and the relation
    lattices of the two weight bases are compared. Only finitely many ``t``
    are sampled, so this is evidence, not a proof, for all ``t``.
    """
    from .constructions import fibonacci_example

    lam = tuple(int(x) % p for x in lambdas)
    base = fibonacci_example(n, p, lam)
    N = base.n
    base_lattice = relation_lattice(base.attachments["basis"])
    r = n
    gens = [((r, r + 2), 0), ((2 * r + 1, 2 * r + 3), None), ((2 * r + 6, 2 * r + 8), 1), ((2 * r + 10, 2 * r + 12), 2)]
    s = base.attachments["toral_element"]
    out = []
    for (i, j), k in gens:
        if s[i - 1, i - 1] != s[j - 1, j - 1]:
            raise AssertionError(f"1 + t E_{i},{j} does not commute with s")
        for t in ts:
            u = np.eye(N, dtype=np.int64)
            u[i - 1, j - 1] = t % p
            ui = np.eye(N, dtype=np.int64)
            ui[i - 1, j - 1] = (-t) % p
            conj = mod_matmul(mod_matmul(u[None], base.algebra.matrices, p), ui[None], p)
            hg = Subspace(conj, p, N)
            new = list(lam)
            if k is not None:
                new[k] = (new[k] - t) % p
            new_t = tuple(new)
            other = fibonacci_example(n, p, new_t) if k is not None else base
            same = other.algebra == hg
            lattice = relation_lattice(other.attachments["basis"]) == base_lattice
            out.append(ConjugateCheck((i, j), int(t), new_t if same else None, same, lattice))
    return out
