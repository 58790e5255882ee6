import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modlie import repn as R
from modlie.constructions import classical, fibonacci_example, smooth_unipotent_example
from modlie.exactlinalg import FpMatrix, smith_normal_form
from modlie.liealg import MatrixLieAlgebra, Subspace, batch_bracket, jordan_decomposition, lie_closure, normalizer
from modlie.smoothness import (
    NotNilpotentEnough,
    NotNormalized,
    ad_exp_check,
    ad_matrix,
    conjugation_matrix,
    exp_nilpotent,
    fibonacci_conjugate_checks,
    jacobson_coefficients,
    jacobson_kernel_test,
    levi_complement,
    reductive_pair_counts,
    relation_lattice,
    relation_matrix,
    smoothness_report,
    torus_lift_test,
    weight_basis,
)

import oracles
from generators import random_flag, random_nilpotent, random_sparse_basis, scrambled_semidirect


def E(i, j, n):
    m = np.zeros((n, n), dtype=np.int64)
    m[i, j] = 1
    return m


@pytest.fixture(scope="module")
def fib():
    return fibonacci_example(5, 13)


# ---------------------------------------------------------------------------
# relation matrices and the torus lift


def test_relation_matrix_examples():
    R1 = relation_matrix([E(0, 1, 4) + E(2, 3, 4)])
    assert list(R1.entries) == [(1, -1, -1, 1)]
    assert relation_matrix([np.diag([1, 2])]).rows == 0
    assert relation_matrix([E(0, 1, 3)]).rows == 0


def test_relation_matrix_dedup_keeps_first_occurrence():
    a = E(0, 1, 3) + E(1, 2, 3)
    R1 = relation_matrix([a, a, 2 * a])
    assert list(R1.entries) == [(1, -2, 1)]


def test_torus_lift_single_root():
    r = torus_lift_test(None, [E(0, 1, 2)], 5)
    assert not r.obstructed
    assert (1, 0) in r.integral_kernel


def test_fibonacci_obstruction(fib):
    r = torus_lift_test(fib.algebra, fib.attachments["basis"])
    nz = [d for d in r.elementary_divisors if d]
    assert sorted(nz) == [1] * 17 + [13]
    assert r.elementary_divisors.count(0) + (r.relation_matrix.cols - len(r.elementary_divisors)) == 4
    assert r.obstructed and r.modp_nullity == r.integral_nullity + 1
    # the witness is a diagonal direction normalising every basis line with no integral lift
    w = np.diag(r.witness)
    for b in fib.attachments["basis"]:
        br = np.remainder(w @ b - b @ w, 13)
        assert Subspace([b], 13).contains(br)
    assert sorted(nz) == oracles.elementary_divisors(r.relation_matrix.entries, r.relation_matrix.cols)


def test_fibonacci_control(fib):
    basis7 = [np.remainder(b, 7) for b in fib.attachments["integer_basis"]]
    r = torus_lift_test(None, basis7, 7)
    assert not r.obstructed and r.divisors_divisible_by_p == 0


def test_weight_basis_of_root_spaces():
    p = 5
    h = Subspace([E(0, 1, 3), E(1, 2, 3), E(0, 2, 3)], p)
    diag = Subspace([E(i, i, 3) for i in range(3)], p)
    wb = weight_basis(h, diag)
    assert len(wb) == 3
    for b, w in wb:
        (i, j), = zip(*np.nonzero(b))
        want = [0, 0, 0]
        want[i] += 1
        want[j] -= 1
        assert w == tuple(x % p for x in want)
    zero = weight_basis(h, Subspace.zero(3, p))
    assert all(w == () for _, w in zero) and Subspace([b for b, _ in zero], p) == h


def test_weight_basis_requires_normalising_torus():
    p = 5
    h = Subspace([E(0, 1, 2)], p)
    with pytest.raises(NotNormalized):
        weight_basis(h, _non_normalising_torus(p))


def _non_normalising_torus(p):
    # diag(1, 2) conjugated so its eigenlines move: [c, E12] leaves span{E12}
    g = FpMatrix([[1, 0], [1, 1]], p)
    c = (g @ FpMatrix(np.diag([1, 2]), p) @ g.inverse()).array
    return Subspace([c], p)


def test_fibonacci_weight_basis_partition(fib):
    h = fib.algebra
    c = Subspace([fib.attachments["toral_element"]], 13)
    wb = weight_basis(h, c)
    assert Subspace([b for b, _ in wb], 13, h.n) == h
    weights = {w for _, w in wb}
    assert (0,) in weights and len(weights) > 1


@st.composite
def sparse_bases(draw, max_n=6):
    n = draw(st.integers(2, max_n))
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    p = draw(st.sampled_from([2, 3, 5, 7, 13]))
    basis = random_sparse_basis(rng, n, p, int(rng.integers(1, 2 * n)))
    return n, p, basis


@given(sparse_bases())
def test_torus_lift_consistency(args):
    n, p, basis = args
    if not basis:
        return
    r = torus_lift_test(None, basis, p)
    R_ = r.relation_matrix
    assert r.modp_nullity == n - oracles.rank_mod_p(R_.entries, p) if R_.rows else r.modp_nullity == n
    assert r.integral_nullity == n - (oracles.rank_q(R_.entries, n) if R_.rows else 0)
    assert r.obstructed == (r.divisors_divisible_by_p > 0) == (r.modp_nullity > r.integral_nullity)
    for v in r.integral_kernel:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in R_.entries)
    if r.obstructed:
        assert r.witness is not None
        assert not any(sum(a * b for a, b in zip(row, r.witness)) % p for row in R_.entries)


@given(sparse_bases())
def test_minor_bound(args):
    n, p, basis = args
    if not basis:
        return
    R_ = relation_matrix(basis)
    if R_.rows:
        assert all(d <= 2 ** (2 * n) for d in smith_normal_form(R_).d)


def test_relation_lattice_is_lambda_independent():
    a = fibonacci_example(5, 13, (0, 0, 0))
    b = fibonacci_example(5, 13, (1, 2, 3))
    assert relation_lattice(a.attachments["basis"]) == relation_lattice(b.attachments["basis"])


def test_conjugate_checks():
    checks = fibonacci_conjugate_checks(5, 13, (0, 0, 0), ts=(2,))
    assert len(checks) == 4
    assert all(c.passes for c in checks)
    moved = [c.lambdas_after for c in checks if c.generator != (11, 13)]
    assert sorted(moved) == sorted([(11, 0, 0), (0, 11, 0), (0, 0, 11)])


# ---------------------------------------------------------------------------
# exponentials


def test_exp_examples():
    p = 5
    assert exp_nilpotent(FpMatrix.zeros(3, 3, p)) == FpMatrix.identity(3, p)
    x = FpMatrix(E(0, 1, 2), p)
    assert exp_nilpotent(x) == FpMatrix.identity(2, p) + x
    J = FpMatrix([[0, 1, 0], [0, 0, 1], [0, 0, 0]], p)
    assert exp_nilpotent(J) @ exp_nilpotent(-J) == FpMatrix.identity(3, p)
    with pytest.raises(NotNilpotentEnough):
        exp_nilpotent(FpMatrix(np.eye(2, dtype=np.int64), p))


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_jacobson_coefficients(p):
    c = jacobson_coefficients(p)
    assert len(c) == p - 1
    assert all((i * ci) % p == (-1) ** (i - 1) % p for i, ci in enumerate(c, start=1))


@given(st.sampled_from([7, 11]), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_ad_exp_equals_exp_ad(p, n, seed):
    x = FpMatrix(random_nilpotent(np.random.default_rng(seed), n, p), p)
    g = exp_nilpotent(x)
    assert g @ exp_nilpotent(-x) == FpMatrix.identity(n, p)
    assert conjugation_matrix(g) == exp_nilpotent(ad_matrix(x))


@given(st.sampled_from([5, 7]), st.integers(2, 4), st.integers(0, 2**32 - 1))
@settings(max_examples=30)
def test_jacobson_implies_ad_exp_on_parabolics(p, n, seed):
    rng = np.random.default_rng(seed)
    flag, _ = random_flag(rng, n)
    par = R.parabolic_from_flag(p, n, flag)
    h = par.parabolic
    if rng.random() < 0.5:
        q = par.nilradical.matrices
        if q.shape[0]:
            h = lie_closure(np.remainder(rng.integers(0, p, size=(2, q.shape[0])) @ q.reshape(q.shape[0], -1), p).reshape(2, n, n), p, n)
    nrm = normalizer(classical("gl", n, p), h)
    for b in nrm.basis:
        _, x = jordan_decomposition(b)
        if not x.array.any() or (x ** p).array.any():
            continue
        if jacobson_kernel_test(x, h):
            assert ad_exp_check(x, h)


# ---------------------------------------------------------------------------
# Levi complements


@given(st.integers(3, 6), st.integers(0, 2**32 - 1))
@settings(max_examples=15)
def test_levi_complement_invariants(n, seed):
    p = 7
    h, flag = scrambled_semidirect(np.random.default_rng(seed), n, p)
    s, r = levi_complement(h, flag)
    assert s.dim == 3
    assert s.intersect(r).dim == 0 and (s + r) == h.as_subspace()
    MatrixLieAlgebra.from_subspace(s)
    assert r.contains_all(batch_bracket(h.matrices[:, None], r.matrices[None], p).reshape(-1, n, n)) or not r.dim


def test_levi_complement_of_borel():
    p = 5
    h = MatrixLieAlgebra([E(0, 0, 2), E(1, 1, 2), E(0, 1, 2)], p)
    s, r = levi_complement(h, [1])
    assert s.dim == 2 and r == Subspace([E(0, 1, 2)], p)


# ---------------------------------------------------------------------------
# aggregate report and reductive pairs


def test_smoothness_report_verdicts(fib):
    g = classical("gl", 22, 13)
    rep = smoothness_report(g, fib.algebra, basis=fib.attachments["basis"])
    assert rep.verdict == "Obstructed"
    ex = smooth_unipotent_example(5)
    assert smoothness_report(classical("gl", 3, 5), ex.algebra).verdict == "CertifiedSmoothTorus"


@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
@settings(max_examples=20)
def test_reductive_pair_counts(seed, k):
    p = 7
    sp4 = classical("sp", 4, p)
    rng = np.random.default_rng(seed)
    coeffs = rng.integers(0, p, size=(k, sp4.dim)) * (rng.random((k, sp4.dim)) < 0.4)
    h = Subspace(np.remainder(coeffs @ sp4.vectors, p).reshape(k, 4, 4), p, 4)
    big, small, cm = reductive_pair_counts(h, sp4)
    assert big == small + cm
