import numpy as np
import pytest
from hypothesis import event, given, settings, strategies as st

from modlie import repn as R
from modlie.cohomology import ComplexTooLarge, chevalley_eilenberg, cohomology, ext1
from modlie.constructions import classical, sl2_triple_algebra
from modlie.liealg import MatrixLieAlgebra, lie_closure

import oracles


def sl2_modules(p):
    sl2, triple = sl2_triple_algebra(p)
    return sl2, (lambda m: R.sl2_simple(m, p, sl2, triple))


def test_abelian_line():
    a = MatrixLieAlgebra([np.eye(2, dtype=np.int64)], 5)
    assert cohomology(R.trivial_module(a), 1).dims == [1, 1]


def test_sl2_targets_p5():
    sl2, L = sl2_modules(5)
    assert cohomology(R.trivial_module(sl2)).dims == [1, 0, 0]
    assert cohomology(L(3)).dims[2] == 2
    assert ext1(L(0), L(3)) == 2
    assert ext1(L(1), L(1)) == 0


def test_sl3_targets():
    V = R.natural_module(classical("sl", 3, 5))
    assert ext1(V, V) == 0
    S2 = R.sym_power(V, 2)
    assert R.composition_series(S2).factor_dims == [6]
    assert cohomology(S2).dims[2] == 3
    assert cohomology(R.trivial_module(classical("sl", 3, 3))).dims[2] == 6


def test_whitehead_p7():
    _, L = sl2_modules(7)
    assert cohomology(L(1)).dims == [0, 0, 0]


def test_complex_shapes_and_d_squared():
    _, L = sl2_modules(5)
    cx = chevalley_eilenberg(L(3), 2)
    assert cx.space_dims == [4, 12, 12, 4]
    for a, b in zip(cx.differentials, cx.differentials[1:]):
        assert not (b @ a).array.any()
    rep = cohomology(L(3))
    assert rep.complex_shapes == [(12, 4), (12, 12), (4, 12)]


def test_size_guard(monkeypatch):
    import sys

    C = sys.modules["modlie.cohomology"]
    monkeypatch.setattr(C, "MAX_COCHAIN_DIM", 10)
    _, L = sl2_modules(5)
    with pytest.raises(ComplexTooLarge):
        cohomology(L(3))


def test_incompatible_ext():
    a = R.natural_module(classical("sl", 2, 5))
    b = R.natural_module(classical("gl", 2, 5))
    with pytest.raises(R.IncompatibleAlgebras):
        ext1(a, b)


@st.composite
def small_pairs(draw):
    """A small algebra (dimension 2..6 where possible) with a module built from it."""
    p = draw(st.sampled_from([2, 3, 5]))
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    if p > 2 and draw(st.integers(0, 3)) == 0:
        sl2, L = sl2_modules(p)
        return sl2, L(draw(st.integers(0, p - 1)))
    h = None
    for _ in range(20):
        n = int(rng.integers(2, 4))
        k = int(rng.integers(2, 4))
        gens = rng.integers(0, p, size=(k, n, n)) * (rng.random((k, n, n)) < 0.5)
        if draw(st.booleans()):
            gens = np.triu(gens)
        h = lie_closure(gens, p, n)
        if 2 <= h.dim <= 6:
            break
    kind = draw(st.sampled_from(["natural", "dual", "adjoint", "trivial", "sum"]))
    V = R.natural_module(h)
    m = {
        "natural": lambda: V,
        "dual": lambda: R.dual(V),
        "adjoint": lambda: R.adjoint_module(h),
        "trivial": lambda: R.trivial_module(h),
        "sum": lambda: R.direct_sum(V, R.trivial_module(h)),
    }[kind]()
    return h, m


@given(small_pairs())
@settings(max_examples=30)
def test_matches_cocycle_oracle(args):
    h, m = args
    if not h.dim or m.dim > 9:
        return
    event(f"dim g = {h.dim}")
    k_max = 2
    got = cohomology(m, k_max).dims
    structure = oracles.structure_from_matrices(list(h.matrices), h.p)
    assert got == oracles.cohomology_dims_oracle(structure, list(m.action), h.p)


@given(small_pairs(), st.sampled_from(["natural", "dual", "trivial"]))
@settings(max_examples=25)
def test_ext_duality(args, other):
    h, a = args
    V = R.natural_module(h)
    b = {"natural": V, "dual": R.dual(V), "trivial": R.trivial_module(h)}[other]
    if a.dim * b.dim > 16:
        return
    assert ext1(a, b) == ext1(R.dual(b), R.dual(a))


@given(small_pairs())
@settings(max_examples=20)
def test_h0_is_invariants(args):
    _, m = args
    assert cohomology(m, 1).dims[0] == R.invariants(m).dim
