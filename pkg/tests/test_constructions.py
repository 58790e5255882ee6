import numpy as np
import pytest

from modlie import repn as R
from modlie.constructions import (
    BadParams,
    BadPrime,
    classical,
    fibonacci,
    fibonacci_example,
    sl2_small_rep_example,
    smooth_unipotent_example,
    witt_algebra,
    witt_sp_embedding,
    witt_o1_semidirect,
)
from modlie.liealg import batch_bracket, center, span_of_products


def expected_dim(kind, n):
    if kind == "gl":
        return n * n
    if kind == "sl":
        return n * n - 1
    if kind == "so":
        return n * (n - 1) // 2
    m = n // 2
    return m * (2 * m + 1)


@pytest.mark.parametrize("p", [5, 7, 11, 13])
@pytest.mark.parametrize("kind", ["gl", "sl", "so", "sp"])
def test_classical_dimensions(kind, p):
    for n in range(1, 9):
        if kind == "sp" and n % 2:
            with pytest.raises(BadParams):
                classical(kind, n, p)
            continue
        g = classical(kind, n, p)
        assert g.dim == expected_dim(kind, n)


def test_classical_form_equations():
    p = 7
    sp = classical("sp", 4, p)
    J = np.zeros((4, 4), np.int64)
    J[:2, 2:] = -np.eye(2, dtype=np.int64)
    J[2:, :2] = np.eye(2, dtype=np.int64)
    for x in sp.matrices:
        assert not np.remainder(x.T @ J + J @ x, p).any()
    so = classical("so", 5, p)
    for x in so.matrices:
        assert not np.remainder(x.T + x, p).any()
    for x in classical("sl", 3, p).matrices:
        assert np.trace(x) % p == 0


def test_classical_rejects_small_characteristic():
    with pytest.raises(BadParams):
        classical("sp", 4, 2)
    with pytest.raises(BadParams):
        classical("so", 3, 2)
    with pytest.raises(BadParams):
        classical("xx", 3, 5)


@pytest.mark.parametrize("p", [5, 7, 11])
def test_witt_structure_constants(p):
    W = witt_algebra(p)
    assert W.dim == p
    assert W.rep_on_o1.dim == p and W.rep_on_o1_mod_k.dim == p - 1
    for i in W.indices:
        for j in W.indices:
            br = np.remainder(W.on_o1[i] @ W.on_o1[j] - W.on_o1[j] @ W.on_o1[i], p)
            k = i + j
            want = (j - i) * W.on_o1[k] if k in W.on_o1 else np.zeros((p, p), np.int64)
            assert np.array_equal(br, np.remainder(want, p))


def test_witt_e0_weights():
    p = 7
    W = witt_algebra(p)
    e0 = W.on_o1[0]
    for i in W.indices:
        br = np.remainder(e0 @ W.on_o1[i] - W.on_o1[i] @ e0, p)
        assert np.array_equal(br, np.remainder(i * W.on_o1[i], p))


def test_witt_mod_k_irreducible_and_faithful():
    W = witt_algebra(5)
    cs = R.composition_series(W.rep_on_o1_mod_k)
    assert cs.factor_dims == [4] and cs.absolutely_irreducible == [True]
    assert W.algebra.dim == 5 and center(W.algebra).dim == 0


def test_witt_bad_prime():
    with pytest.raises(BadPrime):
        witt_algebra(3)


@pytest.mark.parametrize("p", [5, 7])
def test_witt_sp_embedding(p):
    G, ok = witt_sp_embedding(p)
    assert ok
    assert G.T == -G and G.rank() == p - 1
    for x in W_mats(p):
        assert not np.remainder(x.T @ G.array + G.array @ x, p).any()


def W_mats(p):
    return witt_algebra(p).algebra.matrices


def test_witt_o1_semidirect():
    p = 5
    h = witt_o1_semidirect(p)
    assert h.dim == 2 * p and h.n == p
    assert all(np.trace(x) % p == 0 for x in h.matrices)
    assert R.composition_series(R.natural_module(h)).factor_dims == [p]
    W = witt_algebra(p)
    d = W.on_o1[-1]
    X = np.zeros((p, p), np.int64)
    for r in range(p - 1):
        X[r + 1, r] = 1
    one = np.eye(p, dtype=np.int64)
    assert np.array_equal(np.remainder(d @ X - X @ d, p), one)
    assert h.contains(X) and h.contains(d)


def test_fibonacci_numbers():
    assert [fibonacci(k) for k in range(8)] == [1, 1, 2, 3, 5, 8, 13, 21]


@pytest.mark.parametrize("lam", [(0, 0, 0), (1, 2, 3), (5, 0, 11)])
def test_fibonacci_closed_and_normalised(lam):
    ex = fibonacci_example(5, 13, lam)
    h = ex.algebra
    assert h.n == 22 == ex.n
    assert ex.attachments["block_sizes"] == (7, 6, 5, 4)
    # strictly upper triangular
    assert not np.tril(h.matrices).any()
    s = ex.attachments["toral_element"]
    br = batch_bracket(s[None], h.matrices, 13)
    assert h.contains_all(br)
    e = ex.attachments["expected_divisors"]
    assert (e["zeros"], e["ones"], e["top"]) == (4, 17, 13)


def test_fibonacci_dimension_is_independent_of_lambda():
    dims = {fibonacci_example(5, 13, lam).algebra.dim for lam in [(0, 0, 0), (1, 2, 3), (4, 4, 4)]}
    assert len(dims) == 1


def test_fibonacci_small_n_rejected():
    with pytest.raises(BadParams):
        fibonacci_example(3, 13)


def test_smooth_unipotent():
    ex = smooth_unipotent_example(5)
    assert ex.attachments["normalizer_in_borel"]
    assert ex.attachments["normalizer"].dim == 6


@pytest.mark.parametrize("p", [5, 7])
def test_sl2_small_rep(p):
    ex = sl2_small_rep_example(p)
    M = ex.attachments["module_M"]
    assert M.dim == p
    assert ex.attachments["M_factor_dims"] == [p - 2, 2]
    assert not ex.attachments["M_semisimple"]
    assert ex.algebra <= ex.attachments["normalizer_of_M"]
    # M is stable under ad(h)
    assert M.contains_all(span_of_products(ex.algebra, M).matrices)
