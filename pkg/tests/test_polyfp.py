import numpy as np
import sympy
from hypothesis import given, strategies as st

from modlie import polyfp as P

PRIMES = [2, 3, 5, 7, 11]


def polys(p, max_deg=8):
    return st.lists(st.integers(0, p - 1), min_size=1, max_size=max_deg + 1).map(lambda f: P.trim(f, p))


def to_sympy(f, p):
    x = sympy.Symbol("x")
    return sympy.Poly(list(reversed(f)) or [0], x, modulus=p)


@given(st.sampled_from(PRIMES).flatmap(lambda p: st.tuples(st.just(p), polys(p), polys(p))))
def test_divmod_and_gcd(args):
    p, f, g = args
    if not g:
        return
    q, r = P.divmod_(f, g, p)
    assert P.add(P.mul(q, g, p), r, p) == f
    assert P.deg(r) < P.deg(g)
    want = to_sympy(f, p).gcd(to_sympy(g, p))
    got = P.gcd(f, g, p)
    assert to_sympy(got, p).monic() == want.monic() if want.degree() >= 0 else not got


@given(st.sampled_from(PRIMES).flatmap(lambda p: st.tuples(st.just(p), polys(p, 10))), st.integers(0, 99))
def test_irreducible_factors_match_sympy(args, seed):
    p, f = args
    if P.deg(f) < 1:
        return
    got = sorted(tuple(g) for g in P.irreducible_factors(f, p, np.random.default_rng(seed)))
    _, facs = to_sympy(f, p).factor_list()
    want = sorted(tuple(int(c) % p for c in reversed(g.monic().all_coeffs())) for g, _ in facs)
    assert got == want


@given(st.sampled_from(PRIMES).flatmap(lambda p: st.tuples(st.just(p), polys(p, 10))))
def test_radical_is_squarefree_part(args):
    p, f = args
    if P.deg(f) < 1:
        return
    r = P.radical(f, p)
    assert not P.divmod_(f, r, p)[1] or P.deg(r) == 0
    assert P.deg(P.gcd(r, P.derivative(r, p), p)) == 0


@given(st.sampled_from(PRIMES), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_charpoly_cayley_hamilton(p, n, seed):
    a = np.random.default_rng(seed).integers(0, p, size=(n, n))
    f = P.charpoly(a, p)
    assert P.deg(f) == n and f[-1] == 1
    assert not P.eval_matrix(f, a, p).any()
    want = sympy.Matrix(a.tolist()).charpoly().all_coeffs()
    assert f == [int(c) % p for c in reversed(want)]


@given(st.sampled_from(PRIMES).flatmap(lambda p: st.tuples(st.just(p), polys(p, 6), polys(p, 5))), st.integers(0, 40))
def test_powmod_matches_repeated_product(args, e):
    p, base, m = args
    if P.deg(m) < 1:
        return
    want = [1]
    for _ in range(e):
        want = P.divmod_(P.mul(want, base, p), m, p)[1]
    assert P.powmod(base, e, m, p) == P.divmod_(want, m, p)[1]
