"""
The Witt algebra W(1;1) as a subalgebra of gl_4
================================================

Build the Witt algebra in characteristic 5, look at its normaliser inside
sl_4 and gl_4, and find the symplectic form it preserves.
"""
import numpy as np

from modlie import repn as R
from modlie.constructions import classical, witt_algebra, witt_sp_embedding
from modlie.liealg import normalizer

p = 5
W = witt_algebra(p)
print("W(1;1) in gl_4 has dimension", W.algebra.dim)

# W is its own normaliser in sl_4; in gl_4 only the scalars get added
print("dim N_sl4(W) =", normalizer(classical("sl", 4, p), W.algebra).dim)
print("dim N_gl4(W) =", normalizer(classical("gl", 4, p), W.algebra).dim)

# the invariant bilinear form on O1/k is alternating and nondegenerate
G, ok = witt_sp_embedding(p)
print("preserved form:\n", G.array)
print("alternating:", G.T == -G, " rank:", G.rank(), " W lands in sp:", ok)

# on O1 = k[X]/(X^p) the constants form a submodule with no complement
O1 = W.rep_on_o1
print("composition factors of O1:", sorted(R.composition_series(O1).factor_dims))
print("O1 semisimple:", R.is_semisimple(O1))

# e_0 = X d/dX acts diagonally on O1/k with weights 1, .., p-1
print("weights of e_0 on O1/k:", (np.diag(W.elements[0]) % p).tolist())
