"""
Chevalley-Eilenberg cohomology in small characteristic
=======================================================

Whitehead's lemmas hold for sl_2 in characteristic 0; at p = 5 the top
restricted simple module L(3) already has nonzero H^1 and H^2.
"""
from modlie import repn as R
from modlie.cohomology import chevalley_eilenberg, cohomology, ext1
from modlie.constructions import classical, sl2_triple_algebra

p = 5
sl2, triple = sl2_triple_algebra(p)
L = [R.sl2_simple(m, p, sl2, triple) for m in range(p)]

print("dim H^k(sl2, L(m)) for k = 0, 1, 2")
for m, mod in enumerate(L):
    print(f"  L({m}), dim {mod.dim}:", cohomology(mod).dims)

cx = chevalley_eilenberg(L[3], 2)
print("cochain space dims for L(3):", cx.space_dims)

print("Ext^1(L(0), L(3)) =", ext1(L[0], L[3]))
print("Ext^1(L(1), L(1)) =", ext1(L[1], L[1]))

# sl_3: the symmetric square of the natural module is simple, with H^2 of dim 3
V = R.natural_module(classical("sl", 3, p))
S2 = R.sym_power(V, 2)
print("S^2 V composition factors:", R.composition_series(S2).factor_dims)
print("H^k(sl3, S^2 V):", cohomology(S2).dims)

# at p = 3 sl_3 has a centre and H^2 with trivial coefficients jumps
print("H^k(sl3, k) at p = 3:", cohomology(R.trivial_module(classical("sl", 3, 3))).dims)
