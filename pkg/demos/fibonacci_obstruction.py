"""
A torus that does not lift: the Fibonacci example
==================================================

Over F_13 the Fibonacci subalgebra of gl_22 is normalised by a diagonal
direction that has no integral counterpart. Smith normal form of the
relation matrix finds it as an elementary divisor equal to 13.
"""
from collections import Counter

import numpy as np

from modlie.constructions import fibonacci_example
from modlie.liealg import Subspace
from modlie.smoothness import fibonacci_conjugate_checks, torus_lift_test

ex = fibonacci_example(5, 13)
h = ex.algebra
print(f"h has dimension {h.dim} inside gl_{h.n}, blocks {ex.attachments['block_sizes']}")

# one row per basis element, recording which diagonal weights it must share
rep = torus_lift_test(h, ex.attachments["basis"])
R = rep.relation_matrix
print(f"relation matrix: {R.rows} x {R.cols}")
print("elementary divisors:", dict(Counter(rep.elementary_divisors)))
print(f"nullity over Z: {rep.integral_nullity}, over F_13: {rep.modp_nullity}")
print("obstructed:", rep.obstructed)
print("witness direction:", rep.witness)

# the witness really normalises every basis line mod 13
w = np.diag(rep.witness)
ok = all(Subspace([b], 13).contains(np.remainder(w @ b - b @ w, 13)) for b in ex.attachments["basis"])
print("witness normalises each basis line:", ok)

# the same integer basis read mod 7 has no 7 among its divisors
basis7 = [np.remainder(b, 7) for b in ex.attachments["integer_basis"]]
rep7 = torus_lift_test(None, basis7, 7)
print("mod 7 obstructed:", rep7.obstructed)

# conjugating by root subgroups only shifts the lambda parameters
for c in fibonacci_conjugate_checks(5, 13, (0, 0, 0), ts=(2,)):
    print(f"  generator {c.generator}: lambdas -> {c.lambdas_after}, passes {c.passes}")
