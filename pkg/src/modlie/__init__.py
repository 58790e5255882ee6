"""Exact computations with matrix Lie algebras over prime fields."""
from .exactlinalg import EchelonBasis, FpMatrix, IntMatrix, SmithForm, nullspace, rank_nullspace, rref, smith_normal_form, solve_linear
from .liealg import (
    MatrixLieAlgebra,
    Subspace,
    center,
    centralizer,
    jordan_decomposition,
    lie_closure,
    normalizer,
    p_closure,
    series,
)
from .repn import LieModule, composition_series, is_semisimple, jacobson_radical
from .constructions import classical, fibonacci_example, witt_algebra
from .smoothness import levi_complement, smoothness_report, torus_lift_test
from .cohomology import cohomology, ext1

__version__ = "0.1.0"

__all__ = [
    "EchelonBasis",
    "FpMatrix",
    "IntMatrix",
    "SmithForm",
    "nullspace",
    "rank_nullspace",
    "rref",
    "smith_normal_form",
    "solve_linear",
    "MatrixLieAlgebra",
    "Subspace",
    "center",
    "centralizer",
    "jordan_decomposition",
    "lie_closure",
    "normalizer",
    "p_closure",
    "series",
    "LieModule",
    "composition_series",
    "is_semisimple",
    "jacobson_radical",
    "classical",
    "fibonacci_example",
    "witt_algebra",
    "levi_complement",
    "smoothness_report",
    "torus_lift_test",
    "cohomology",
    "ext1",
]
