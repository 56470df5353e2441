"""Exact rationals, sparse polynomials in named formal variables, exact linear algebra."""

from fractions import Fraction as Rational

from .poly import Poly, VecPoly, VariableMismatch, poly_mul, poly_substitute, to_fraction
from .linalg import (
    RowSpace,
    Solution,
    integer_row,
    kernel,
    poly_kernel_vector,
    poly_rank,
    rref,
    vecpoly_linsolve,
)

# variable contexts used throughout the package
CTX2 = ("D", "lam")
CTX3 = ("D", "lam", "mu")
CTX4 = ("D", "lam", "mu", "x")

__all__ = [
    "Rational",
    "Poly",
    "VecPoly",
    "VariableMismatch",
    "poly_mul",
    "poly_substitute",
    "to_fraction",
    "RowSpace",
    "Solution",
    "integer_row",
    "kernel",
    "poly_kernel_vector",
    "poly_rank",
    "rref",
    "vecpoly_linsolve",
    "CTX2",
    "CTX3",
    "CTX4",
]
