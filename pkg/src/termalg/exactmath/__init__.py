"""Exact rational scalars, parameter expressions, matrices and subspaces."""

from .exprs import (
    ExprLike,
    ParamExpr,
    ONE_EXPR,
    ZERO_EXPR,
    as_expr,
    format_expr,
    parse_expr,
    parse_rational,
)
from .linalg import (
    Matrix,
    Q,
    Subspace,
    Vec,
    intersect,
    is_zero_vec,
    kernel,
    qvec,
    quotient_coords,
    rank,
    rref,
    solve,
    subspace_sum,
    unit_vec,
    vec_add,
    vec_scale,
    vec_sub,
    zero_vec,
)

__all__ = [
    "ExprLike",
    "Matrix",
    "ONE_EXPR",
    "ParamExpr",
    "Q",
    "Subspace",
    "Vec",
    "ZERO_EXPR",
    "as_expr",
    "format_expr",
    "intersect",
    "is_zero_vec",
    "kernel",
    "parse_expr",
    "parse_rational",
    "qvec",
    "quotient_coords",
    "rank",
    "rref",
    "solve",
    "subspace_sum",
    "unit_vec",
    "vec_add",
    "vec_scale",
    "vec_sub",
    "zero_vec",
]
