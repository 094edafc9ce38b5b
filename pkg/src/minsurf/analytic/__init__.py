"""Holomorphic expressions: parsing, exact differentiation, evaluation, quadrature."""

from minsurf.analytic.expr import (
    FUNCTIONS,
    ONE,
    ZERO,
    Add,
    Const,
    Div,
    Expr,
    Func,
    Mul,
    Neg,
    Pow,
    Sub,
    Var,
    Z,
    as_expr,
    cos,
    cosh,
    differentiate,
    evaluate,
    exp,
    is_constant,
    log,
    sin,
    sinh,
    sqrt,
    substitute,
    to_source,
)
from minsurf.analytic.parser import parse_expr, tokenize
from minsurf.analytic.quadrature import (
    DEFAULT_TOL,
    Segment,
    default_tol,
    integrate_segment,
    integrate_segments,
)

__all__ = [
    "FUNCTIONS", "ONE", "ZERO", "Add", "Const", "Div", "Expr", "Func", "Mul", "Neg",
    "Pow", "Sub", "Var", "Z", "as_expr", "cos", "cosh", "differentiate", "evaluate",
    "exp", "is_constant", "log", "sin", "sinh", "sqrt", "substitute", "to_source",
    "parse_expr", "tokenize", "DEFAULT_TOL", "Segment", "default_tol",
    "integrate_segment", "integrate_segments",
]
