"""Immutable expression trees for holomorphic functions of one complex variable.

Nodes are frozen dataclasses.  Build them with the smart constructors
(:func:`add`, :func:`mul`, ...), or with ordinary Python operators, which
route through the same constructors and therefore fold constants.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from minsurf.errors import SingularEvaluation


FUNCTIONS = ("exp", "log", "sqrt", "sin", "cos", "sinh", "cosh")


def _clean(value: complex) -> complex:
    # adding +0.0 turns a signed negative zero into +0.0, which pins the
    # principal branch of log/sqrt on the negative real axis
    value = complex(value)
    return complex(value.real + 0.0, value.imag + 0.0)


class Expr:
    """Base class of all expression nodes."""

    __slots__ = ()

    def __call__(self, z, strict: bool = True):
        return evaluate(self, z, strict=strict)

    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return sub(self, as_expr(other))

    def __rsub__(self, other):
        return sub(as_expr(other), self)

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return div(self, as_expr(other))

    def __rtruediv__(self, other):
        return div(as_expr(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, n):
        if isinstance(n, bool) or not isinstance(n, int):
            raise TypeError("only integer powers are supported")
        return power(self, n)

    def __str__(self):
        return to_source(self)


@dataclass(frozen=True, repr=False)
class Var(Expr):
    def __repr__(self):
        return "Var()"


@dataclass(frozen=True, repr=False)
class Const(Expr):
    value: complex

    def __post_init__(self):
        object.__setattr__(self, "value", _clean(self.value))

    def __repr__(self):
        return f"Const({self.value!r})"


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class Func(Expr):
    name: str
    arg: Expr

    def __post_init__(self):
        if self.name not in FUNCTIONS:
            raise ValueError(f"unsupported function {self.name!r}")


Z = Var()
ZERO = Const(0)
ONE = Const(1)


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, float, complex, np.number)):
        return Const(complex(value))
    raise TypeError(f"cannot convert {type(value).__name__} to an expression")


def _is(expr: Expr, value: complex) -> bool:
    return isinstance(expr, Const) and expr.value == value


# -- smart constructors (constant folding only) ----------------------------


def add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if _is(a, 0):
        return b
    if _is(b, 0):
        return a
    return Add(a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    if _is(b, 0):
        return a
    if _is(a, 0):
        return neg(b)
    return Sub(a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if _is(a, 0) or _is(b, 0):
        return ZERO
    if _is(a, 1):
        return b
    if _is(b, 1):
        return a
    return Mul(a, b)


def div(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const) and b.value != 0:
        return Const(a.value / b.value)
    if _is(b, 1):
        return a
    return Div(a, b)


def power(base: Expr, n: int) -> Expr:
    if n == 0:
        return ONE
    if n == 1:
        return base
    if isinstance(base, Const) and (n > 0 or base.value != 0):
        return Const(base.value**n)
    return Pow(base, n)


def neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.operand
    return Neg(a)


_CMATH = {
    "exp": cmath.exp,
    "log": cmath.log,
    "sqrt": cmath.sqrt,
    "sin": cmath.sin,
    "cos": cmath.cos,
    "sinh": cmath.sinh,
    "cosh": cmath.cosh,
}


def func(name: str, arg: Expr) -> Expr:
    if isinstance(arg, Const):
        if name in ("log", "sqrt") and arg.value == 0:
            return Func(name, arg)
        try:
            return Const(_CMATH[name](arg.value))
        except OverflowError:
            return Func(name, arg)
    return Func(name, arg)


def exp(a) -> Expr:
    return func("exp", as_expr(a))


def log(a) -> Expr:
    return func("log", as_expr(a))


def sqrt(a) -> Expr:
    return func("sqrt", as_expr(a))


def sin(a) -> Expr:
    return func("sin", as_expr(a))


def cos(a) -> Expr:
    return func("cos", as_expr(a))


def sinh(a) -> Expr:
    return func("sinh", as_expr(a))


def cosh(a) -> Expr:
    return func("cosh", as_expr(a))


# -- structure -------------------------------------------------------------


def is_constant(expr: Expr) -> bool:
    if isinstance(expr, Var):
        return False
    if isinstance(expr, Const):
        return True
    if isinstance(expr, (Add, Sub, Mul, Div)):
        return is_constant(expr.left) and is_constant(expr.right)
    if isinstance(expr, Pow):
        return is_constant(expr.base)
    if isinstance(expr, Neg):
        return is_constant(expr.operand)
    return is_constant(expr.arg)


def substitute(expr: Expr, replacement: Expr) -> Expr:
    """Return ``expr`` with the variable replaced by ``replacement`` (composition)."""
    if isinstance(expr, Var):
        return replacement
    if isinstance(expr, Const):
        return expr
    if isinstance(expr, Add):
        return add(substitute(expr.left, replacement), substitute(expr.right, replacement))
    if isinstance(expr, Sub):
        return sub(substitute(expr.left, replacement), substitute(expr.right, replacement))
    if isinstance(expr, Mul):
        return mul(substitute(expr.left, replacement), substitute(expr.right, replacement))
    if isinstance(expr, Div):
        return div(substitute(expr.left, replacement), substitute(expr.right, replacement))
    if isinstance(expr, Pow):
        return power(substitute(expr.base, replacement), expr.exponent)
    if isinstance(expr, Neg):
        return neg(substitute(expr.operand, replacement))
    return func(expr.name, substitute(expr.arg, replacement))


def differentiate(expr: Expr, times: int = 1) -> Expr:
    """Exact derivative d/dz, applied ``times`` times."""
    for _ in range(times):
        expr = _d(expr)
    return expr


def _d(e: Expr) -> Expr:
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Add):
        return add(_d(e.left), _d(e.right))
    if isinstance(e, Sub):
        return sub(_d(e.left), _d(e.right))
    if isinstance(e, Mul):
        return add(mul(_d(e.left), e.right), mul(e.left, _d(e.right)))
    if isinstance(e, Div):
        num = sub(mul(_d(e.left), e.right), mul(e.left, _d(e.right)))
        return div(num, power(e.right, 2))
    if isinstance(e, Pow):
        n = e.exponent
        return mul(mul(Const(n), power(e.base, n - 1)), _d(e.base))
    if isinstance(e, Neg):
        return neg(_d(e.operand))
    u, du = e.arg, _d(e.arg)
    if e.name == "exp":
        outer = e
    elif e.name == "log":
        return div(du, u)
    elif e.name == "sqrt":
        return div(du, mul(Const(2), e))
    elif e.name == "sin":
        outer = func("cos", u)
    elif e.name == "cos":
        outer = neg(func("sin", u))
    elif e.name == "sinh":
        outer = func("cosh", u)
    else:
        outer = func("sinh", u)
    return mul(outer, du)


# -- evaluation ------------------------------------------------------------

_NUMPY = {
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "sin": np.sin,
    "cos": np.cos,
    "sinh": np.sinh,
    "cosh": np.cosh,
}


def evaluate(expr: Expr, z, strict: bool = True):
    """Evaluate ``expr`` at a complex scalar or array ``z``.

    log and sqrt use the principal branch.  With ``strict`` a pole, a zero
    argument of log/sqrt, or a non-finite result raises
    :class:`SingularEvaluation`; otherwise those entries come back as NaN.
    """
    scalar = np.ndim(z) == 0
    zz = np.asarray(z, dtype=complex)
    with np.errstate(all="ignore"):
        out = _eval(expr, zz, zz, strict)
        out = np.broadcast_to(np.asarray(out, dtype=complex), zz.shape)
        bad = ~np.isfinite(out)
    if bad.any():
        if strict:
            raise SingularEvaluation("non-finite value", complex(zz[bad].flat[0]))
        out = np.where(bad, complex(np.nan, np.nan), out)
    if scalar:
        return complex(out)
    return np.array(out)


def _singular(where, z0, reason, strict):
    if not strict:
        return
    mask = np.broadcast_to(where, np.broadcast_shapes(np.shape(where), z0.shape))
    zb = np.broadcast_to(z0, mask.shape)
    loc = zb[mask].flat[0] if mask.ndim else zb[()]
    raise SingularEvaluation(reason, complex(loc))


def _eval(e: Expr, zz, z0, strict):
    if isinstance(e, Var):
        return zz
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Add):
        return _eval(e.left, zz, z0, strict) + _eval(e.right, zz, z0, strict)
    if isinstance(e, Sub):
        return _eval(e.left, zz, z0, strict) - _eval(e.right, zz, z0, strict)
    if isinstance(e, Mul):
        return _eval(e.left, zz, z0, strict) * _eval(e.right, zz, z0, strict)
    if isinstance(e, Div):
        num = _eval(e.left, zz, z0, strict)
        den = _eval(e.right, zz, z0, strict)
        zero = np.asarray(den) == 0
        if zero.any():
            _singular(zero, z0, "division by zero", strict)
            return np.where(zero, np.nan, num / np.where(zero, 1, den))
        return num / den
    if isinstance(e, Pow):
        base = _eval(e.base, zz, z0, strict)
        if e.exponent < 0:
            zero = np.asarray(base) == 0
            if zero.any():
                _singular(zero, z0, "division by zero", strict)
                safe = np.where(zero, 1, base)
                return np.where(zero, np.nan, safe ** e.exponent)
        return base ** e.exponent
    if isinstance(e, Neg):
        return -_eval(e.operand, zz, z0, strict)
    arg = _eval(e.arg, zz, z0, strict)
    if e.name in ("log", "sqrt"):
        arg = np.asarray(arg, dtype=complex) + 0j
        zero = arg == 0
        if zero.any():
            _singular(zero, z0, f"{e.name} of zero", strict)
            return np.where(zero, np.nan, _NUMPY[e.name](np.where(zero, 1, arg)))
    return _NUMPY[e.name](arg)


# -- printing --------------------------------------------------------------


def _num(x: float) -> str:
    return repr(float(x))


def _const_source(value: complex) -> str:
    re, im = value.real, value.imag
    if im == 0:
        return f"({_num(re)})" if re < 0 else _num(re)
    if re == 0:
        return f"({_num(im)}i)" if im < 0 else f"{_num(im)}i"
    sign = "-" if im < 0 else "+"
    return f"({_num(re)}{sign}{_num(abs(im))}i)"


def to_source(e: Expr) -> str:
    """Render ``e`` in the parser's grammar so that parsing reproduces it."""
    if isinstance(e, Var):
        return "z"
    if isinstance(e, Const):
        return _const_source(e.value)
    if isinstance(e, Add):
        return f"({to_source(e.left)} + {to_source(e.right)})"
    if isinstance(e, Sub):
        return f"({to_source(e.left)} - {to_source(e.right)})"
    if isinstance(e, Mul):
        return f"({to_source(e.left)} * {to_source(e.right)})"
    if isinstance(e, Div):
        return f"({to_source(e.left)} / {to_source(e.right)})"
    if isinstance(e, Pow):
        return f"({to_source(e.base)})^{e.exponent}"
    if isinstance(e, Neg):
        return f"(-({to_source(e.operand)}))"
    return f"{e.name}({to_source(e.arg)})"
