"""Holomorphic quadratic differentials of the Gauss map in the isothermic chart.

``g`` may be an expression in zeta or an :class:`~minsurf.coords.IsothermicChart`
(whose derivatives in zeta are obtained through the chart).
"""

from __future__ import annotations

import numpy as np

from minsurf.analytic import Expr, differentiate
from minsurf.coords import IsothermicChart
from minsurf.errors import CriticalPointError, MinsurfError, ZeroOfGaussMapError

WHICH = ("schwarzian", "q1", "q2")


def jet(g, zeta, order: int) -> list:
    """[g, g', ..., g^(order)] at ``zeta``."""
    if isinstance(g, IsothermicChart):
        return g.jet(zeta, order)
    if isinstance(g, Expr):
        out, d = [], g
        for _ in range(order + 1):
            out.append(d(zeta))
            d = differentiate(d)
        return out
    raise TypeError(f"expected an expression or an isothermic chart, got {type(g).__name__}")


def _require(values, error, what, zeta):
    if np.any(np.asarray(values) == 0):
        raise error(f"{what} vanishes at zeta={zeta!r}")


def _out(value, zeta):
    return complex(value) if np.ndim(zeta) == 0 else value


def schwarzian(g, zeta):
    """Sg = (g''/g')' - (g''/g')^2 / 2 = g'''/g' - 3/2 (g''/g')^2."""
    _, d1, d2, d3 = jet(g, zeta, 3)
    _require(d1, CriticalPointError, "g'", zeta)
    r = d2 / d1
    return _out(d3 / d1 - 1.5 * r * r, zeta)


def q1(g, zeta):
    """Coefficient of (log g')'' dzeta^2 = (g''/g')' dzeta^2."""
    if isinstance(g, Expr):
        d1 = differentiate(g)
        _require(d1(zeta), CriticalPointError, "g'", zeta)
        return _out(differentiate(differentiate(d1) / d1)(zeta), zeta)
    _, d1, d2, d3 = jet(g, zeta, 3)
    _require(d1, CriticalPointError, "g'", zeta)
    r = d2 / d1
    return _out(d3 / d1 - r * r, zeta)


def log_derivative_prime(g, zeta):
    """(g'/g)' = g''/g - (g'/g)^2."""
    g0, d1, d2 = jet(g, zeta, 2)
    _require(g0, ZeroOfGaussMapError, "g", zeta)
    r = d1 / g0
    return d2 / g0 - r * r


def q2(g, zeta):
    """Coefficient of (log (log g)')'' dzeta^2 = [(g''/g')' - (g'/g)'] dzeta^2."""
    g0 = jet(g, zeta, 0)[0]
    _require(g0, ZeroOfGaussMapError, "g", zeta)
    return _out(q1(g, zeta) - log_derivative_prime(g, zeta), zeta)


def coefficient(which: str, g, zeta):
    if which == "schwarzian":
        return schwarzian(g, zeta)
    if which == "q1":
        return q1(g, zeta)
    if which == "q2":
        return q2(g, zeta)
    raise ValueError(f"unknown differential {which!r}; choose from {WHICH}")


def holomorphy_residual(sampler, zeta, h: float) -> float:
    """|df/du + i df/dv| / 2 by central differences (a discrete d/dzbar)."""
    zeta = complex(zeta)
    try:
        fe, fw = sampler(zeta + h), sampler(zeta - h)
        fn, fs = sampler(zeta + 1j * h), sampler(zeta - 1j * h)
    except MinsurfError as exc:
        raise MinsurfError(f"sampler failed next to zeta={zeta}: {exc}") from exc
    du = (complex(fe) - complex(fw)) / (2 * h)
    dv = (complex(fn) - complex(fs)) / (2 * h)
    return abs(du + 1j * dv) / 2


def from_jet(which: str, g0, d1, d2, d3):
    """Coefficient from precomputed derivatives; NaN where undefined."""
    with np.errstate(all="ignore"):
        d1 = np.where(d1 == 0, np.nan, d1)
        r = d2 / d1
        if which == "schwarzian":
            return d3 / d1 - 1.5 * r * r
        if which == "q1":
            return d3 / d1 - r * r
        if which == "q2":
            g0 = np.where(g0 == 0, np.nan, g0)
            s = d1 / g0
            return d3 / d1 - r * r - (d2 / g0 - s * s)
    raise ValueError(f"unknown differential {which!r}; choose from {WHICH}")
