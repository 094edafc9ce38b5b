"""Named Weierstrass data for the classical examples."""

from __future__ import annotations

import math
from dataclasses import dataclass

from minsurf.analytic import Const, Z, exp, is_constant, parse_expr
from minsurf.weierstrass import WeierstrassData, associate


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    data: WeierstrassData
    default_domain: tuple
    notes: str = ""


def _complex_param(params, key, default):
    value = params.get(key, default)
    if isinstance(value, str):
        e = parse_expr(value)
        if not is_constant(e):
            raise ValueError(f"parameter {key}={value!r} must be a constant")
        value = e(0)
    return complex(value)


def _real_param(params, key, default):
    value = _complex_param(params, key, default)
    if value.imag != 0:
        raise ValueError(f"parameter {key} must be real")
    return value.real


def _enneper(params):
    dom = (-1.5, 1.5, -1.5, 1.5)
    return WeierstrassData(Z, Const(1), dom), dom, "G = z, Psi = 1"


def _helicoid(params):
    dom = (-1.0, 1.0, -math.pi, math.pi)
    data = WeierstrassData(exp(Z), Const(-1j) * exp(-Z), dom)
    return data, dom, "X(u, v) = (-sinh u sin v, sinh u cos v, v)"


def _catenoid(params):
    dom = (-1.0, 1.0, -math.pi, math.pi)
    return WeierstrassData(exp(Z), exp(-Z), dom), dom, "helicoid's associate at theta = 0"


def _exponential(params):
    alpha = _complex_param(params, "alpha", 1)
    zeta0 = _complex_param(params, "zeta0", 0)
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    dom = (-1.0, 1.0, -math.pi, math.pi)
    G = exp(Const(alpha) * (Z - Const(zeta0)))
    Psi = exp(Const(-alpha) * Z)
    note = "constant second Chern-Ricci function; G'Psi = alpha exp(-alpha zeta0) is constant"
    return WeierstrassData(G, Psi, dom), dom, note


def _associate(params):
    theta = _real_param(params, "theta", 0)
    data, dom, _ = _catenoid(params)
    return associate(data, theta), dom, "catenoid (theta = 0) to helicoid (theta = -pi/2)"


def _perturbed(params):
    eps = _complex_param(params, "eps", 0.1)
    dom = (-1.0, 1.0, -1.0, 1.0)
    return WeierstrassData(Z + Const(eps) * Z**3, Const(1), dom), dom, "Enneper with a cubic perturbation of G"


_BUILDERS = {
    "enneper": _enneper,
    "helicoid": _helicoid,
    "catenoid": _catenoid,
    "exponential": _exponential,
    "associate": _associate,
    "enneper-perturbed": _perturbed,
}

NAMES = tuple(_BUILDERS)


def get_surface(name: str, params: dict | None = None) -> CatalogEntry:
    try:
        build = _BUILDERS[name.lower()]
    except KeyError:
        raise KeyError(f"unknown surface {name!r}; known: {', '.join(NAMES)}") from None
    data, dom, notes = build(params or {})
    return CatalogEntry(name.lower(), data, dom, notes)
