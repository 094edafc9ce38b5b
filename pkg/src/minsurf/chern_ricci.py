"""Chern-Ricci functions and finite-difference certification of their harmonicity.

CR1_V = ln((-K)^(-1/4) (1 + N_V)) and CR2_V = ln((-K)^(-1/2) (1 - N_V^2)).
The Laplace-Beltrami operator of the conformal metric lambda^2 |dz|^2 is
lambda^-2 (f_uu + f_vv), discretised with the 5-point stencil.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from minsurf.errors import AntipodalNormalError, FlatPointError, MinsurfError
from minsurf.weierstrass import (
    WeierstrassData,
    angle_function,
    conformal_factor,
    gauss_curvature,
)

# guard bands
MIN_ONE_PLUS_NV = 1e-8
MIN_MINUS_K = 1e-12

IDENTITIES = ("chern", "ricci", "harmonic-cr1", "harmonic-cr2")


def _cr_parts(data, V, zeta):
    """Log-separated pieces shared by CR1 and CR2.

    With P = 1 + |G|^2 and A = P N_V, (-K)^(-1/4) = P |Psi|^(1/2) / (2 |G'|^(1/2))
    and 1 +- N_V = (P +- A) / P, so the ln P terms cancel exactly:

        CR1_V = base + ln(P + A),   CR2_V = 2 base + ln(P + A) + ln(P - A)

    with base = -ln 2 - ln|G'| / 2 + ln|Psi| / 2.
    """
    V = np.asarray(V, dtype=float)
    G = data.G(zeta, strict=False)
    dG = data.dG(zeta, strict=False)
    psi = data.Psi(zeta, strict=False)
    r2 = np.abs(G) ** 2
    P = 1 + r2
    A = 2 * np.real(G) * V[0] + 2 * np.imag(G) * V[1] + (r2 - 1) * V[2]
    with np.errstate(all="ignore"):
        base = -math.log(2) - 0.5 * np.log(np.abs(dG)) + 0.5 * np.log(np.abs(psi))
        minus_K = (4 * np.abs(dG) / (np.abs(psi) * P**2)) ** 2
    return base, P, A, np.where(dG == 0, 0.0, minus_K)


def _check_point(minus_K, NV, second: bool, zeta):
    if not minus_K > 0:
        raise FlatPointError(f"Gauss curvature vanishes at z={zeta}; Chern-Ricci functions need K < 0")
    if NV <= -1:
        raise AntipodalNormalError(f"N_V = {NV} at z={zeta}; need N_V > -1")
    if second and NV >= 1:
        raise AntipodalNormalError(f"N_V = {NV} at z={zeta}; need |N_V| < 1")


def cr1(data: WeierstrassData, V, zeta) -> float:
    """ln((-K)^(-1/4) (1 + N_V)) at one point."""
    zeta = complex(zeta)
    base, P, A, minus_K = _cr_parts(data, V, data_check(data, zeta))
    _check_point(minus_K, A / P, False, zeta)
    return float(base + np.log(P + A))


def cr2(data: WeierstrassData, V, zeta) -> float:
    """ln((-K)^(-1/2) (1 - N_V^2)) at one point."""
    zeta = complex(zeta)
    base, P, A, minus_K = _cr_parts(data, V, data_check(data, zeta))
    _check_point(minus_K, A / P, True, zeta)
    return float(2 * base + np.log(P + A) + np.log(P - A))


def data_check(data, zeta):
    # strict probe so singular data raise SingularEvaluation with the location
    data.G(zeta)
    data.dG(zeta)
    data.Psi(zeta)
    return zeta


# -- grids -----------------------------------------------------------------


@dataclass
class FieldGrid:
    """Scalar field on the uniform grid z[i, j] = origin + i h + 1j j h.

    ``values`` and ``mask`` have shape ``(nu, nv)``; ``mask`` is True where
    the value is valid.  Grids are filled once and then only read.
    """

    origin: complex
    h: float
    values: np.ndarray
    mask: np.ndarray

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("grid spacing must be positive")
        self.values = np.asarray(self.values, dtype=float)
        self.mask = np.asarray(self.mask, dtype=bool) & np.isfinite(self.values)
        if self.values.shape != self.mask.shape or self.values.ndim != 2:
            raise ValueError("values and mask must be 2-D arrays of equal shape")

    @property
    def shape(self) -> tuple:
        return self.values.shape

    @property
    def nu(self) -> int:
        return self.values.shape[0]

    @property
    def nv(self) -> int:
        return self.values.shape[1]

    def nodes(self) -> np.ndarray:
        i = np.arange(self.nu)[:, None]
        j = np.arange(self.nv)[None, :]
        return self.origin + self.h * i + 1j * self.h * j

    def same_layout(self, other: "FieldGrid") -> bool:
        return self.origin == other.origin and self.h == other.h and self.shape == other.shape


def grid_nodes(region, h: float):
    """Node count per axis and the complex node array for ``region = (u0, u1, v0, v1)``."""
    if not h > 0:
        raise ValueError("h must be positive")
    u0, u1, v0, v1 = (float(x) for x in region)
    if u1 < u0 or v1 < v0:
        raise ValueError(f"malformed region {region}")
    nu = int(math.floor((u1 - u0) / h + 1e-9)) + 1
    nv = int(math.floor((v1 - v0) / h + 1e-9)) + 1
    origin = complex(u0, v0)
    i = np.arange(nu)[:, None]
    j = np.arange(nv)[None, :]
    return origin, origin + h * i + 1j * h * j


def guard_mask(data: WeierstrassData, nodes: np.ndarray, h: float) -> np.ndarray:
    """True away from excluded points (distance > h)."""
    ok = np.ones(nodes.shape, dtype=bool)
    for p in data.excluded_points:
        ok &= np.abs(nodes - p) > h
    return ok


def _geometry(data, nodes, V=None):
    with np.errstate(all="ignore"):
        K = gauss_curvature(data, nodes, strict=False)
        NV = None if V is None else angle_function(data, V, nodes, strict=False)
    return K, NV


def cr1_values(data, V, nodes):
    """CR1 on an array of nodes; NaN inside the guard bands."""
    base, P, A, minus_K = _cr_parts(data, V, nodes)
    ok = (minus_K >= MIN_MINUS_K) & (1 + A / P >= MIN_ONE_PLUS_NV)
    with np.errstate(all="ignore"):
        out = base + np.log(P + A)
    return np.where(ok, out, np.nan)


def cr2_values(data, V, nodes):
    base, P, A, minus_K = _cr_parts(data, V, nodes)
    ok = (minus_K >= MIN_MINUS_K) & (1 + A / P >= MIN_ONE_PLUS_NV) & (1 - A / P >= MIN_ONE_PLUS_NV)
    with np.errstate(all="ignore"):
        out = 2 * base + np.log(P + A) + np.log(P - A)
    return np.where(ok, out, np.nan)


def field_grid(data: WeierstrassData, region, h: float, fn) -> FieldGrid:
    """Sample ``fn(nodes)`` on the region's grid, honouring the guard bands."""
    origin, nodes = grid_nodes(region, h)
    values = np.asarray(fn(nodes), dtype=float)
    mask = guard_mask(data, nodes, h) & np.isfinite(values)
    return FieldGrid(origin, h, np.where(mask, values, np.nan), mask)


def laplace_beltrami(grid: FieldGrid, data: WeierstrassData) -> FieldGrid:
    """lambda^-2 (f_E + f_W + f_N + f_S - 4 f_C) / h^2 on interior nodes."""
    if grid.nu < 3 or grid.nv < 3:
        raise MinsurfError(f"grid {grid.shape} too small for the 5-point stencil (need >= 3 per axis)")
    f, m, h = grid.values, grid.mask, grid.h
    out = np.full(f.shape, np.nan)
    inner = m[1:-1, 1:-1] & m[2:, 1:-1] & m[:-2, 1:-1] & m[1:-1, 2:] & m[1:-1, :-2]
    lap = (f[2:, 1:-1] + f[:-2, 1:-1] + f[1:-1, 2:] + f[1:-1, :-2] - 4 * f[1:-1, 1:-1]) / (h * h)
    nodes = grid.nodes()[1:-1, 1:-1]
    with np.errstate(all="ignore"):
        lam = conformal_factor(data, nodes, strict=False)
    inner &= np.isfinite(lam) & (lam > 0)
    out[1:-1, 1:-1] = np.where(inner, lap / np.where(inner, lam, 1.0) ** 2, np.nan)
    mask = np.zeros(f.shape, dtype=bool)
    mask[1:-1, 1:-1] = inner
    return FieldGrid(grid.origin, grid.h, out, mask)


# -- verification ------------------------------------------------------------


@dataclass(frozen=True)
class ResidualReport:
    identity: str
    h: float
    h2: float
    residual: float
    residual_fine: float
    order: float
    interior_nodes: int

    def passed(self, min_order: float = 1.9, floor: float = 1e-10) -> bool:
        # the floor applies at the primary spacing: for constant fields the
        # rounding noise of the stencil grows like 1/h^2
        if self.residual <= floor:
            return True
        return bool(self.order >= min_order)

    def summary(self) -> str:
        return (
            f"{self.identity}: residual(h={self.h:g}) = {self.residual:.6e}, "
            f"residual(h={self.h2:g}) = {self.residual_fine:.6e}, order = {self.order:.4f}"
        )


def _precheck(data, region, h, V, need_nv_lt1=False):
    """Raise if the grid meets a flat point or a degenerate normal direction."""
    _, nodes = grid_nodes(region, h)
    keep = guard_mask(data, nodes, h)
    K, NV = _geometry(data, nodes, V)
    if np.any(keep & ~(-K >= MIN_MINUS_K)):
        bad = nodes[keep & ~(-K >= MIN_MINUS_K)]
        raise FlatPointError(f"{bad.size} grid node(s) at or near flat points (K = 0), e.g. z={complex(bad[0])}")
    if NV is not None:
        low = keep & ~(1 + NV >= MIN_ONE_PLUS_NV)
        if np.any(low):
            raise AntipodalNormalError(
                f"{int(low.sum())} grid node(s) with N_V = -1, e.g. z={complex(nodes[low][0])}"
            )
        if need_nv_lt1:
            high = keep & ~(1 - NV >= MIN_ONE_PLUS_NV)
            if np.any(high):
                raise AntipodalNormalError(
                    f"{int(high.sum())} grid node(s) with N_V = +1, e.g. z={complex(nodes[high][0])}"
                )


def _max_residual(data, region, h, field_fn, target_fn):
    grid = field_grid(data, region, h, field_fn)
    lap = laplace_beltrami(grid, data)
    nodes = lap.nodes()
    target = target_fn(nodes)
    r = np.abs(lap.values - target)
    r = r[lap.mask & np.isfinite(r)]
    if r.size == 0:
        raise MinsurfError("no interior nodes to evaluate the residual on")
    return float(r.max()), int(r.size)


def _order(r, r2, h, h2) -> float:
    if r <= 0 or r2 <= 0:
        return math.inf if r2 < r else math.nan
    return math.log(r / r2) / math.log(h / h2)


def _spacings(h, h2):
    return (float(h), 0.5 * h if h2 is None else float(h2))


def _verify(name, data, region, h, h2, field_fn, target_fn):
    h2 = 0.5 * h if h2 is None else float(h2)
    r, n = _max_residual(data, region, h, field_fn, target_fn)
    r2, _ = _max_residual(data, region, h2, field_fn, target_fn)
    return ResidualReport(name, float(h), h2, r, r2, _order(r, r2, h, h2), n)


def verify_chern_identity(data, V, region, h, h2=None) -> ResidualReport:
    """Residual of K = Delta ln(1 + N_V)."""
    for step in _spacings(h, h2):
        _precheck(data, region, step, V)

    def field(nodes):
        K, NV = _geometry(data, nodes, V)
        return np.where(1 + NV >= MIN_ONE_PLUS_NV, np.log1p(np.maximum(NV, -1 + MIN_ONE_PLUS_NV)), np.nan)

    def target(nodes):
        return _geometry(data, nodes)[0]

    return _verify("chern", data, region, h, h2, field, target)


def verify_ricci_identity(data, region, h, h2=None) -> ResidualReport:
    """Residual of 4K = Delta ln(-K)."""
    for step in _spacings(h, h2):
        _precheck(data, region, step, None)

    def field(nodes):
        K = _geometry(data, nodes)[0]
        with np.errstate(all="ignore"):
            return np.where(-K >= MIN_MINUS_K, np.log(-K), np.nan)

    def target(nodes):
        return 4 * _geometry(data, nodes)[0]

    return _verify("ricci", data, region, h, h2, field, target)


def verify_harmonicity(data, V, which, region, h, h2=None) -> ResidualReport:
    """Residual of Delta CR = 0 for ``which`` in {"cr1", "cr2"}."""
    which = which.lower().replace("harmonic-", "")
    if which not in ("cr1", "cr2"):
        raise ValueError(f"unknown Chern-Ricci function {which!r}")
    for step in _spacings(h, h2):
        _precheck(data, region, step, V, need_nv_lt1=(which == "cr2"))
    fn = cr1_values if which == "cr1" else cr2_values

    def zero(nodes):
        return np.zeros(nodes.shape)

    return _verify(f"harmonic-{which}", data, region, h, h2, lambda nodes: fn(data, V, nodes), zero)


def verify(identity: str, data, region, h, h2=None, V=None) -> ResidualReport:
    """Dispatch on the CLI identity name."""
    if identity == "chern":
        return verify_chern_identity(data, V, region, h, h2)
    if identity == "ricci":
        return verify_ricci_identity(data, region, h, h2)
    if identity in ("harmonic-cr1", "harmonic-cr2"):
        return verify_harmonicity(data, V, identity, region, h, h2)
    raise ValueError(f"unknown identity {identity!r}; choose from {IDENTITIES}")
