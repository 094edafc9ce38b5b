"""Isothermic (curvature-line) charts zeta = zeta0 + int sqrt(G' Psi) dw.

In the new coordinate the Gauss map is g(zeta) = G(w(zeta)) and the height
coefficient becomes 1/g', so the Hopf differential is a constant multiple
of dzeta^2.  Derivatives of g in zeta are built symbolically in the old
variable through d/dzeta = (1/s(w)) d/dw with s = sqrt(G' Psi).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from minsurf.analytic import (
    Const,
    Expr,
    Z,
    differentiate,
    integrate_segment,
    sqrt,
    substitute,
)
from minsurf.errors import BranchCutError, DomainError, MinsurfError, ZeroOfHopfError
from minsurf.weierstrass import WeierstrassData

NEWTON_TOL = 1e-12
NEWTON_MAXITER = 50
_CONST_RTOL = 1e-13


def hopf_coefficient(data: WeierstrassData, w, strict: bool = True):
    """G'(w) Psi(w)."""
    return data.dG(w, strict=strict) * data.Psi(w, strict=strict)


def _validation_grid(data: WeierstrassData, n: int = 41) -> np.ndarray:
    u0, u1, v0, v1 = data.domain
    u = np.linspace(u0, u1, n)
    v = np.linspace(v0, v1, n)
    W = u[:, None] + 1j * v[None, :]
    for p in data.excluded_points:
        W = np.where(np.abs(W - p) < 1e-9, np.nan, W)
    return W


@dataclass(frozen=True)
class IsothermicChart:
    """Chart w -> zeta on ``data.domain``.

    ``speed`` is the expression s(w) = d zeta / dw.  ``scale`` is set when
    s is the constant sqrt(c) (the affine fast path); then ``g`` is the
    closed-form Gauss map as a function of zeta.
    """

    data: WeierstrassData
    w0: complex
    zeta0: complex
    speed: Expr
    scale: complex | None = None
    g: Expr | None = None
    _jets: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def closed_form(self) -> bool:
        return self.scale is not None

    # -- the map and its inverse ------------------------------------------

    def forward(self, w) -> complex:
        w = complex(w)
        if self.closed_form:
            return self.zeta0 + self.scale * (w - self.w0)
        return self.zeta0 + integrate_segment(self.speed, (self.w0, w))

    def forward_many(self, ws) -> np.ndarray:
        ws = np.asarray(ws, dtype=complex)
        if self.closed_form:
            return self.zeta0 + self.scale * (ws - self.w0)
        return np.vectorize(self.forward, otypes=[complex])(ws)

    def inverse(self, zeta, w_guess=None) -> complex:
        """Solve forward(w) = zeta by Newton iteration."""
        zeta = complex(zeta)
        if self.closed_form:
            return self.w0 + (zeta - self.zeta0) / self.scale
        w = self.w0 + (zeta - self.zeta0) / complex(self.speed(self.w0)) if w_guess is None else complex(w_guess)
        fw = self.forward(w)
        for _ in range(NEWTON_MAXITER):
            step = (fw - zeta) / complex(self.speed(w))
            w_new = w - step
            # advance forward() incrementally along the short Newton step
            fw = fw + integrate_segment(self.speed, (w, w_new))
            w = w_new
            if abs(step) <= NEWTON_TOL * max(1.0, abs(w)):
                return w
        raise MinsurfError(f"Newton inversion of the chart did not converge for zeta={zeta}")

    def inverse_many(self, zetas) -> np.ndarray:
        zetas = np.asarray(zetas, dtype=complex)
        if self.closed_form:
            return self.w0 + (zetas - self.zeta0) / self.scale
        return np.vectorize(self.inverse, otypes=[complex])(zetas)

    # -- the Gauss map in the new coordinate --------------------------------

    def jet_expr(self, k: int) -> Expr:
        """Expression in w for d^k g / d zeta^k."""
        if k not in self._jets:
            if k == 0:
                self._jets[0] = self.data.G
            else:
                self._jets[k] = differentiate(self.jet_expr(k - 1)) / self.speed
        return self._jets[k]

    def jet_at_w(self, w, order: int, strict: bool = True) -> list:
        """[g, g', ..., g^(order)] evaluated at chart points given by their w."""
        return [self.jet_expr(k)(w, strict=strict) for k in range(order + 1)]

    def jet(self, zeta, order: int, strict: bool = True) -> list:
        w = self.inverse(zeta) if np.ndim(zeta) == 0 else self.inverse_many(zeta)
        return self.jet_at_w(w, order, strict=strict)

    def transformed_psi_at_w(self, w, strict: bool = True):
        """Height coefficient in zeta: Psi(w) dw/dzeta."""
        return self.data.Psi(w, strict=strict) / self.speed(w, strict=strict)

    def gauss_curvature(self, zeta):
        """-(2|g'| / (1 + |g|^2))^4 evaluated through the chart."""
        g, dg = self.jet(zeta, 1)
        return -((2 * np.abs(dg) / (1 + np.abs(g) ** 2)) ** 4)

    def normal(self, zeta):
        g = self.jet(zeta, 0)[0]
        r2 = np.abs(g) ** 2
        return np.stack([2 * np.real(g), 2 * np.imag(g), r2 - 1], axis=-1) / np.asarray(1 + r2)[..., None]

    def angle_function(self, V, zeta):
        return self.normal(zeta) @ np.asarray(V, dtype=float)


def _check_hopf(data: WeierstrassData, c_values: np.ndarray, constant: bool) -> None:
    vals = c_values[np.isfinite(c_values)]
    if vals.size == 0:
        raise DomainError("G'Psi could not be evaluated anywhere on the domain")
    scale = max(1.0, float(np.max(np.abs(vals))))
    if np.any(np.abs(vals) <= 1e-14 * scale):
        raise ZeroOfHopfError("G'Psi vanishes inside the domain; no isothermic chart")
    if constant:
        return
    tiny = 1e-14 * scale
    on_cut = (c_values.real < 0) & (np.abs(c_values.imag) <= tiny)
    # sign change of Im across a grid edge while Re < 0 means the cut is crossed
    im, re = c_values.imag, c_values.real
    cross_u = (np.sign(im[1:, :]) * np.sign(im[:-1, :]) < 0) & ((re[1:, :] < 0) | (re[:-1, :] < 0))
    cross_v = (np.sign(im[:, 1:]) * np.sign(im[:, :-1]) < 0) & ((re[:, 1:] < 0) | (re[:, :-1] < 0))
    if on_cut.any() or cross_u.any() or cross_v.any():
        raise BranchCutError("G'Psi meets the negative real axis on the domain; principal sqrt is discontinuous there")


def to_isothermic(data: WeierstrassData, w0=None, zeta0=0j, validate: bool = True) -> IsothermicChart:
    """Build the isothermic chart with forward(w0) = zeta0."""
    w0 = data.center if w0 is None else complex(w0)
    zeta0 = complex(zeta0)
    if not data.contains(w0):
        raise DomainError(f"base point {w0} outside the domain {data.domain}")
    hopf = data.dG * data.Psi
    grid = _validation_grid(data)
    with np.errstate(all="ignore"):
        c_values = hopf(grid, strict=False)
    c0 = complex(hopf(w0))
    finite = c_values[np.isfinite(c_values)]
    constant = isinstance(hopf, Const) or (
        finite.size > 0 and float(np.max(np.abs(finite - c0))) <= _CONST_RTOL * max(1.0, abs(c0))
    )
    if validate:
        _check_hopf(data, c_values, constant)
    if c0 == 0:
        raise ZeroOfHopfError(f"G'Psi vanishes at the base point {w0}")
    if constant:
        s = cmath.sqrt(c0 + 0j)
        # g(zeta) = G(w0 + (zeta - zeta0)/s)
        g = substitute(data.G, Const(w0) + (Z - Const(zeta0)) / Const(s))
        return IsothermicChart(data, w0, zeta0, Const(s), scale=s, g=g)
    return IsothermicChart(data, w0, zeta0, sqrt(hopf))


def curvature_line_residual_at_w(chart: IsothermicChart, w):
    """|g~' Psi~ - 1| at chart points given by their w-preimage."""
    dg = chart.jet_expr(1)(w)
    psi = chart.transformed_psi_at_w(w)
    return np.abs(dg * psi - 1)


def curvature_line_residual(chart: IsothermicChart, zeta):
    """|g~'(zeta) Psi~(zeta) - 1| for the transformed data (zero for an exact chart)."""
    w = chart.inverse(zeta) if np.ndim(zeta) == 0 else chart.inverse_many(zeta)
    r = curvature_line_residual_at_w(chart, w)
    return float(r) if np.ndim(zeta) == 0 else r
