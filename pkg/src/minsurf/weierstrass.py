"""Geometry of the minimal immersion defined by Weierstrass data (G, Psi dz).

All pointwise functions accept a complex scalar or a complex array and are
vectorised over it.  Vector-valued results carry the 3 components on the
last axis.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from minsurf.analytic import Const, Expr, differentiate, integrate_segments, parse_expr
from minsurf.analytic.quadrature import default_tol
from minsurf.errors import DegenerateMetricError, DomainError, QuadratureError

UNIT_TOL = 1e-12


def unit_vector(v, normalize: bool = False) -> np.ndarray:
    """Validate (or normalise) a constant direction V in R^3."""
    v = np.asarray(v, dtype=float).reshape(3)
    norm = float(np.linalg.norm(v))
    if normalize:
        if norm == 0:
            raise ValueError("zero vector has no direction")
        return v / norm
    if abs(norm - 1.0) > UNIT_TOL:
        raise ValueError(f"vector {v.tolist()} is not unit length (|v| = {norm!r})")
    return v


E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class WeierstrassData:
    """Gauss map ``G`` and height coefficient ``Psi`` on a rectangle of the z-plane.

    ``domain`` is ``(u_min, u_max, v_min, v_max)``.
    """

    G: Expr
    Psi: Expr
    domain: tuple = (-1.0, 1.0, -1.0, 1.0)
    excluded_points: tuple = field(default=())

    def __post_init__(self):
        u0, u1, v0, v1 = (float(x) for x in self.domain)
        if not (u0 <= u1 and v0 <= v1):
            raise ValueError(f"malformed domain {self.domain}")
        object.__setattr__(self, "domain", (u0, u1, v0, v1))
        object.__setattr__(self, "excluded_points", tuple(complex(p) for p in self.excluded_points))

    @classmethod
    def from_strings(cls, G: str, Psi: str, domain=(-1.0, 1.0, -1.0, 1.0), excluded_points=()):
        return cls(parse_expr(G), parse_expr(Psi), domain, excluded_points)

    @cached_property
    def dG(self) -> Expr:
        return differentiate(self.G)

    @property
    def center(self) -> complex:
        u0, u1, v0, v1 = self.domain
        return complex(0.5 * (u0 + u1), 0.5 * (v0 + v1))

    def contains(self, zeta, slack: float = 1e-12):
        zeta = np.asarray(zeta, dtype=complex)
        u0, u1, v0, v1 = self.domain
        return (
            (zeta.real >= u0 - slack)
            & (zeta.real <= u1 + slack)
            & (zeta.imag >= v0 - slack)
            & (zeta.imag <= v1 + slack)
        )

    def with_domain(self, domain) -> "WeierstrassData":
        return WeierstrassData(self.G, self.Psi, domain, self.excluded_points)

    def __str__(self):
        return f"G={self.G};Psi={self.Psi}"


@dataclass(frozen=True)
class SurfaceSample:
    zeta: complex
    X: np.ndarray
    N: np.ndarray
    lam: float
    K: float


def null_curve(data: WeierstrassData, zeta, strict: bool = True):
    """phi = (1/2 (1 - G^2) Psi, i/2 (1 + G^2) Psi, G Psi) stacked on the last axis."""
    g = data.G(zeta, strict=strict)
    psi = data.Psi(zeta, strict=strict)
    g2 = g * g
    phi = np.stack([0.5 * (1 - g2) * psi, 0.5j * (1 + g2) * psi, g * psi], axis=-1)
    if np.ndim(zeta) == 0:
        return tuple(complex(c) for c in phi)
    return phi


def _segment_clear(data: WeierstrassData, a: complex, b: complex, guard: float) -> bool:
    for p in data.excluded_points:
        d = b - a
        t = 0.0 if d == 0 else min(1.0, max(0.0, ((p - a) * d.conjugate()).real / abs(d) ** 2))
        if abs(a + t * d - p) <= guard:
            return False
    return True


def immerse_many(data: WeierstrassData, base: complex, X0, zetas, tol: float | None = None):
    """Positions at many parameters, integrating phi along ``[base, zeta]`` for each.

    Returns ``(X, ok)`` with ``X`` of shape ``(n, 3)``.  Entries whose path
    meets an excluded point or whose quadrature fails are NaN with
    ``ok = False``.
    """
    tol = default_tol() if tol is None else tol
    zetas = np.atleast_1d(np.asarray(zetas, dtype=complex)).ravel()
    base = complex(base)
    X0 = np.broadcast_to(np.asarray(X0, dtype=float), (3,))
    clear = np.array([_segment_clear(data, base, z, 1e-9) for z in zetas], dtype=bool)

    def integrand(z):
        return np.moveaxis(null_curve(data, z, strict=False), -1, 0)

    out = np.full((zetas.size, 3), np.nan)
    if clear.any():
        starts = np.full(int(clear.sum()), base)
        vals, ok = integrate_segments(integrand, starts, zetas[clear], tol)
        X = X0[None, :] + vals.real.T
        X[~ok] = np.nan
        out[clear] = X
        clear[np.flatnonzero(clear)[~ok]] = False
    return out, clear


def immerse(data: WeierstrassData, base, X0, zeta, tol: float | None = None) -> np.ndarray:
    """X(zeta) = X0 + Re of the integral of phi along the straight segment [base, zeta]."""
    base, zeta = complex(base), complex(zeta)
    if not (data.contains(base) and data.contains(zeta)):
        raise DomainError(f"segment [{base}, {zeta}] leaves the domain {data.domain}")
    if not _segment_clear(data, base, zeta, 1e-9):
        raise DomainError(f"segment [{base}, {zeta}] passes through an excluded point")
    tol = default_tol() if tol is None else tol
    if base == zeta:
        return np.broadcast_to(np.asarray(X0, dtype=float), (3,)).copy()
    # probe the endpoints strictly so singular data raise SingularEvaluation
    null_curve(data, base)
    null_curve(data, zeta)
    X, ok = immerse_many(data, base, X0, [zeta], tol)
    if not ok[0]:
        raise QuadratureError(f"quadrature failed on [{base}, {zeta}]")
    return X[0]


def conformal_factor(data: WeierstrassData, zeta, strict: bool = True):
    """lambda = |Psi| (1 + |G|^2) / 2, so that the metric is lambda^2 |dz|^2."""
    G = data.G(zeta, strict=strict)
    psi = data.Psi(zeta, strict=strict)
    lam = 0.5 * np.abs(psi) * (1 + np.abs(G) ** 2)
    if strict and np.any(lam == 0):
        raise DegenerateMetricError(f"conformal factor vanishes (branch point) near z={zeta!r}")
    return float(lam) if np.ndim(zeta) == 0 else lam


def normal(data: WeierstrassData, zeta, strict: bool = True):
    """Unit normal (2 Re G, 2 Im G, |G|^2 - 1) / (1 + |G|^2)."""
    G = data.G(zeta, strict=strict)
    r2 = np.abs(G) ** 2
    n = np.stack([2 * np.real(G), 2 * np.imag(G), r2 - 1], axis=-1) / np.asarray(1 + r2)[..., None]
    return n


def gauss_curvature(data: WeierstrassData, zeta, strict: bool = True):
    """K = -(4 |G'| / (|Psi| (1 + |G|^2)^2))^2; exactly 0 where G' = 0."""
    G = data.G(zeta, strict=strict)
    dG = data.dG(zeta, strict=strict)
    psi = data.Psi(zeta, strict=strict)
    with np.errstate(divide="ignore", invalid="ignore"):
        root = 4 * np.abs(dG) / (np.abs(psi) * (1 + np.abs(G) ** 2) ** 2)
    K = -(root**2)
    K = np.where(dG == 0, 0.0, K)
    return float(K) if np.ndim(zeta) == 0 else K


def angle_function(data: WeierstrassData, V, zeta, strict: bool = True):
    """N_V = <N, V>."""
    n = normal(data, zeta, strict=strict)
    out = n @ np.asarray(V, dtype=float)
    return float(out) if np.ndim(zeta) == 0 else out


def associate(data: WeierstrassData, theta: float) -> WeierstrassData:
    """Associate-family member: Psi -> e^{i theta} Psi."""
    phase = Const(cmath.exp(1j * float(theta)))
    return WeierstrassData(data.G, phase * data.Psi, data.domain, data.excluded_points)


def scale(data: WeierstrassData, s: float) -> WeierstrassData:
    """Homothety of the immersion by ``s > 0`` (Psi -> s Psi)."""
    if not s > 0:
        raise ValueError("scale factor must be positive")
    return WeierstrassData(data.G, Const(float(s)) * data.Psi, data.domain, data.excluded_points)


def sample(data: WeierstrassData, zeta, base=None, X0=(0.0, 0.0, 0.0), tol=None) -> SurfaceSample:
    zeta = complex(zeta)
    base = data.center if base is None else base
    return SurfaceSample(
        zeta=zeta,
        X=immerse(data, base, X0, zeta, tol),
        N=normal(data, zeta),
        lam=conformal_factor(data, zeta),
        K=gauss_curvature(data, zeta),
    )
