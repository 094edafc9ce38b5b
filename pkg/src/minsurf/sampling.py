"""Sample a surface on a parameter grid: positions, normals and scalar channels."""

from __future__ import annotations

import logging

import numpy as np

from minsurf.chern_ricci import FieldGrid, cr1_values, cr2_values, grid_nodes, guard_mask
from minsurf.errors import DomainError
from minsurf.weierstrass import (
    SurfaceSample,
    WeierstrassData,
    angle_function,
    conformal_factor,
    gauss_curvature,
    immerse_many,
    normal,
    unit_vector,
)

log = logging.getLogger(__name__)

CHANNELS = ("K", "Nv", "cr1", "cr2")
DEFAULT_VECTOR = (0.0, 0.0, -1.0)


def sample_grid(
    data: WeierstrassData,
    region,
    h: float,
    fields=CHANNELS,
    V=DEFAULT_VECTOR,
    base=None,
    X0=(0.0, 0.0, 0.0),
    tol=None,
):
    """Evaluate the surface on the grid of ``region`` with spacing ``h``.

    Returns ``(samples, grids)``.  ``samples`` lists a :class:`SurfaceSample`
    for every valid node in row-major (u-major) order; ``grids`` maps
    ``x, y, z, nx, ny, nz`` and each requested channel to a
    :class:`FieldGrid`.  Node failures are recorded in the masks.
    """
    fields = tuple(fields)
    unknown = set(fields) - set(CHANNELS)
    if unknown:
        raise ValueError(f"unknown channel(s) {sorted(unknown)}; choose from {CHANNELS}")
    V = unit_vector(V)
    u0, u1, v0, v1 = (float(x) for x in region)
    if not (data.contains(complex(u0, v0)) and data.contains(complex(u1, v1))):
        raise DomainError(f"region {tuple(region)} is not inside the domain {data.domain}")
    origin, nodes = grid_nodes(region, h)
    base = data.center if base is None else complex(base)

    valid = guard_mask(data, nodes, h)
    with np.errstate(all="ignore"):
        N = normal(data, nodes, strict=False)
        K = gauss_curvature(data, nodes, strict=False)
        lam = conformal_factor(data, nodes, strict=False)
    valid &= np.all(np.isfinite(N), axis=-1) & np.isfinite(K) & np.isfinite(lam) & (lam > 0)

    X = np.full(nodes.shape + (3,), np.nan)
    flat = np.flatnonzero(valid)
    if flat.size:
        pos, ok = immerse_many(data, base, X0, nodes.ravel()[flat], tol)
        X.reshape(-1, 3)[flat] = pos
        valid.flat[flat[~ok]] = False

    def grid(values, extra=None):
        m = valid if extra is None else valid & extra
        return FieldGrid(origin, h, np.where(m, values, np.nan), m)

    grids = {}
    for k, name in enumerate("xyz"):
        grids[name] = grid(X[..., k])
    for k, name in enumerate(("nx", "ny", "nz")):
        grids[name] = grid(N[..., k])
    if "K" in fields:
        grids["K"] = grid(K)
    if "Nv" in fields:
        with np.errstate(all="ignore"):
            grids["Nv"] = grid(angle_function(data, V, nodes, strict=False))
    if "cr1" in fields:
        grids["cr1"] = grid(cr1_values(data, V, nodes))
    if "cr2" in fields:
        grids["cr2"] = grid(cr2_values(data, V, nodes))

    masked = int(valid.size - valid.sum())
    if masked:
        log.warning("%d of %d grid nodes masked (singular, excluded or failed quadrature)", masked, valid.size)

    samples = [
        SurfaceSample(
            zeta=complex(nodes[i, j]),
            X=X[i, j].copy(),
            N=N[i, j].copy(),
            lam=float(lam[i, j]),
            K=float(K[i, j]),
        )
        for i, j in zip(*np.nonzero(valid))
    ]
    return samples, grids
