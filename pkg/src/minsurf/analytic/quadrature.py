"""Adaptive Gauss-Kronrod (7/15) quadrature along straight complex segments.

The batched driver integrates many segments at once: every pass evaluates
the integrand on all pending subintervals in a single vectorised call, then
bisects the ones whose embedded error estimate is too large.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from minsurf.errors import QuadratureError

DEFAULT_TOL = 1e-10
MAX_DEPTH = 40
_ROUNDING = 50 * np.finfo(float).eps

# QUADPACK qk15 abscissae/weights (non-negative half; index 7 is the centre)
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
# Gauss points sit at the odd positions of the 15-point rule
GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]
GAUSS_WEIGHTS[[9, 11, 13]] = _WG[2::-1]


def default_tol() -> float:
    """Quadrature tolerance, overridable through ``MINSURF_TOL``."""
    raw = os.environ.get("MINSURF_TOL")
    if not raw:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise ValueError(f"MINSURF_TOL is not a number: {raw!r}") from None
    if not tol > 0:
        raise ValueError(f"MINSURF_TOL must be positive, got {raw!r}")
    return tol


@dataclass(frozen=True)
class Segment:
    start: complex
    end: complex

    def __post_init__(self):
        object.__setattr__(self, "start", complex(self.start))
        object.__setattr__(self, "end", complex(self.end))

    @property
    def length(self) -> float:
        return abs(self.end - self.start)


def _rule(func, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    z = mid[:, None] + half[:, None] * NODES[None, :]
    f = np.asarray(func(z), dtype=complex)
    scalar = f.ndim == 2
    if scalar:
        f = f[None]
    kron = (f * KRONROD_WEIGHTS).sum(axis=-1) * half
    gauss = (f * GAUSS_WEIGHTS).sum(axis=-1) * half
    err = np.max(np.abs(kron - gauss), axis=0)
    err = np.where(np.all(np.isfinite(kron), axis=0), err, np.inf)
    return kron, err, scalar


def integrate_segments(func, starts, ends, tol: float | None = None, max_depth: int = MAX_DEPTH):
    """Integrate ``func`` along each segment ``starts[k] -> ends[k]``.

    ``func`` maps a complex array of shape ``(m, 15)`` to either the same
    shape or ``(c, m, 15)`` for ``c`` simultaneous components.  Each segment
    is accepted once every subinterval's |K15 - G7| estimate, summed, stays
    below ``tol`` (absolute, per component).

    Returns ``(values, converged)``; ``values`` has shape ``(c, m)`` (or
    ``(m,)`` for scalar integrands) and entries of non-converged segments
    are NaN.
    """
    tol = default_tol() if tol is None else float(tol)
    if not tol > 0:
        raise ValueError("tol must be positive")
    starts = np.atleast_1d(np.asarray(starts, dtype=complex))
    ends = np.atleast_1d(np.asarray(ends, dtype=complex))
    m = starts.size
    owner_len = np.abs(ends - starts)

    a, b = starts.copy(), ends.copy()
    owner = np.arange(m)
    depth = 0
    total = None
    failed = np.zeros(m, dtype=bool)
    scalar = True
    if m == 0:
        return np.zeros(0, dtype=complex), np.ones(0, dtype=bool)
    while a.size:
        kron, err, scalar = _rule(func, a, b)
        if total is None:
            total = np.zeros((kron.shape[0], m), dtype=complex)
        # tolerance share proportional to subinterval length, floored at the
        # rounding level of the local result
        share = np.abs(b - a) / np.where(owner_len[owner] > 0, owner_len[owner], 1.0)
        floor = _ROUNDING * np.max(np.abs(kron), axis=0)
        ok = err <= np.maximum(tol * share, floor)
        for c in range(kron.shape[0]):
            np.add.at(total[c], owner[ok], kron[c, ok])
        bad = ~ok
        if depth >= max_depth:
            failed[owner[bad]] = True
            break
        a, b, owner = a[bad], b[bad], owner[bad]
        keep = ~failed[owner]
        a, b, owner = a[keep], b[keep], owner[keep]
        mid = 0.5 * (a + b)
        a, b = np.concatenate([a, mid]), np.concatenate([mid, b])
        owner = np.concatenate([owner, owner])
        depth += 1

    total[:, failed] = complex(np.nan, np.nan)
    if scalar:
        return total[0], ~failed
    return total, ~failed


def integrate_segment(f, seg, tol: float | None = None) -> complex:
    """Contour integral of the expression ``f`` along a straight segment.

    ``seg`` may be a :class:`Segment` or a ``(start, end)`` pair.  Raises
    :class:`SingularEvaluation` if ``f`` hits a singular point at a
    quadrature node and :class:`QuadratureError` if subdivision does not
    converge within the depth cap.
    """
    if not isinstance(seg, Segment):
        seg = Segment(*seg)
    if seg.start == seg.end:
        return 0j

    def integrand(z):
        return f(z, strict=True)

    values, ok = integrate_segments(integrand, [seg.start], [seg.end], tol)
    if not ok[0]:
        raise QuadratureError(
            f"no convergence on [{seg.start}, {seg.end}] after {MAX_DEPTH} bisections"
            " (singularity on or near the path?)"
        )
    return complex(values[0])
