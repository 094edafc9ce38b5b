"""Recognise constant Chern-Ricci functions and recover the classifying parameters.

In a curvature-line chart, CR1_(-e3) = -Re log g' and CR2_(e3) = -2 Re log (g'/g).
Constant CR1 forces g = alpha (zeta - zeta0) (Enneper); constant CR2 forces
g = exp(alpha (zeta - zeta0)) (the exponential family).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np

from minsurf.coords import IsothermicChart
from minsurf.errors import BranchUnwrapError, ClassificationError, CriticalPointError, ZeroOfGaussMapError

DEFAULT_THRESHOLD = 1e-6
MIN_SAMPLES = 8


class Verdict(str, Enum):
    ENNEPER = "Enneper"
    EXPONENTIAL = "ExponentialFamily"
    NONCONSTANT = "NonConstant"


@dataclass(frozen=True)
class ClassificationReport:
    verdict: Verdict
    C: float
    alpha: complex | None
    zeta0: complex | None
    fit_residual: float
    constancy_spread: float
    threshold: float
    n_samples: int

    def to_json_dict(self) -> dict:
        def cplx(z):
            return None if z is None else {"re": z.real, "im": z.imag}

        d = asdict(self)
        d["verdict"] = self.verdict.value
        d["alpha"] = cplx(self.alpha)
        d["zeta0"] = cplx(self.zeta0)
        return d


def _samples(samples) -> np.ndarray:
    z = np.asarray(samples, dtype=complex).ravel()
    if z.size < MIN_SAMPLES:
        raise ClassificationError(f"need at least {MIN_SAMPLES} samples, got {z.size}")
    if np.unique(z).size < 2:
        raise ClassificationError("samples must contain distinct points")
    return z


def _jet(chart, zeta, order):
    if isinstance(chart, IsothermicChart):
        return chart.jet(zeta, order)
    raise TypeError("classification works on an IsothermicChart")


def _affine_fit(zeta: np.ndarray, values: np.ndarray):
    """Least squares values ~ a zeta + b; returns (a, b, normalised max residual)."""
    A = np.stack([zeta, np.ones_like(zeta)], axis=1)
    (a, b), *_ = np.linalg.lstsq(A, values, rcond=None)
    resid = np.abs(values - (a * zeta + b))
    return complex(a), complex(b), float(resid.max() / max(1.0, float(np.abs(values).max())))


def _decide(spread, C, fit_residual, threshold):
    return spread <= threshold * (1 + abs(C)) and fit_residual <= threshold


def classify_cr1(chart: IsothermicChart, samples, threshold: float = DEFAULT_THRESHOLD) -> ClassificationReport:
    """Constant -Re log g' over the samples means g is affine: an Enneper chart."""
    zeta = _samples(samples)
    g, dg = _jet(chart, zeta, 1)
    if np.any(dg == 0):
        raise CriticalPointError("g' vanishes at a sample")
    f = -np.log(np.abs(dg))
    C = float(np.mean(f))
    spread = float(f.max() - f.min())
    a, b, fit = _affine_fit(zeta, g)
    ok = _decide(spread, C, fit, threshold) and a != 0
    return ClassificationReport(
        verdict=Verdict.ENNEPER if ok else Verdict.NONCONSTANT,
        C=C,
        alpha=a,
        zeta0=(-b / a) if a != 0 else None,
        fit_residual=fit,
        constancy_spread=spread,
        threshold=threshold,
        n_samples=int(zeta.size),
    )


def unwrap_log(zeta: np.ndarray, g: np.ndarray, dlog: np.ndarray) -> np.ndarray:
    """Continuous branch of log g along the ordered samples.

    The increment between neighbours is predicted by the trapezoid rule on
    (log g)' = g'/g and the principal value is shifted by the multiple of
    2 pi i closest to that prediction.
    """
    logs = np.log(g + 0j)
    out = np.empty_like(logs)
    out[0] = logs[0]
    for k in range(1, logs.size):
        predicted = 0.5 * (dlog[k] + dlog[k - 1]) * (zeta[k] - zeta[k - 1])
        if abs(predicted.imag) > math.pi:
            raise BranchUnwrapError(
                f"arg g jumps by {predicted.imag:.3g} rad between samples {k - 1} and {k}; sample more densely"
            )
        raw = logs[k] - out[k - 1]
        turns = round((predicted.imag - raw.imag) / (2 * math.pi))
        out[k] = logs[k] + 2j * math.pi * turns
    return out


def classify_cr2(chart: IsothermicChart, samples, threshold: float = DEFAULT_THRESHOLD) -> ClassificationReport:
    """Constant -2 Re log (g'/g) means log g is affine: the exponential family.

    ``samples`` must be ordered along a path so that log g can be continued.
    """
    zeta = _samples(samples)
    g, dg = _jet(chart, zeta, 1)
    if np.any(g == 0):
        raise ZeroOfGaussMapError("g vanishes at a sample")
    if np.any(dg == 0):
        raise CriticalPointError("g' vanishes at a sample")
    dlog = dg / g
    f = -2 * np.log(np.abs(dlog))
    C = float(np.mean(f))
    spread = float(f.max() - f.min())
    logg = unwrap_log(zeta, g, dlog)
    a, c, fit = _affine_fit(zeta, logg)
    ok = _decide(spread, C, fit, threshold) and a != 0
    return ClassificationReport(
        verdict=Verdict.EXPONENTIAL if ok else Verdict.NONCONSTANT,
        C=C,
        alpha=a,
        zeta0=(-c / a) if a != 0 else None,
        fit_residual=fit,
        constancy_spread=spread,
        threshold=threshold,
        n_samples=int(zeta.size),
    )


def sample_path(center: complex, radius: float, n: int) -> np.ndarray:
    """Ordered samples on an open spiral arc around ``center`` (points in general position)."""
    t = np.linspace(0.0, 1.0, n)
    r = radius * (0.3 + 0.7 * t)
    return center + r * np.exp(1j * (0.2 + 1.5 * math.pi * t))
