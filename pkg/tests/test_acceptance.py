"""Acceptance criteria, one test each.

Every test records a one-line verdict; the lines are printed in the pytest
terminal summary (and directly when this file is run as a script).
"""

import cmath
import math
import time

import numpy as np
import pytest

from conftest import CATENOID, CORPUS, ENNEPER, HELICOID, PERTURBED, random_points
from minsurf.analytic import Const, Z, differentiate, exp, integrate_segment, parse_expr, substitute
from minsurf.chern_ricci import verify
from minsurf.classify import Verdict, classify_cr1, classify_cr2, sample_path
from minsurf.coords import curvature_line_residual, to_isothermic
from minsurf.differentials import holomorphy_residual, q1, q2, schwarzian
from minsurf.sampling import sample_grid
from minsurf.weierstrass import E1, E3, WeierstrassData, gauss_curvature, immerse

RESULTS = {}


def record(number, title, ok, detail, elapsed, limit=None):
    within = limit is None or elapsed < limit
    status = "PASS" if ok and within else "FAIL"
    budget = f" (limit {limit:g} s)" if limit is not None else ""
    RESULTS[number] = f"[{status}] criterion {number}: {title}: {detail}; {elapsed:.2f} s{budget}"
    print(RESULTS[number])
    assert ok, RESULTS[number]
    assert within, RESULTS[number]


def test_criterion_1_enneper_golden_values():
    t0 = time.perf_counter()
    data = WeierstrassData.from_strings("z", "1", (-1.5, 1.5, -1.5, 1.5))
    _, grids = sample_grid(data, (-1, 1, -1, 1), 0.1, fields=["K", "cr1"], V=-E3)
    zs = grids["x"].nodes()
    u, v = zs.real, zs.imag
    X = np.stack([grids[k].values for k in "xyz"], axis=-1)
    X_ref = np.stack([0.5 * (u - u**3 / 3 + u * v**2), 0.5 * (-v + v**3 / 3 - u**2 * v), 0.5 * (u**2 - v**2)], axis=-1)
    d = 1 + u * u + v * v
    N = np.stack([grids[k].values for k in ("nx", "ny", "nz")], axis=-1)
    N_ref = np.stack([2 * u / d, 2 * v / d, (u * u + v * v - 1) / d], axis=-1)
    K0 = grids["K"].values[10, 10]
    errs = {
        "X": float(np.max(np.abs(X - X_ref))),
        "N": float(np.max(np.abs(N - N_ref))),
        "K(0)": abs(K0 + 16),
        "cr1": float(np.max(np.abs(grids["cr1"].values))),
    }
    ok = (
        grids["x"].mask.all()
        and grids["cr1"].mask.all()
        and zs[10, 10] == 0
        and errs["X"] <= 1e-8
        and errs["N"] <= 1e-10
        and errs["K(0)"] <= 1e-10
        and errs["cr1"] <= 1e-10
    )
    detail = ", ".join(f"max err {k} {v:.1e}" for k, v in errs.items())
    record(1, "Enneper golden values", ok, detail, time.perf_counter() - t0, 5)


def test_criterion_2_helicoid_golden_values():
    t0 = time.perf_counter()
    x_err = max(
        float(np.max(np.abs(immerse(HELICOID, 0, 0, 1j * v) - [0, 0, v])))
        for v in (math.pi / 2, -math.pi / 2, math.pi, -math.pi)
    )
    _, grids = sample_grid(HELICOID, (-1, 1, -math.pi, math.pi), 0.05, fields=["cr2"], V=E3)
    cr2_err = float(np.max(np.abs(grids["cr2"].values)))
    ok = grids["cr2"].mask.all() and x_err <= 1e-8 and cr2_err <= 1e-9
    detail = f"max err X(0, v) {x_err:.1e}, max |cr2| {cr2_err:.1e} on {grids['cr2'].values.size} nodes"
    record(2, "helicoid golden values", ok, detail, time.perf_counter() - t0, 5)


# smooth subregions: neither N_V = -1 (chern, cr1) nor |N_V| = 1 (cr2) may occur
IDENTITY_CASES = [
    (name, data, identity, V, region)
    for name, data, main, cr2_region, V1 in [
        ("enneper", ENNEPER, (-0.5, 0.5, -0.5, 0.5), (0.5, 1.0, 0.5, 1.0), -E3),
        ("perturbed", PERTURBED, (-0.5, 0.5, -0.5, 0.5), (0.5, 1.0, 0.5, 1.0), -E3),
        ("catenoid", CATENOID, (-0.5, 0.5, -1.0, 1.0), (-0.5, 0.5, -1.0, 1.0), E1),
        ("helicoid", HELICOID, (-0.5, 0.5, -1.0, 1.0), (-0.5, 0.5, -1.0, 1.0), E1),
    ]
    for identity, V, region in [
        ("chern", V1, main),
        ("ricci", None, main),
        ("harmonic-cr1", V1, main),
        ("harmonic-cr2", E3, cr2_region),
    ]
]


def test_criterion_3_identity_verification():
    t0 = time.perf_counter()
    failures, worst_order, floors = [], math.inf, 0
    for name, data, identity, V, region in IDENTITY_CASES:
        rep = verify(identity, data, region, 0.01, 0.005, V=V)
        if rep.residual <= 1e-10:
            floors += 1
        else:
            worst_order = min(worst_order, rep.order)
        if not rep.passed():
            failures.append(f"{name}/{rep.summary()}")
    ok = not failures
    detail = (
        f"{len(IDENTITY_CASES) - len(failures)}/{len(IDENTITY_CASES)} cases pass, "
        f"min order {worst_order:.3f}, {floors} at the rounding floor"
    )
    if failures:
        detail += "; failing: " + " | ".join(failures)
    record(3, "identity verification", ok, detail, time.perf_counter() - t0, 60)


def _enneper_chart(alpha, zeta0):
    data = WeierstrassData(Const(alpha) * (Z - Const(zeta0)), Const(1 / alpha), (-2.5, 2.5, -2.5, 2.5))
    return to_isothermic(data, 0, 0)


def _exponential_chart(alpha, zeta0):
    arg = Const(alpha) * (Z - Const(zeta0))
    return to_isothermic(WeierstrassData(exp(arg), exp(-arg) / Const(alpha)), 0, 0)


def test_criterion_4_classification_round_trips():
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    path = sample_path(0.1 + 0.05j, 0.6, 40)
    err1 = err2 = 0.0
    verdicts_ok = True
    for _ in range(50):
        alpha = math.exp(rng.uniform(math.log(0.1), math.log(10))) * cmath.exp(2j * math.pi * rng.uniform())
        zeta0 = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        rep = classify_cr1(_enneper_chart(alpha, zeta0), path)
        verdicts_ok &= rep.verdict is Verdict.ENNEPER
        err1 = max(err1, abs(rep.alpha - alpha), abs(rep.zeta0 - zeta0))
        rep = classify_cr2(_exponential_chart(alpha, zeta0), path)
        verdicts_ok &= rep.verdict is Verdict.EXPONENTIAL
        err2 = max(err2, abs(rep.alpha - alpha) / abs(alpha))
    g = Z + Const(0.01) * Z**2
    control = to_isothermic(WeierstrassData(g, Const(1) / differentiate(g)), 0, 0)
    near = sample_path(0.4 + 0.3j, 0.3, 40)
    negatives = (
        classify_cr1(control, near).verdict is Verdict.NONCONSTANT
        and classify_cr2(control, near).verdict is Verdict.NONCONSTANT
    )
    ok = verdicts_ok and err1 <= 1e-8 and err2 <= 1e-6 and negatives
    detail = (
        f"Enneper family max err {err1:.1e}, exponential family max rel err alpha {err2:.1e}, "
        f"negative control {'NonConstant' if negatives else 'misclassified'}"
    )
    record(4, "classification round trips", ok, detail, time.perf_counter() - t0, 10)


def test_criterion_5_isothermic_transform():
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    chart = to_isothermic(HELICOID, 0, 0)
    ws = random_points(rng, 100, (-0.9, 0.9, -0.9, 0.9))
    zetas = chart.forward_many(ws)
    res = float(np.max(curvature_line_residual(chart, zetas)))
    k_err = max(abs(chart.gauss_curvature(z) - gauss_curvature(HELICOID, w)) for w, z in zip(ws, zetas))
    ok = res <= 1e-8 and k_err <= 1e-6
    detail = f"max curvature-line residual {res:.1e}, max |K~ - K| {k_err:.1e}"
    record(5, "isothermic transform", ok, detail, time.perf_counter() - t0)


def test_criterion_6_differential_identities():
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    pts = random_points(rng, 100, (-0.8, 0.8, -0.8, 0.8))
    ident = 0.0
    for src in CORPUS[:5]:
        g = parse_expr(src)
        r = differentiate(g, 2)(pts) / differentiate(g)(pts)
        s = schwarzian(g, pts)
        ident = max(ident, float(np.max(np.abs(s - (q1(g, pts) - 0.5 * r * r)) / np.maximum(1, np.abs(s)))))
    mob = 0.0
    for src in CORPUS[:3]:
        g = parse_expr(src)
        m = substitute(Const(2 - 1j) * Z + Const(0.5), g) / (Const(0.3j) * g + Const(4))
        s = schwarzian(g, pts)
        mob = max(mob, float(np.max(np.abs(schwarzian(m, pts) - s) / np.maximum(1, np.abs(s)))))
    q2_max = 0.0
    for _ in range(10):
        alpha = complex(*rng.uniform(-3, 3, 2))
        g = exp(Const(alpha) * (Z - Const(complex(*rng.uniform(-1, 1, 2)))))
        q2_max = max(q2_max, float(np.max(np.abs(q2(g, pts)))))
    # the stencil error is h^2 |f'''| / 6; sample within discs where that stays small
    dbar = 0.0
    for src, radius in [("z + z^3/10", 0.4), ("z + z^3/10 + 5", 0.4), ("exp(z/2)+z+4", 0.5)]:
        g = parse_expr(src)
        disc = radius * np.sqrt(rng.uniform(0, 1, 20)) * np.exp(2j * np.pi * rng.uniform(0, 1, 20))
        for f in (schwarzian, q1, q2):
            if f is q2 and src == "z + z^3/10":
                continue
            dbar = max(dbar, max(holomorphy_residual(lambda t: f(g, t), z, 1e-3) for z in disc))
    ok = ident <= 1e-12 and mob <= 1e-10 and q2_max <= 1e-12 and dbar <= 1e-6
    detail = f"identity {ident:.1e}, Moebius {mob:.1e}, max |Q2| on exp family {q2_max:.1e}, max dbar {dbar:.1e}"
    record(6, "differential identities", ok, detail, time.perf_counter() - t0)


def test_criterion_7_quadrature_and_parser():
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    tol = 1e-10
    additivity = 0.0
    for src in CORPUS:
        f = parse_expr(src)
        for a, b, c in random_points(rng, 15, (-0.9, 0.9, -0.9, 0.9)).reshape(5, 3):
            lhs = integrate_segment(f, (a, b), tol) + integrate_segment(f, (b, c), tol)
            additivity = max(additivity, abs(lhs - integrate_segment(f, (a, c), tol)))
    f = parse_expr("exp(z)")
    one = integrate_segment(f, (0, 1 + 1j), tol)
    two = integrate_segment(f, (0, 1), tol) + integrate_segment(f, (1, 1 + 1j), tol)
    three = sum(integrate_segment(f, (a, b), tol) for a, b in [(0, 0.5j), (0.5j, 0.7 + 0.2j), (0.7 + 0.2j, 1 + 1j)])
    n = 200000
    t = np.linspace(0, 1, n + 1)
    y = f((1 + 1j) * t)
    trap = (1 + 1j) * (y[0] / 2 + y[1:-1].sum() + y[-1] / 2) / n
    path = max(abs(one - two), abs(one - three), abs(two - three))
    trap_err = abs(one - trap)
    fd_ok = True
    worst_ratio = math.inf
    for src in CORPUS:
        g = parse_expr(src)
        dg = differentiate(g)
        for z in random_points(rng, 5, (-0.8, 0.8, -0.8, 0.8)):
            e = [abs((g(z + h) - g(z - h)) / (2 * h) - dg(z)) for h in (1e-3, 1e-4, 1e-5)]
            scale = max(1.0, abs(dg(z)))
            worst_ratio = min(worst_ratio, e[0] / max(e[1], 1e-300))
            fd_ok &= e[0] <= 1e-5 * scale and (e[1] <= e[0] / 30 or e[1] <= 1e-9 * scale) and e[2] <= 1e-8 * scale
    ok = additivity <= 2 * tol and path <= 2 * tol and trap_err <= 1e-8 and fd_ok
    detail = (
        f"additivity {additivity:.1e}, path independence {path:.1e}, vs trapezoid {trap_err:.1e}, "
        f"finite differences {'O(h^2)' if fd_ok else 'off'} (min error ratio h=1e-3/1e-4 {worst_ratio:.0f})"
    )
    record(7, "quadrature and parser suites", ok, detail, time.perf_counter() - t0)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
