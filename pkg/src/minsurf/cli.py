"""``minsurf`` command line interface."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys

import numpy as np

from minsurf import catalog
from minsurf.chern_ricci import IDENTITIES, grid_nodes, verify
from minsurf.classify import DEFAULT_THRESHOLD, classify_cr1, classify_cr2, sample_path
from minsurf.coords import curvature_line_residual_at_w, to_isothermic
from minsurf.differentials import WHICH, from_jet
from minsurf.errors import MinsurfError
from minsurf.export import build_mesh, export_csv, export_obj, fmt
from minsurf.sampling import CHANNELS, DEFAULT_VECTOR, sample_grid
from minsurf.weierstrass import WeierstrassData, unit_vector

log = logging.getLogger("minsurf")


def _floats(text: str, n: int, what: str) -> tuple:
    try:
        vals = tuple(float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"{what} must be {n} comma-separated numbers") from None
    if len(vals) != n:
        raise argparse.ArgumentTypeError(f"{what} must be {n} comma-separated numbers")
    return vals


def region_arg(text):
    return _floats(text, 4, "region")


def point_arg(text):
    u, v = _floats(text, 2, "point")
    return complex(u, v)


def vector_arg(text):
    return tuple(unit_vector(_floats(text, 3, "vector"), normalize=True))


def _parse_data(text: str, domain) -> WeierstrassData:
    parts = {}
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        key, sep, value = chunk.partition("=")
        if not sep:
            raise MinsurfError(f"malformed --data chunk {chunk!r}; expected G=<expr>;Psi=<expr>")
        parts[key.strip()] = value.strip()
    if set(parts) != {"G", "Psi"}:
        raise MinsurfError("--data needs exactly G=<expr> and Psi=<expr>")
    return WeierstrassData.from_strings(parts["G"], parts["Psi"], domain)


def _resolve(args) -> WeierstrassData:
    if bool(getattr(args, "surface", None)) == bool(getattr(args, "data", None)):
        raise MinsurfError("give exactly one of --surface or --data")
    region = getattr(args, "region", None)
    if args.surface:
        params = dict(p.split("=", 1) for p in (args.param or []))
        entry = catalog.get_surface(args.surface, params)
        return entry.data
    domain = region if region is not None else (-1.0, 1.0, -1.0, 1.0)
    return _parse_data(args.data, domain)


def _add_source(p, region_required=False):
    p.add_argument("--surface", choices=catalog.NAMES, help="catalog surface")
    p.add_argument("--param", action="append", metavar="KEY=VALUE", help="catalog parameter (repeatable)")
    p.add_argument("--data", metavar='"G=<expr>;Psi=<expr>"', help="Weierstrass data")
    p.add_argument("--region", type=region_arg, required=region_required, metavar="u0,u1,v0,v1")


def cmd_sample(args) -> int:
    data = _resolve(args)
    region = args.region or data.domain
    fields = [f for f in args.fields.split(",") if f] if args.fields else list(CHANNELS)
    samples, grids = sample_grid(data, region, args.h, fields=fields, V=args.vector)
    total = grids["x"].values.size
    print(f"sampled {len(samples)} of {total} nodes ({total - len(samples)} masked)")
    if args.obj:
        mesh = build_mesh(grids)
        export_obj(mesh, args.obj)
        print(f"wrote {args.obj}: {len(mesh.vertices)} vertices, {len(mesh.faces)} faces")
    if args.csv:
        rows = export_csv(grids, args.csv)
        print(f"wrote {args.csv}: {rows} rows")
    return 0


def cmd_verify(args) -> int:
    data = _resolve(args)
    region = args.region or data.domain
    report = verify(args.identity, data, region, args.h, args.h2, V=np.asarray(args.vector))
    print(f"identity      {report.identity}")
    print(f"residual(h)   h={report.h:g}  {report.residual:.6e}")
    print(f"residual(h2)  h={report.h2:g}  {report.residual_fine:.6e}")
    print(f"order         {report.order:.4f}")
    ok = report.passed()
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


def _chart(data, base):
    return to_isothermic(data, w0=base if base is not None else data.center, zeta0=0)


def cmd_classify(args) -> int:
    data = _resolve(args)
    chart = _chart(data, args.base)
    u0, u1, v0, v1 = data.domain
    radius = 0.45 * min(u1 - u0, v1 - v0)
    ws = sample_path(chart.w0, radius, args.samples)
    zetas = chart.forward_many(ws)
    fn = classify_cr1 if args.which == "cr1" else classify_cr2
    report = fn(chart, zetas, threshold=args.threshold)
    print(json.dumps(report.to_json_dict(), indent=2, sort_keys=True))
    return 0


def _cplx(z: complex) -> str:
    sign = "-" if z.imag < 0 else "+"
    return f"{fmt(z.real)}{sign}{fmt(abs(z.imag))}i"


def cmd_isothermic(args) -> int:
    data = _resolve(args)
    chart = _chart(data, args.base)
    target = args.target
    if not data.contains(target):
        raise MinsurfError(f"target {target} outside the domain {data.domain}")
    ws = chart.w0 + (target - chart.w0) * np.linspace(0.0, 1.0, 101)
    res = curvature_line_residual_at_w(chart, ws)
    zt = chart.forward(target)
    print(f"chart         {'affine (closed form)' if chart.closed_form else 'numeric (quadrature)'}")
    if chart.closed_form:
        print(f"scale         {_cplx(chart.scale)}")
        print(f"g(zeta)       {chart.g}")
    print(f"zeta(target)  {_cplx(zt)}")
    print(f"residual max  {float(res.max()):.6e}")
    print(f"residual mean {float(res.mean()):.6e}")
    return 0


def cmd_differentials(args) -> int:
    data = _resolve(args)
    region = args.region or data.domain
    _, nodes = grid_nodes(region, args.h)
    base = complex(0.5 * (region[0] + region[1]), 0.5 * (region[2] + region[3]))
    chart = _chart(data, base)
    with np.errstate(all="ignore"):
        jets = chart.jet_at_w(nodes, 3, strict=False)
        values = from_jet(args.which, *jets)
    zetas = chart.forward_many(nodes)
    ok = np.isfinite(values)
    rows = 0
    with open(args.csv, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["u", "v", "zeta_re", "zeta_im", f"{args.which}_re", f"{args.which}_im"])
        for i, j in zip(*np.nonzero(ok)):
            n, z, c = nodes[i, j], zetas[i, j], values[i, j]
            w.writerow([fmt(n.real), fmt(n.imag), fmt(z.real), fmt(z.imag), fmt(c.real), fmt(c.imag)])
            rows += 1
    print(f"wrote {args.csv}: {rows} rows ({int((~ok).sum())} undefined nodes skipped)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="minsurf", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample a surface on a grid and export OBJ/CSV")
    _add_source(p)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--vector", type=vector_arg, default=DEFAULT_VECTOR, metavar="x,y,z")
    p.add_argument("--fields", default=",".join(CHANNELS), help="comma-separated subset of K,Nv,cr1,cr2")
    p.add_argument("--obj")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", help="finite-difference check of an identity")
    p.add_argument("--identity", choices=IDENTITIES, required=True)
    _add_source(p)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--h2", type=float, default=None, help="second spacing (default h/2)")
    p.add_argument("--vector", type=vector_arg, default=DEFAULT_VECTOR, metavar="x,y,z")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", help="test for constant CR1/CR2 and fit the parameters")
    _add_source(p)
    p.add_argument("--which", choices=("cr1", "cr2"), required=True)
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--base", type=point_arg, default=None, metavar="u,v")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("isothermic", help="curvature-line chart diagnostics")
    _add_source(p)
    p.add_argument("--base", type=point_arg, required=True, metavar="u,v")
    p.add_argument("--target", type=point_arg, required=True, metavar="u,v")
    p.set_defaults(func=cmd_isothermic)

    p = sub.add_parser("differentials", help="Schwarzian / Q1 / Q2 coefficients on a grid")
    _add_source(p)
    p.add_argument("--which", choices=WHICH, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--csv", required=True)
    p.set_defaults(func=cmd_differentials)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    if args.command == "sample" and not (args.obj or args.csv):
        print("minsurf sample: give --obj and/or --csv", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (MinsurfError, ValueError, KeyError) as exc:
        print(f"minsurf {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
