import csv
import math

import numpy as np
import pytest

from minsurf.analytic import parse_expr
from minsurf.catalog import NAMES, get_surface
from minsurf.chern_ricci import FieldGrid
from minsurf.errors import DomainError, MinsurfError
from minsurf.export import MeshBuffer, build_mesh, export_csv, export_obj, read_obj
from minsurf.sampling import sample_grid
from minsurf.weierstrass import E3, WeierstrassData, gauss_curvature, normal


def enneper_closed_form(u, v):
    return np.stack([0.5 * (u - u**3 / 3 + u * v**2), 0.5 * (-v + v**3 / 3 - u**2 * v), 0.5 * (u**2 - v**2)], axis=-1)


def test_catalog_entries():
    e = get_surface("enneper")
    assert e.default_domain == (-1.5, 1.5, -1.5, 1.5)
    assert e.data.G == parse_expr("z") and e.data.Psi(0.3) == 1
    h = get_surface("helicoid")
    assert h.default_domain == (-1.0, 1.0, -math.pi, math.pi)
    z = 0.3 - 0.2j
    assert abs(h.data.Psi(z) - parse_expr("-1i*exp(-z)")(z)) < 1e-15
    c = get_surface("catenoid")
    assert abs(c.data.Psi(z) - parse_expr("exp(-z)")(z)) < 1e-15
    p = get_surface("enneper-perturbed")
    assert abs(p.data.G(z) - (z + z**3 / 10)) < 1e-15


def test_catalog_params_and_errors():
    ex = get_surface("exponential", {"alpha": "2-1i", "zeta0": "0.5"})
    z = 0.1 + 0.1j
    assert abs(ex.data.G(z) - np.exp((2 - 1j) * (z - 0.5))) < 1e-14
    a = get_surface("associate", {"theta": str(-math.pi / 2)})
    assert abs(a.data.Psi(z) - get_surface("helicoid").data.Psi(z)) < 1e-15
    with pytest.raises(KeyError):
        get_surface("costa")
    with pytest.raises(ValueError):
        get_surface("exponential", {"alpha": "0"})
    with pytest.raises(ValueError):
        get_surface("associate", {"theta": "1i"})


@pytest.mark.parametrize("name", NAMES)
def test_catalog_regression(name):
    e = get_surface(name)
    u0, u1, v0, v1 = e.default_domain
    uu, vv = np.meshgrid(np.linspace(u0, u1, 40), np.linspace(v0, v1, 40))
    zs = uu + 1j * vv
    N = normal(e.data, zs)
    assert np.allclose(np.linalg.norm(N, axis=-1), 1, atol=1e-12)
    assert np.all(gauss_curvature(e.data, zs) < 0)


def test_sample_enneper_grid():
    data = get_surface("enneper").data
    samples, grids = sample_grid(data, (-1, 1, -1, 1), 0.1)
    assert len(samples) == 441 and grids["x"].shape == (21, 21)
    nodes = grids["x"].nodes()
    X = np.stack([grids[k].values for k in "xyz"], axis=-1)
    assert np.max(np.abs(X - enneper_closed_form(nodes.real, nodes.imag))) <= 1e-8
    assert samples[0].zeta == -1 - 1j and samples[1].zeta == -1 - 0.9j  # u-major order
    # the downward vector makes N_V = 1 at the origin, so cr2 is undefined there only
    assert int((~grids["cr2"].mask).sum()) == 1
    assert np.allclose(grids["cr1"].values, 0, atol=1e-10)


def test_helicoid_cr2_channel():
    data = get_surface("helicoid").data
    _, grids = sample_grid(data, data.domain, 0.05, fields=["cr2"], V=E3)
    assert grids["cr2"].mask.all()
    assert np.max(np.abs(grids["cr2"].values)) <= 1e-9


def test_single_point_region():
    data = get_surface("enneper").data
    samples, grids = sample_grid(data, (0.2, 0.2, 0.3, 0.3), 0.1, fields=["K"])
    assert len(samples) == 1 and grids["K"].shape == (1, 1)


def test_sample_errors():
    data = get_surface("enneper").data
    with pytest.raises(DomainError):
        sample_grid(data, (-2, 2, -1, 1), 0.1)
    with pytest.raises(ValueError):
        sample_grid(data, (-1, 1, -1, 1), 0.1, fields=["H"])


def test_excluded_points_are_masked():
    data = WeierstrassData.from_strings("z", "1/z", (-1, 1, -1, 1), excluded_points=(0,))
    samples, grids = sample_grid(data, (-0.5, 0.5, -0.5, 0.5), 0.1, fields=["K"])
    assert not grids["x"].mask[5, 5]
    assert len(samples) == 121 - int((~grids["x"].mask).sum())


def _toy_grids(shape, mask=None):
    nu, nv = shape
    mask = np.ones(shape, dtype=bool) if mask is None else mask
    u, v = np.meshgrid(np.arange(nu, dtype=float), np.arange(nv, dtype=float), indexing="ij")
    g = {}
    for name, vals in [("x", u), ("y", v), ("z", u * v), ("nx", 0 * u), ("ny", 0 * u), ("nz", 1 + 0 * u)]:
        g[name] = FieldGrid(0j, 1.0, np.where(mask, vals, np.nan), mask)
    g["K"] = FieldGrid(0j, 1.0, np.where(mask, -1.0, np.nan), mask)
    return g


def test_two_by_two_mesh(tmp_path):
    mesh = build_mesh(_toy_grids((2, 2)))
    export_obj(mesh, tmp_path / "m.obj")
    lines = (tmp_path / "m.obj").read_text().splitlines()
    assert sum(l.startswith("v ") for l in lines) == 4
    assert sum(l.startswith("f ") for l in lines) == 2
    # (i, j) -> (i+1, j+1) diagonal: nodes 0 and 3 shared by both triangles
    assert [set(f) for f in mesh.faces.tolist()] == [{0, 2, 3}, {0, 3, 1}]
    assert "f 1//1 3//3 4//4" in lines


def test_enneper_mesh_counts():
    data = get_surface("enneper").data
    _, grids = sample_grid(data, (-1, 1, -1, 1), 0.1)
    mesh = build_mesh(grids)
    assert len(mesh.vertices) == 441 and len(mesh.faces) == 800
    assert np.isnan(mesh.scalars["cr2"]).sum() == 1


def test_masked_node_is_skipped():
    mask = np.ones((4, 4), dtype=bool)
    mask[1, 2] = False
    mesh = build_mesh(_toy_grids((4, 4), mask))
    assert len(mesh.vertices) == 15
    # the six triangles around an interior node of this triangulation disappear
    assert len(mesh.faces) == 18 - 6
    pos = mesh.vertices.tolist()
    assert [1.0, 2.0, 2.0] not in pos


def test_obj_round_trip_is_bit_identical(tmp_path):
    data = get_surface("helicoid").data
    _, grids = sample_grid(data, (-0.5, 0.5, -0.5, 0.5), 0.1, fields=[])
    mesh = build_mesh(grids)
    export_obj(mesh, tmp_path / "h.obj")
    back = read_obj(tmp_path / "h.obj")
    assert np.array_equal(back.vertices, mesh.vertices)
    assert np.array_equal(back.normals, mesh.normals)
    assert np.array_equal(back.faces, mesh.faces)


def test_empty_mesh_refused(tmp_path):
    with pytest.raises(MinsurfError):
        export_obj(MeshBuffer(np.zeros((0, 3)), np.zeros((0, 3)), np.zeros((0, 3))), tmp_path / "e.obj")


def test_mesh_buffer_validation():
    with pytest.raises(ValueError):
        MeshBuffer(np.zeros((2, 3)), np.zeros((2, 3)), [[0, 1, 2]])
    with pytest.raises(ValueError):
        MeshBuffer(np.zeros((3, 3)), np.zeros((3, 3)), [[0, 1, 2]], {"K": np.zeros(2)})


def test_csv_single_node(tmp_path):
    data = get_surface("enneper").data
    _, grids = sample_grid(data, (0.5, 0.5, 0.5, 0.5), 0.1, fields=["K", "cr1"])
    assert export_csv(grids, tmp_path / "one.csv") == 1
    text = (tmp_path / "one.csv").read_bytes()
    assert b"\r" not in text
    rows = list(csv.reader(text.decode().splitlines()))
    assert rows[0] == ["u", "v", "x", "y", "z", "K", "cr1"]
    assert len(rows) == 2 and float(rows[1][2]) == pytest.approx(enneper_closed_form(0.5, 0.5)[0])


def test_csv_enneper_cr1_column(tmp_path):
    data = get_surface("enneper").data
    _, grids = sample_grid(data, (-1, 1, -1, 1), 0.1)
    n = export_csv(grids, tmp_path / "e.csv")
    with open(tmp_path / "e.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert n == len(rows) == 441
    assert list(rows[0]) == ["u", "v", "x", "y", "z", "K", "Nv", "cr1", "cr2"]
    assert all(abs(float(r["cr1"])) <= 1e-10 for r in rows)
    # 17 significant digits survive the text round trip
    assert float(rows[7]["x"]) == grids["x"].values.flat[7]
    assert sum(r["cr2"] == "" for r in rows) == 1


def test_csv_masked_rows(tmp_path):
    mask = np.ones((3, 3), dtype=bool)
    mask[0, 0] = mask[2, 1] = False
    assert export_csv(_toy_grids((3, 3), mask), tmp_path / "m.csv") == 7


def test_csv_shape_mismatch(tmp_path):
    g = _toy_grids((3, 3))
    g["K"] = _toy_grids((2, 2))["K"]
    with pytest.raises(MinsurfError):
        export_csv(g, tmp_path / "bad.csv")
