"""Triangle meshes from sampled grids, Wavefront OBJ and CSV writers."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from minsurf.chern_ricci import FieldGrid
from minsurf.errors import MinsurfError

CSV_COLUMNS = ("x", "y", "z", "K", "Nv", "cr1", "cr2")


def fmt(x: float) -> str:
    return "%.17g" % x


@dataclass
class MeshBuffer:
    vertices: np.ndarray
    normals: np.ndarray
    faces: np.ndarray
    scalars: dict = field(default_factory=dict)

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        self.normals = np.asarray(self.normals, dtype=float).reshape(-1, 3)
        self.faces = np.asarray(self.faces, dtype=np.int64).reshape(-1, 3)
        n = len(self.vertices)
        if len(self.normals) != n:
            raise ValueError("normals and vertices differ in count")
        for name, values in self.scalars.items():
            if len(values) != n:
                raise ValueError(f"scalar channel {name!r} has {len(values)} entries for {n} vertices")
        if self.faces.size and (self.faces.min() < 0 or self.faces.max() >= n):
            raise ValueError("face index out of range")


def build_mesh(grids: dict) -> MeshBuffer:
    """Triangulate the position grids, splitting each quad along (i, j)-(i+1, j+1).

    Vertices are the nodes with valid position and normal; triangles
    touching a masked node are dropped.  Scalar channels are NaN where
    their own mask is off.
    """
    pos = [grids[k] for k in ("x", "y", "z")]
    nrm = [grids[k] for k in ("nx", "ny", "nz")]
    channels = {k: g for k, g in grids.items() if k in CSV_COLUMNS[3:]}
    valid = np.ones(pos[0].shape, dtype=bool)
    for g in pos + nrm + list(channels.values()):
        if not g.same_layout(pos[0]):
            raise MinsurfError("grids do not share a layout")
    for g in pos + nrm:
        valid &= g.mask
    index = np.full(valid.shape, -1, dtype=np.int64)
    index[valid] = np.arange(int(valid.sum()))

    a = index[:-1, :-1]
    b = index[1:, :-1]
    c = index[1:, 1:]
    d = index[:-1, 1:]
    t1 = np.stack([a, b, c], axis=-1).reshape(-1, 3)
    t2 = np.stack([a, c, d], axis=-1).reshape(-1, 3)
    # interleave so each quad's two triangles stay adjacent
    tris = np.stack([t1, t2], axis=1).reshape(-1, 3)
    tris = tris[np.all(tris >= 0, axis=1)]

    return MeshBuffer(
        vertices=np.stack([g.values[valid] for g in pos], axis=-1),
        normals=np.stack([g.values[valid] for g in nrm], axis=-1),
        faces=tris,
        scalars={k: np.where(g.mask, g.values, np.nan)[valid] for k, g in channels.items()},
    )


def export_obj(mesh: MeshBuffer, path) -> None:
    if len(mesh.vertices) == 0:
        raise MinsurfError("refusing to write an empty mesh")
    lines = [f"# minsurf mesh: {len(mesh.vertices)} vertices, {len(mesh.faces)} faces"]
    lines += [f"v {fmt(x)} {fmt(y)} {fmt(z)}" for x, y, z in mesh.vertices]
    lines += [f"vn {fmt(x)} {fmt(y)} {fmt(z)}" for x, y, z in mesh.normals]
    lines += [f"f {a + 1}//{a + 1} {b + 1}//{b + 1} {c + 1}//{c + 1}" for a, b, c in mesh.faces]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_obj(path) -> MeshBuffer:
    """Parse the subset of OBJ written by :func:`export_obj`."""
    verts, norms, faces = [], [], []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        if parts[0] == "v":
            verts.append([float(t) for t in parts[1:4]])
        elif parts[0] == "vn":
            norms.append([float(t) for t in parts[1:4]])
        elif parts[0] == "f":
            faces.append([int(t.split("/")[0]) - 1 for t in parts[1:4]])
    return MeshBuffer(np.array(verts), np.array(norms), np.array(faces, dtype=np.int64))


def export_csv(grids: dict, path) -> int:
    """Write ``u,v`` plus the present channels, one row per unmasked node.

    A node is unmasked when its position (or, without positions, any
    channel) is valid; a channel masked at an unmasked node is left empty.
    Returns the number of data rows written.
    """
    present = [k for k in CSV_COLUMNS if k in grids]
    if not present:
        raise MinsurfError("no channels to export")
    ref: FieldGrid = grids[present[0]]
    for k in present:
        if not grids[k].same_layout(ref):
            raise MinsurfError(f"grid {k!r} does not share the layout of {present[0]!r}")
    geometry = [k for k in ("x", "y", "z") if k in grids]
    if geometry:
        valid = np.logical_and.reduce([grids[k].mask for k in geometry])
    else:
        valid = np.logical_or.reduce([grids[k].mask for k in present])

    def cell(k, i, j):
        g = grids[k]
        return fmt(g.values[i, j]) if g.mask[i, j] else ""

    nodes = ref.nodes()
    rows = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
        writer.writerow(["u", "v", *present])
        for i, j in zip(*np.nonzero(valid)):
            z = nodes[i, j]
            writer.writerow([fmt(z.real), fmt(z.imag), *(cell(k, i, j) for k in present)])
            rows += 1
    return rows
