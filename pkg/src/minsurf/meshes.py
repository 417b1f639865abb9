"""Tessellation into indexed triangle meshes and ASCII exporters.

Grids are row-major: vertex (i, j) sits at (u_min + i du, v_min + j dv)
with j varying fastest. Each grid cell splits into two triangles with a
fixed winding (lower-left triangle first), counterclockwise in the
parameter plane so face normals agree with the analytic normal. All
output formats are ASCII with 17-significant-digit floats, which
round-trips float64 exactly and keeps files diffable.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .diffgeo import grid_normals
from .errors import InvalidMeshError
from .surfaces import DEFAULT_FAMILY_PHASES, Selector, SurfaceSpec, eval_many, family

__all__ = [
    "DomainRect",
    "Mesh",
    "DEFAULT_DOMAIN",
    "FRAME_DOMAIN",
    "tessellate",
    "write_obj",
    "write_ply",
    "write_csv",
    "family_frames",
    "frame_filename",
]


@dataclass(frozen=True)
class DomainRect:
    """Axis-aligned parameter rectangle."""

    u_min: float
    u_max: float
    v_min: float
    v_max: float

    def __post_init__(self):
        if not (self.u_min < self.u_max and self.v_min < self.v_max):
            raise ValueError(
                "domain must satisfy u_min < u_max and v_min < v_max, got "
                f"[{self.u_min}, {self.u_max}] x [{self.v_min}, {self.v_max}]"
            )

    @property
    def u_width(self) -> float:
        return self.u_max - self.u_min

    @property
    def v_width(self) -> float:
        return self.v_max - self.v_min

    def axes(self, nu: int, nv: int) -> tuple[np.ndarray, np.ndarray]:
        """Axis arrays with nu (nv) cells, i.e. nu+1 (nv+1) samples."""
        return (
            np.linspace(self.u_min, self.u_max, nu + 1),
            np.linspace(self.v_min, self.v_max, nv + 1),
        )


DEFAULT_DOMAIN = DomainRect(-1.0, 1.0, -1.0, 1.0)
FRAME_DOMAIN = DomainRect(-4.0, 4.0, -4.0, 4.0)


@dataclass
class Mesh:
    """Indexed triangle mesh over a parameter grid."""

    vertices: np.ndarray
    faces: np.ndarray
    grid_dims: tuple[int, int]
    normals: np.ndarray | None = None

    def validate(self) -> None:
        npts = self.grid_dims[0] * self.grid_dims[1]
        if self.vertices.shape != (npts, 3):
            raise InvalidMeshError(
                f"expected {npts} vertices for grid {self.grid_dims}, "
                f"got {self.vertices.shape}"
            )
        nfaces = 2 * (self.grid_dims[0] - 1) * (self.grid_dims[1] - 1)
        if self.faces.shape != (nfaces, 3):
            raise InvalidMeshError(
                f"expected {nfaces} faces for grid {self.grid_dims}, "
                f"got {self.faces.shape}"
            )
        if self.faces.size and (self.faces.min() < 0 or self.faces.max() >= npts):
            raise InvalidMeshError("face indices out of range")
        if self.normals is not None and self.normals.shape != self.vertices.shape:
            raise InvalidMeshError("normals must match vertices in shape")


def _grid_faces(nu: int, nv: int) -> np.ndarray:
    i, j = np.meshgrid(np.arange(nu), np.arange(nv), indexing="ij")
    a = (i * (nv + 1) + j).ravel()
    b = ((i + 1) * (nv + 1) + j).ravel()
    c = b + 1
    d = a + 1
    lower = np.stack((a, b, d), axis=1)
    upper = np.stack((b, c, d), axis=1)
    faces = np.empty((2 * nu * nv, 3), dtype=np.int64)
    faces[0::2] = lower
    faces[1::2] = upper
    return faces


def tessellate(
    spec: SurfaceSpec,
    selector: Selector,
    domain: DomainRect,
    nu: int,
    nv: int,
    with_normals: bool = False,
) -> Mesh:
    """Sample the selected surface over a (nu x nv)-cell grid.

    Vertices at singular parameter points keep their position but carry a
    zero normal, preserving the grid topology for downstream tools.
    """
    if nu < 1 or nv < 1:
        raise ValueError("nu and nv must be >= 1")
    u_axis, v_axis = domain.axes(nu, nv)
    uu, vv = np.meshgrid(u_axis, v_axis, indexing="ij")
    uu, vv = uu.ravel(), vv.ravel()
    vertices = eval_many(spec, selector, uu, vv)
    normals = None
    if with_normals:
        normals, _ = grid_normals(spec, selector, uu, vv)
    mesh = Mesh(
        vertices=vertices,
        faces=_grid_faces(nu, nv),
        grid_dims=(nu + 1, nv + 1),
        normals=normals,
    )
    mesh.validate()
    return mesh


def _fmt(x: float) -> str:
    return format(x, ".17g")


@contextmanager
def _open_sink(sink):
    if hasattr(sink, "write"):
        yield sink
    else:
        with open(Path(sink), "w", encoding="ascii") as fh:
            yield fh


def _check_writable_mesh(mesh: Mesh) -> None:
    mesh.validate()
    if mesh.faces.shape[0] == 0 or mesh.vertices.shape[0] == 0:
        raise InvalidMeshError("refusing to write an empty mesh")


def write_obj(mesh: Mesh, sink) -> None:
    """Wavefront OBJ (ASCII subset: v/vn/f lines, 1-based indices)."""
    _check_writable_mesh(mesh)
    with _open_sink(sink) as fh:
        for p in mesh.vertices:
            fh.write(f"v {_fmt(p[0])} {_fmt(p[1])} {_fmt(p[2])}\n")
        if mesh.normals is not None:
            for nrm in mesh.normals:
                fh.write(f"vn {_fmt(nrm[0])} {_fmt(nrm[1])} {_fmt(nrm[2])}\n")
            for a, b, c in mesh.faces + 1:
                fh.write(f"f {a}//{a} {b}//{b} {c}//{c}\n")
        else:
            for a, b, c in mesh.faces + 1:
                fh.write(f"f {a} {b} {c}\n")


def write_ply(mesh: Mesh, sink) -> None:
    """ASCII PLY 1.0 with double-precision vertex properties."""
    _check_writable_mesh(mesh)
    with _open_sink(sink) as fh:
        fh.write("ply\n")
        fh.write("format ascii 1.0\n")
        fh.write(f"element vertex {mesh.vertices.shape[0]}\n")
        fh.write("property double x\nproperty double y\nproperty double z\n")
        if mesh.normals is not None:
            fh.write("property double nx\nproperty double ny\nproperty double nz\n")
        fh.write(f"element face {mesh.faces.shape[0]}\n")
        fh.write("property list uchar int vertex_indices\n")
        fh.write("end_header\n")
        if mesh.normals is not None:
            for p, nrm in zip(mesh.vertices, mesh.normals):
                fh.write(
                    f"{_fmt(p[0])} {_fmt(p[1])} {_fmt(p[2])} "
                    f"{_fmt(nrm[0])} {_fmt(nrm[1])} {_fmt(nrm[2])}\n"
                )
        else:
            for p in mesh.vertices:
                fh.write(f"{_fmt(p[0])} {_fmt(p[1])} {_fmt(p[2])}\n")
        for a, b, c in mesh.faces:
            fh.write(f"3 {a} {b} {c}\n")


def write_csv(u, v, points, sink) -> None:
    """CSV of parameter samples: header u,v,x,y,z then one row per sample."""
    u = np.asarray(u, dtype=np.float64).ravel()
    v = np.asarray(v, dtype=np.float64).ravel()
    points = np.asarray(points, dtype=np.float64)
    if points.shape != (u.size, 3) or u.size != v.size:
        raise ValueError("u, v and points must have matching lengths")
    with _open_sink(sink) as fh:
        fh.write("u,v,x,y,z\n")
        for k in range(u.size):
            p = points[k]
            fh.write(
                f"{_fmt(u[k])},{_fmt(v[k])},{_fmt(p[0])},{_fmt(p[1])},{_fmt(p[2])}\n"
            )


def family_frames(
    spec: SurfaceSpec,
    schedule=None,
    domain: DomainRect = FRAME_DOMAIN,
    nu: int = 64,
    nv: int = 64,
    with_normals: bool = False,
) -> list[tuple[float, Mesh]]:
    """One mesh per deformation phase; default schedule is the six
    phases 0, pi/10, pi/5, 3pi/10, 2pi/5, pi/2."""
    if schedule is None:
        schedule = DEFAULT_FAMILY_PHASES
    schedule = [float(t) for t in schedule]
    if not schedule:
        raise ValueError("frame schedule must be nonempty")
    return [
        (t, tessellate(spec, family(t), domain, nu, nv, with_normals))
        for t in schedule
    ]


def frame_filename(index: int, t: float) -> str:
    """frame_<index>_<phase in whole milliradians>.obj"""
    return f"frame_{index}_{round(t * 1000.0)}.obj"
