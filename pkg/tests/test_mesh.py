import io
import math
from pathlib import Path

import numpy as np
import pytest

from minsurf import (
    BASE,
    CONJUGATE,
    DEFAULT_FAMILY_PHASES,
    DomainRect,
    InvalidMeshError,
    Mesh,
    eval_many,
    family_frames,
    frame_filename,
    make_surface,
    tessellate,
    write_csv,
    write_obj,
    write_ply,
)
from minsurf.diffgeo import grid_normals

DATA = Path(__file__).parent / "data"
SQUARE = DomainRect(-1.0, 1.0, -1.0, 1.0)


def obj_vertices(text):
    vs = [l.split()[1:] for l in text.splitlines() if l.startswith("v ")]
    return np.array([[float(x) for x in row] for row in vs])


def ply_vertices(text):
    lines = text.splitlines()
    n = int(next(l for l in lines if l.startswith("element vertex")).split()[2])
    start = lines.index("end_header") + 1
    return np.array(
        [[float(x) for x in lines[start + i].split()[:3]] for i in range(n)]
    )


class TestTessellate:
    def test_single_cell(self):
        mesh = tessellate(make_surface(3, 1.0), BASE, SQUARE, 1, 1)
        assert mesh.vertices.shape == (4, 3)
        assert mesh.faces.shape == (2, 3)
        # corner (u, v) = (1, 1) is the last vertex in row-major order
        assert np.array_equal(mesh.vertices[3], [3.0, 3.0, 0.0])

    def test_counting_formulas(self):
        mesh = tessellate(make_surface(3, 1.0), BASE, SQUARE, 40, 40)
        assert mesh.vertices.shape[0] == 1681
        assert mesh.faces.shape[0] == 3200
        mesh = tessellate(make_surface(4, 1.0), BASE, SQUARE, 7, 13)
        assert mesh.vertices.shape[0] == 8 * 14
        assert mesh.faces.shape[0] == 2 * 7 * 13

    def test_row_major_vertex_order(self):
        mesh = tessellate(make_surface(3, 1.0), BASE, SQUARE, 2, 2)
        expected = eval_many(
            make_surface(3, 1.0),
            BASE,
            np.repeat(np.linspace(-1, 1, 3), 3),
            np.tile(np.linspace(-1, 1, 3), 3),
        )
        assert np.array_equal(mesh.vertices, expected)

    def test_singular_vertex_gets_zero_normal(self):
        mesh = tessellate(make_surface(5, 1.0), BASE, SQUARE, 4, 4, with_normals=True)
        zero_rows = np.flatnonzero(~mesh.normals.any(axis=1))
        assert list(zero_rows) == [12]  # center of the 5x5 grid, (u, v) = (0, 0)
        lengths = np.linalg.norm(np.delete(mesh.normals, 12, axis=0), axis=1)
        assert np.abs(lengths - 1.0).max() < 1e-12

    def test_winding_agrees_with_analytic_normal(self):
        spec = make_surface(3, 1.0)
        mesh = tessellate(spec, BASE, SQUARE, 8, 8)
        verts = mesh.vertices
        tri = verts[mesh.faces]
        face_normals = np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0])
        axis = np.linspace(-1, 1, 9)
        uu, vv = np.meshgrid(axis, axis, indexing="ij")
        uv = np.stack([uu.ravel(), vv.ravel()], axis=1)
        centroids = uv[mesh.faces].mean(axis=1)
        analytic, singular = grid_normals(spec, BASE, centroids[:, 0], centroids[:, 1])
        dots = np.einsum("ij,ij->i", face_normals, analytic)
        assert np.all(dots[~singular] > 0.0)

    def test_rejects_degenerate_grid(self):
        with pytest.raises(ValueError):
            tessellate(make_surface(3, 1.0), BASE, SQUARE, 0, 4)

    def test_domain_validation(self):
        with pytest.raises(ValueError):
            DomainRect(1.0, -1.0, 0.0, 1.0)


class TestWriters:
    def test_obj_line_counts_without_normals(self):
        mesh = tessellate(make_surface(3, 1.0), BASE, SQUARE, 1, 1)
        sink = io.StringIO()
        write_obj(mesh, sink)
        lines = sink.getvalue().splitlines()
        assert sum(1 for l in lines if l.startswith("v ")) == 4
        assert sum(1 for l in lines if l.startswith("f ")) == 2
        assert not any(l.startswith("vn ") for l in lines)
        assert lines[-1] == "f 3 4 2"

    def test_obj_face_format_with_normals(self):
        mesh = tessellate(make_surface(3, 1.0), BASE, SQUARE, 1, 1, with_normals=True)
        sink = io.StringIO()
        write_obj(mesh, sink)
        lines = sink.getvalue().splitlines()
        assert sum(1 for l in lines if l.startswith("vn ")) == 4
        assert lines[-1] == "f 3//3 4//4 2//2"

    def test_ply_header(self):
        mesh = tessellate(make_surface(3, 1.0), BASE, SQUARE, 1, 1)
        sink = io.StringIO()
        write_ply(mesh, sink)
        text = sink.getvalue()
        assert text.startswith("ply\nformat ascii 1.0\n")
        assert "element vertex 4" in text
        assert "element face 2" in text
        assert text.splitlines()[-1] == "3 2 3 1"

    def test_obj_and_ply_decode_to_identical_coordinates(self):
        mesh = tessellate(make_surface(5, 2.0), BASE, SQUARE, 5, 5, with_normals=True)
        obj_sink, ply_sink = io.StringIO(), io.StringIO()
        write_obj(mesh, obj_sink)
        write_ply(mesh, ply_sink)
        a = obj_vertices(obj_sink.getvalue())
        b = ply_vertices(ply_sink.getvalue())
        assert np.array_equal(a, b)
        assert np.array_equal(a, mesh.vertices)  # 17 digits round-trip float64

    def test_csv_round_trip(self):
        spec = make_surface(3, 1.0)
        u = np.array([-1.0, 0.25, 1.0])
        v = np.array([0.5, -0.5, 0.0])
        pts = eval_many(spec, BASE, u, v)
        sink = io.StringIO()
        write_csv(u, v, pts, sink)
        lines = sink.getvalue().splitlines()
        assert lines[0] == "u,v,x,y,z"
        assert len(lines) == 4
        parsed = np.array([[float(x) for x in l.split(",")] for l in lines[1:]])
        assert np.array_equal(parsed[:, 2:], pts)

    def test_empty_mesh_is_rejected(self):
        empty = Mesh(
            vertices=np.zeros((1, 3)), faces=np.zeros((0, 3), dtype=np.int64),
            grid_dims=(1, 1),
        )
        with pytest.raises(InvalidMeshError):
            write_obj(empty, io.StringIO())
        with pytest.raises(InvalidMeshError):
            write_ply(empty, io.StringIO())

    def test_mesh_validation_catches_bad_counts(self):
        bad = Mesh(
            vertices=np.zeros((5, 3)), faces=np.zeros((2, 3), dtype=np.int64),
            grid_dims=(2, 2),
        )
        with pytest.raises(InvalidMeshError):
            bad.validate()


class TestGoldenFiles:
    """Byte stability of the exporters for a fixed small mesh."""

    @pytest.fixture()
    def golden_mesh(self):
        return tessellate(
            make_surface(3, 1.0), BASE, SQUARE, 4, 4, with_normals=True
        )

    def test_obj_matches_golden(self, golden_mesh):
        sink = io.StringIO()
        write_obj(golden_mesh, sink)
        assert sink.getvalue() == (DATA / "enneper_4x4.obj").read_text()

    def test_ply_matches_golden(self, golden_mesh):
        sink = io.StringIO()
        write_ply(golden_mesh, sink)
        assert sink.getvalue() == (DATA / "enneper_4x4.ply").read_text()

    def test_runs_are_byte_identical(self, golden_mesh):
        first, second = io.StringIO(), io.StringIO()
        write_obj(golden_mesh, first)
        write_obj(
            tessellate(make_surface(3, 1.0), BASE, SQUARE, 4, 4, with_normals=True),
            second,
        )
        assert first.getvalue() == second.getvalue()


class TestFrames:
    def test_default_schedule(self):
        spec = make_surface(3, 1.0)
        frames = family_frames(spec, nu=8, nv=8)
        assert [t for t, _ in frames] == list(DEFAULT_FAMILY_PHASES)
        assert all(m.vertices.shape == (81, 3) for _, m in frames)

    def test_endpoints_match_base_and_conjugate(self):
        spec = make_surface(3, 1.0)
        domain = DomainRect(-4, 4, -4, 4)
        frames = family_frames(spec, domain=domain, nu=16, nv=16)
        base = tessellate(spec, BASE, domain, 16, 16)
        conj = tessellate(spec, CONJUGATE, domain, 16, 16)
        assert np.array_equal(frames[0][1].vertices, base.vertices)
        assert np.array_equal(frames[0][1].faces, base.faces)
        assert np.allclose(frames[5][1].vertices, conj.vertices, rtol=0, atol=1e-12)

    def test_single_phase_blend(self):
        spec = make_surface(3, 1.0)
        frames = family_frames(spec, schedule=[math.pi / 4.0], nu=4, nv=4)
        assert len(frames) == 1
        base = tessellate(spec, BASE, DomainRect(-4, 4, -4, 4), 4, 4)
        conj = tessellate(spec, CONJUGATE, DomainRect(-4, 4, -4, 4), 4, 4)
        blend = (math.sqrt(2.0) / 2.0) * (base.vertices + conj.vertices)
        assert np.allclose(frames[0][1].vertices, blend, rtol=1e-15, atol=1e-12)

    def test_empty_schedule_is_rejected(self):
        with pytest.raises(ValueError):
            family_frames(make_surface(3, 1.0), schedule=[])

    def test_filenames(self):
        names = [frame_filename(i, t) for i, t in enumerate(DEFAULT_FAMILY_PHASES)]
        assert names == [
            "frame_0_0.obj",
            "frame_1_314.obj",
            "frame_2_628.obj",
            "frame_3_942.obj",
            "frame_4_1257.obj",
            "frame_5_1571.obj",
        ]
