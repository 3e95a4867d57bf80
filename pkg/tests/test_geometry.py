import numpy as np
import pytest

from wythoff._kernels import match_rows
from wythoff.diagram import disjoint_union, family_diagram, parse
from wythoff.errors import UnsupportedDimension
from wythoff.geometry import (
    AFFINE_RANK_TOL,
    off_document,
    polar_dual_check,
    realization_document,
    realize,
    ridge_reflection_check,
    verify_realization,
    wythoff_point,
)
from wythoff.reflection_group import simple_normals


def test_wythoff_point_hits_prescribed_mirrors():
    d = parse("o3x4x")
    x = wythoff_point(d)
    normals = simple_normals(d)
    dots = normals @ x
    assert abs(dots[0]) < 1e-12
    assert dots[1] == pytest.approx(dots[2], abs=1e-12)
    assert np.linalg.norm(x) == pytest.approx(1.0)


def test_segment_coordinates(shared):
    real = shared.realization(parse("x"))
    assert sorted(float(p[0]) for p in real.points) == pytest.approx([-1.0, 1.0])


def test_cube_coordinates(shared):
    real = shared.realization(parse("x4o3o"))
    expected = (
        np.array([[sx, sy, sz] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)])
        / np.sqrt(3.0)
    )
    assert (match_rows(expected, real.points, 1e-9) >= 0).all()


def test_octahedron_coordinates(shared):
    real = shared.realization(parse("o4o3x"))
    dots = np.round(real.points @ real.points.T, 9)
    off_diag = dots[~np.eye(6, dtype=bool)]
    assert set(np.unique(off_diag)) == {-1.0, 0.0}


def test_tetrahedron_angles(shared):
    real = shared.realization(parse("x3o3o"))
    dots = real.points @ real.points.T
    off = dots[~np.eye(4, dtype=bool)]
    assert np.allclose(off, -1.0 / 3.0, atol=1e-12)


def test_icosahedron_angles(shared):
    real = shared.realization(parse("o5o3x"))
    dots = np.abs(real.points @ real.points.T)
    off = dots[~np.eye(12, dtype=bool)]
    golden = 1.0 / np.sqrt(5.0)
    assert np.all(
        np.isclose(off, golden, atol=1e-9) | np.isclose(off, 1.0, atol=1e-9)
    )


def test_vertex_count_matches_f0(shared):
    for text in ["x3o3o", "o3x4x", "x5x3x", "x3x3x3x"]:
        real = shared.realization(parse(text))
        assert len(real.points) == real.lattice.f_vector[0]


def test_structure_checks_pass_on_samples(shared):
    samples = [
        parse("x"),
        parse("x3x"),
        parse("o3x4x"),
        parse("x3o3x"),
        family_diagram("D", 4, ringed=(1,)),
        parse("x5x3x"),
        disjoint_union(parse("x3x"), parse("x")),
        parse("o5o3o3x"),
    ]
    for d in samples:
        reports = verify_realization(shared.realization(d))
        assert all(r.ok for r in reports.values()), (d, reports)


def test_affine_rank_detects_each_face_dimension(shared):
    real = shared.realization(parse("o3x4x"))
    lat = real.lattice
    for sl in lat.slots_by_rank[1:]:
        for s in sl:
            pts = real.points[real.slot_vertices(s)]
            centered = pts - pts.mean(axis=1, keepdims=True)
            sv = np.linalg.svd(centered, compute_uv=False)
            assert ((sv > AFFINE_RANK_TOL).sum(axis=1) == s.rank).all()


def test_ridge_reflection_separates_regular_from_not(shared):
    for text in ["x4o3o", "o4o3x", "x3o3o", "x5o3o", "o5o3x", "x5o"]:
        assert ridge_reflection_check(shared.realization(parse(text))).ok, text
    for text in ["o3x4x", "x3x3o", "o4x3o", "x3o3x"]:
        rep = ridge_reflection_check(shared.realization(parse(text)))
        assert not rep.ok, text
        assert rep.detail["failures"]


def test_polar_dual_separates_regular_from_not(shared):
    for text in ["x4o3o", "o4o3x", "x3o3o", "x5o3o", "o5o3x"]:
        assert polar_dual_check(shared.realization(parse(text))).ok, text
    assert not polar_dual_check(shared.realization(parse("o3x4x"))).ok
    assert not polar_dual_check(shared.realization(parse("x3x3o"))).ok


def test_box_product_is_geometrically_regular(shared):
    box = disjoint_union(parse("x"), parse("x"), parse("x"))
    real = shared.realization(box)
    assert ridge_reflection_check(real).ok
    assert polar_dual_check(real).ok


def test_off_export_well_formed(shared):
    real = shared.realization(parse("o3x4x"))
    lines = off_document(real).strip().splitlines()
    assert lines[0] == "OFF"
    nv, nf, ne = map(int, lines[1].split())
    assert (nv, ne, nf) == real.lattice.f_vector
    vertex_lines = lines[2 : 2 + nv]
    assert all(len(l.split()) == 3 for l in vertex_lines)
    face_lines = lines[2 + nv :]
    assert len(face_lines) == nf
    edge_multiset = {}
    for fl in face_lines:
        parts = list(map(int, fl.split()))
        m, cycle = parts[0], parts[1:]
        assert m == len(cycle)
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            e = (min(a, b), max(a, b))
            edge_multiset[e] = edge_multiset.get(e, 0) + 1
    # each edge is shared by exactly two faces
    assert len(edge_multiset) == ne
    assert set(edge_multiset.values()) == {2}


def test_off_faces_wound_counterclockwise(shared):
    real = shared.realization(parse("x4o3o"))
    lines = off_document(real).strip().splitlines()
    pts = real.points
    for fl in lines[2 + len(pts) :]:
        cycle = list(map(int, fl.split()))[1:]
        p = pts[cycle]
        c = p.mean(axis=0)
        total = np.zeros(3)
        for i in range(len(cycle)):
            total += np.cross(p[i] - c, p[(i + 1) % len(cycle)] - c)
        assert np.dot(total, c) > 0  # outward-facing normal


def test_off_rejects_other_dimensions(shared):
    with pytest.raises(UnsupportedDimension):
        off_document(shared.realization(parse("x3o4o3o")))


def test_realization_document(shared):
    real = shared.realization(parse("x4o3o"))
    doc = realization_document(real)
    assert doc["dimension"] == 3
    assert doc["f_vector"] == [8, 12, 6]
    assert len(doc["vertices"]) == 8
    assert len(doc["faces"]) == 12 + 6 + 1
    top = max(doc["faces"], key=lambda f: f["rank"])
    assert sorted(top["vertices"]) == list(range(8))


def test_realize_accepts_prebuilt_lattice(shared):
    lat = shared.lattice(parse("x3o3o"))
    real = realize(lat)
    assert len(real.points) == 4
