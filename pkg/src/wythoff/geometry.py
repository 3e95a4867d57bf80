"""Geometric realization and metric verification of Wythoff polytopes.

The base point is the solution of <n_i, x> = 1 on ringed nodes and 0 on
crossed nodes for the simple normals n_i (unit rows of the Cholesky factor
of the Gram matrix), rescaled to unit norm.  Vertices are its images under
the group; since vertices correspond to cosets of the point stabilizer,
coordinates are computed once per coset representative and every remaining
image is only audited against its representative, so no tolerance-driven
deduplication ever decides combinatorics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ._kernels import match_rows, min_pairwise_distance
from .decoration import RING
from .errors import (
    DedupCollision,
    SingularSystem,
    SpanDeficient,
    UnsupportedDimension,
    WythoffError,
)
from .face_lattice import FaceLattice, build_lattice
from .reflection_group import simple_normals

POINT_MATCH_TOL = 1e-7       # image-vs-representative agreement
POINT_SEPARATION = 1e-3      # minimum distance between distinct vertices
INCIDENCE_TOL = 1e-10        # base point against its defining hyperplanes
CENTROID_TOL = 1e-9
AFFINE_RANK_TOL = 1e-7       # singular value cutoff for affine dimension
UNIFORM_EDGE_TOL = 1e-9      # relative spread of edge lengths
RIDGE_MATCH_TOL = 1e-7
FACET_NORM_TOL = 1e-9        # relative spread of facet centroid norms


def wythoff_point(d, normals=None) -> np.ndarray:
    """Unit-norm base point: on every crossed mirror, off every ringed one."""
    if normals is None:
        normals = simple_normals(d)
    rhs = np.array([1.0 if m == RING else 0.0 for m in d.marks])
    try:
        x = np.linalg.solve(normals, rhs)
    except np.linalg.LinAlgError as e:
        raise SingularSystem(str(e)) from e
    norm = np.linalg.norm(x)
    if norm < 1e-12:
        raise SingularSystem("base point collapsed to the origin")
    x = x / norm
    dots = normals @ x
    ringed = [i for i, m in enumerate(d.marks) if m == RING]
    crossed = [i for i in range(d.rank) if i not in ringed]
    if crossed and np.max(np.abs(dots[crossed])) > INCIDENCE_TOL:
        raise SingularSystem("base point misses a crossed mirror")
    rd = dots[ringed]
    if np.max(rd) - np.min(rd) > INCIDENCE_TOL * max(1.0, np.max(rd)):
        raise SingularSystem("ringed mirror distances are unequal")
    return x


@dataclass
class Realization:
    lattice: FaceLattice
    base_point: np.ndarray
    points: np.ndarray            # (V, dim); row i = rank-0 face with id i
    vertex_of_element: np.ndarray  # group element -> vertex index
    _face_vertex: dict            # slot offset -> (count, m) vertex indices

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def slot_vertices(self, slot) -> np.ndarray:
        return self._face_vertex[slot.offset]

    def vertices_of(self, face_id: int) -> np.ndarray:
        s = self.lattice.slot_of(face_id)
        return self._face_vertex[s.offset][face_id - s.offset]


def realize(src, group=None, budget=None) -> Realization:
    """Coordinates plus per-face vertex lists for a diagram or built lattice."""
    lat = src if isinstance(src, FaceLattice) else build_lattice(src, group, budget)
    g = lat.group
    x = wythoff_point(lat.diagram, g.normals)
    images = g.point_images(x)
    vt = lat.slots_by_rank[0][0].table
    points = images[vt.reps]
    deviation = np.abs(images - points[vt.coset_id]).max()
    if deviation > POINT_MATCH_TOL:
        raise DedupCollision(
            f"orbit image differs from its representative by {deviation:.2e}"
        )
    if len(points) > 1:
        gap = min_pairwise_distance(points)
        if gap < POINT_SEPARATION:
            raise DedupCollision(f"distinct vertices only {gap:.2e} apart")
    vof = vt.coset_id.astype(np.int64)
    total = len(points)
    face_vertex = {}
    for sl in lat.slots_by_rank:
        for s in sl:
            key = np.unique(s.table.coset_id.astype(np.int64) * total + vof)
            counts = np.bincount(key // total, minlength=s.count)
            m = int(counts[0])
            if not np.all(counts == m):
                raise WythoffError("conjugate faces with unequal vertex counts")
            face_vertex[s.offset] = (key % total).reshape(s.count, m).astype(np.int32)
    return Realization(lat, x, points, vt.coset_id, face_vertex)


# -- verification reports ----------------------------------------------------


@dataclass
class CheckReport:
    name: str
    ok: bool
    detail: dict


def centroid_check(real: Realization) -> CheckReport:
    off = float(np.linalg.norm(real.points.mean(axis=0)))
    return CheckReport("centroid", off <= CENTROID_TOL, {"offset": off})


def affine_rank_check(real: Realization) -> CheckReport:
    """Affine dimension of each face's vertex set equals its lattice rank."""
    lat = real.lattice
    checked = 0
    bad = []
    for sl in lat.slots_by_rank:
        for s in sl:
            if s.rank == 0:
                checked += s.count
                continue
            pts = real.points[real.slot_vertices(s)]
            centered = pts - pts.mean(axis=1, keepdims=True)
            sv = np.linalg.svd(centered, compute_uv=False)
            ranks = (sv > AFFINE_RANK_TOL).sum(axis=1)
            checked += s.count
            wrong = np.flatnonzero(ranks != s.rank)
            bad.extend(int(w) + s.offset for w in wrong[:10])
    return CheckReport(
        "affine_rank", not bad, {"faces": checked, "violations": bad}
    )


def containment_check(real: Realization) -> CheckReport:
    """Vertex set of the lower face of each cover lies inside the upper's."""
    lat = real.lattice
    nv = len(real.points)
    mats = []
    sizes = []
    offsets = []
    for sl in lat.slots_by_rank:
        rows = []
        cols = []
        size = np.empty(sum(s.count for s in sl), dtype=np.int64)
        base = sl[0].offset
        for s in sl:
            fv = real.slot_vertices(s)
            rows.append(np.repeat(np.arange(s.count) + (s.offset - base), fv.shape[1]))
            cols.append(fv.ravel())
            size[s.offset - base : s.offset - base + s.count] = fv.shape[1]
        mats.append(
            sp.csr_matrix(
                (
                    np.ones(sum(len(r) for r in rows), dtype=np.int64),
                    (np.concatenate(rows), np.concatenate(cols)),
                ),
                shape=(len(size), nv),
            )
        )
        sizes.append(size)
        offsets.append(base)
    lo_rank = np.empty(lat.face_total, dtype=np.int64)
    for sl in lat.slots_by_rank:
        for s in sl:
            lo_rank[s.offset : s.offset + s.count] = s.rank
    cov = lat.covers
    checked = 0
    violations = 0
    for k in range(lat.n):
        sel = lo_rank[cov[:, 0]] == k
        if not sel.any():
            continue
        lo = cov[sel, 0] - offsets[k]
        hi = cov[sel, 1] - offsets[k + 1]
        inter = (mats[k] @ mats[k + 1].T).tocsr()
        got = np.asarray(inter[lo, hi]).ravel()
        checked += len(lo)
        violations += int(np.sum(got != sizes[k][lo]))
    return CheckReport(
        "containment", violations == 0, {"covers": checked, "violations": violations}
    )


def distinct_faces_check(real: Realization) -> CheckReport:
    """No two faces of the same rank share their whole vertex set."""
    lat = real.lattice
    dup = 0
    for sl in lat.slots_by_rank:
        seen = set()
        count = 0
        for s in sl:
            fv = real.slot_vertices(s)
            count += s.count
            seen.update(row.tobytes() for row in fv)
        dup += count - len(seen)
    return CheckReport("distinct_faces", dup == 0, {"duplicates": dup})


def edge_uniformity_check(real: Realization) -> CheckReport:
    lat = real.lattice
    lengths = []
    for s in lat.slots_by_rank[1] if lat.n >= 1 else []:
        fv = real.slot_vertices(s)
        seg = real.points[fv]
        lengths.append(np.linalg.norm(seg[:, 0] - seg[:, 1], axis=1))
    lengths = np.concatenate(lengths)
    mean = float(lengths.mean())
    spread = float((lengths.max() - lengths.min()) / mean)
    return CheckReport(
        "edge_uniformity",
        spread <= UNIFORM_EDGE_TOL,
        {"edges": len(lengths), "mean": mean, "relative_spread": spread},
    )


def verify_realization(real: Realization) -> dict:
    """All numeric structure checks, keyed by name."""
    reports = [
        centroid_check(real),
        affine_rank_check(real),
        containment_check(real),
        distinct_faces_check(real),
        edge_uniformity_check(real),
    ]
    return {r.name: r for r in reports}


# -- regularity witnesses ----------------------------------------------------


def _ridge_normals(real: Realization) -> np.ndarray:
    """Unit normal of span(ridge) for every rank n-2 face.

    A symmetry fixing a ridge pointwise also fixes the origin, hence the
    whole linear span of the ridge; that span must be a hyperplane or no
    reflection through the ridge exists.
    """
    lat = real.lattice
    n = lat.n
    if n < 2:
        raise UnsupportedDimension("ridges need dimension >= 2")
    out = []
    for s in lat.slots_by_rank[n - 2]:
        pts = real.points[real.slot_vertices(s)]
        u_, sv, vt = np.linalg.svd(pts, full_matrices=True)
        ranks = (sv > AFFINE_RANK_TOL).sum(axis=1)
        if np.any(ranks != n - 1):
            raise SpanDeficient(
                f"ridge span has dimension {int(ranks.min())}, expected {n - 1}"
            )
        out.append(vt[:, -1, :])
    return np.vstack(out)


def ridge_reflection_check(real: Realization) -> CheckReport:
    """Reflection through every ridge hyperplane maps vertices to vertices.

    This is the geometric regularity test: it holds for the classical
    regular polytopes and fails as soon as two facet shapes meet at a
    ridge.
    """
    normals = _ridge_normals(real)
    pts = real.points
    failures = []
    for i, u in enumerate(normals):
        moved = pts - 2.0 * np.outer(pts @ u, u)
        idx = match_rows(moved, pts, RIDGE_MATCH_TOL)
        if (idx < 0).any():
            failures.append(i)
            if len(failures) >= 10:
                break
    return CheckReport(
        "ridge_reflection",
        not failures,
        {"ridges": len(normals), "failures": failures},
    )


def polar_dual_check(real: Realization) -> CheckReport:
    """Facet centroids sit on one sphere and are permuted by ridge reflections.

    The facet centroids are the vertices of the polar dual up to scale; the
    group is transitive on facets by construction, so with equal norms and
    ridge-reflection closure the dual vertex orbit is itself the orbit of a
    point under the same group.
    """
    lat = real.lattice
    cents = []
    for s in lat.slots_by_rank[lat.n - 1]:
        cents.append(real.points[real.slot_vertices(s)].mean(axis=1))
    cents = np.vstack(cents)
    norms = np.linalg.norm(cents, axis=1)
    spread = float((norms.max() - norms.min()) / norms.mean())
    closed = True
    for u in _ridge_normals(real):
        moved = cents - 2.0 * np.outer(cents @ u, u)
        if (match_rows(moved, cents, RIDGE_MATCH_TOL) < 0).any():
            closed = False
            break
    return CheckReport(
        "polar_dual",
        spread <= FACET_NORM_TOL and closed,
        {"facets": len(cents), "norm_spread": spread, "reflection_closed": closed},
    )


# -- export ------------------------------------------------------------------


def off_document(real: Realization) -> str:
    """OFF text for 3-dimensional polytopes, faces wound counterclockwise."""
    lat = real.lattice
    if lat.n != 3:
        raise UnsupportedDimension("OFF export supports dimension 3 only")
    pts = real.points
    faces = []
    for s in lat.slots_by_rank[2]:
        for row in real.slot_vertices(s):
            p = pts[row]
            c = p.mean(axis=0)
            _, _, vt = np.linalg.svd(p - c)
            b1, b2 = vt[0], vt[1]
            if np.dot(np.cross(b1, b2), c) < 0:
                b2 = -b2
            ang = np.arctan2((p - c) @ b2, (p - c) @ b1)
            faces.append(row[np.argsort(ang)])
    lines = [
        "OFF",
        f"{len(pts)} {len(faces)} {lat.f_vector[1]}",
    ]
    lines += [" ".join(f"{v:.12f}" for v in p) for p in pts]
    lines += [str(len(f)) + " " + " ".join(str(int(v)) for v in f) for f in faces]
    return "\n".join(lines) + "\n"


def realization_document(real: Realization) -> dict:
    """JSON-ready dict with coordinates and per-face vertex lists."""
    lat = real.lattice
    faces = []
    for sl in lat.slots_by_rank[1:]:
        for s in sl:
            fv = real.slot_vertices(s)
            faces.extend(
                {
                    "id": int(s.offset + i),
                    "rank": s.rank,
                    "vertices": [int(v) for v in fv[i]],
                }
                for i in range(s.count)
            )
    return {
        "dimension": lat.n,
        "f_vector": list(lat.f_vector),
        "vertices": [[float(v) for v in p] for p in real.points],
        "faces": faces,
    }
