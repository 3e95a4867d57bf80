"""Face lattices of Wythoff polytopes.

A rank-k face is a pair (left coset of the face stabilizer, rank-k
decoration); the stabilizer is the parabolic subgroup generated by the
nodes not valued 1.  Faces of consecutive rank are in a cover relation
exactly when their selections nest and their cosets intersect.  The
whole-polytope face (all nodes selected, a single coset) serves as the top
of the lattice; a synthetic bottom sits below the vertices.

Flags are maximal chains.  They factor exactly as (selection ordering,
group element): stacking the per-rank coset-id columns for one ordering
over all group elements enumerates each flag once.  Structural checks
(diamond property, flag degree/connectivity) exploit that integer form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .decoration import (
    Decoration,
    decoration_from_selection,
    require_nondegenerate,
    selection_orderings,
    start_decoration,
    valid_selection_sets,
)
from .diagram import DecoratedDiagram, group_order
from .errors import WythoffError
from .reflection_group import Group, enumerate_group

# direct flag-graph checking above this many flags switches to the
# covering-space method (see flag_report)
FLAG_DIRECT_LIMIT = 700_000


@dataclass(frozen=True)
class Slot:
    """All faces sharing one decoration: a block of coset ids."""

    rank: int
    selection: frozenset
    decoration: Decoration
    table: object            # CosetTable
    offset: int              # global face id of coset 0

    @property
    def count(self) -> int:
        return self.table.count


@dataclass(frozen=True)
class Face:
    id: int
    rank: int
    selection: tuple[int, ...]
    rep: int                 # canonical coset representative (element index)


class FaceLattice:
    def __init__(self, diagram, start, group, slots_by_rank, covers):
        self.diagram = diagram
        self.start = start
        self.group = group
        self.n = diagram.rank
        self.slots_by_rank = slots_by_rank
        self.covers = covers              # (pairs, 2) lower-id, upper-id
        self.face_total = sum(s.count for sl in slots_by_rank for s in sl)
        self.bottom_id = self.face_total  # synthetic, rank -1
        self.top_id = slots_by_rank[self.n][0].offset
        self._slot_of_face = None
        self._chains = None
        self._flag_rows = None

    @property
    def f_vector(self) -> tuple[int, ...]:
        """Face counts for ranks 0..n-1 (top face excluded)."""
        return tuple(
            sum(s.count for s in self.slots_by_rank[k]) for k in range(self.n)
        )

    def faces(self):
        for sl in self.slots_by_rank:
            for s in sl:
                sel = tuple(sorted(s.selection))
                for c in range(s.count):
                    yield Face(s.offset + c, s.rank, sel, int(s.table.reps[c]))

    def slot_of(self, face_id: int) -> Slot:
        if self._slot_of_face is None:
            lookup = []
            for sl in self.slots_by_rank:
                for s in sl:
                    lookup.append((s.offset, s))
            lookup.sort(key=lambda t: t[0])
            self._slot_of_face = lookup
        import bisect

        keys = [t[0] for t in self._slot_of_face]
        i = bisect.bisect_right(keys, face_id) - 1
        return self._slot_of_face[i][1]

    def face(self, face_id: int) -> Face:
        s = self.slot_of(face_id)
        c = face_id - s.offset
        return Face(face_id, s.rank, tuple(sorted(s.selection)), int(s.table.reps[c]))

    # -- flags -----------------------------------------------------------

    def chains(self):
        """Selection orderings as per-rank slot indices (ranks 0..n-1)."""
        if self._chains is None:
            slot_idx = [
                {s.selection: i for i, s in enumerate(sl)}
                for sl in self.slots_by_rank
            ]
            chains = []
            for ordering in selection_orderings(self.start):
                sel = set()
                path = [slot_idx[0][frozenset()]]
                for w in ordering[:-1]:
                    sel.add(w)
                    path.append(slot_idx[len(sel)][frozenset(sel)])
                chains.append(tuple(path))
            self._chains = chains
        return self._chains

    def flag_count(self) -> int:
        return len(self.chains()) * self.group.order

    def flag_rows(self) -> np.ndarray:
        """All flags as rows of global face ids, one column per rank."""
        if self._flag_rows is None:
            cols = {}
            for k, sl in enumerate(self.slots_by_rank[: self.n]):
                for i, s in enumerate(sl):
                    cols[(k, i)] = (
                        s.table.coset_id.astype(np.int32) + np.int32(s.offset)
                    )
            blocks = [
                np.stack([cols[(k, ci)] for k, ci in enumerate(chain)], axis=1)
                for chain in self.chains()
            ]
            self._flag_rows = np.vstack(blocks) if blocks else np.empty((0, 0), np.int32)
        return self._flag_rows


def build_lattice(
    d: DecoratedDiagram,
    group: Group | None = None,
    budget: int | None = None,
    with_covers: bool = True,
) -> FaceLattice:
    """Enumerate all faces (and cover pairs) of the polytope of d."""
    require_nondegenerate(d)
    start = start_decoration(d)
    if group is None:
        group = enumerate_group(d, budget)
    n = d.rank
    slots_by_rank = []
    offset = 0
    for k in range(n + 1):
        slots = []
        for sel in sorted(valid_selection_sets(start, k), key=sorted):
            dec = decoration_from_selection(start, sel)
            table = group.coset_table(dec.stabilizer_nodes())
            slots.append(Slot(k, sel, dec, table, offset))
            offset += table.count
        slots_by_rank.append(slots)
    covers = _compute_covers(group, slots_by_rank) if with_covers else None
    return FaceLattice(d, start, group, slots_by_rank, covers)


def _compute_covers(group, slots_by_rank) -> np.ndarray:
    total = sum(s.count for sl in slots_by_rank for s in sl)
    pairs = []
    for k in range(len(slots_by_rank) - 1):
        for lo in slots_by_rank[k]:
            lo_ids = lo.table.coset_id.astype(np.int64) + lo.offset
            for hi in slots_by_rank[k + 1]:
                if not lo.selection < hi.selection:
                    continue
                hi_ids = hi.table.coset_id.astype(np.int64) + hi.offset
                key = np.unique(lo_ids * total + hi_ids)
                pairs.append(np.stack([key // total, key % total], axis=1))
    if not pairs:
        return np.empty((0, 2), dtype=np.int64)
    return np.vstack(pairs)


def f_vector_enumerated(lat: FaceLattice) -> tuple[int, ...]:
    """Face counts read off the enumerated coset partition."""
    return lat.f_vector


def f_vector_formula(d: DecoratedDiagram) -> tuple[int, ...]:
    """Face counts by orbit-stabilizer arithmetic only (no enumeration).

    f_k sums group_order(d) / group_order(stabilizer subdiagram) over the
    rank-k selections, so it works for groups far beyond any enumeration
    budget.
    """
    require_nondegenerate(d)
    start = start_decoration(d)
    total = group_order(d)
    out = []
    for k in range(d.rank):
        cnt = 0
        for sel in valid_selection_sets(start, k):
            dec = decoration_from_selection(start, sel)
            stab = dec.stabilizer_nodes()
            cnt += total // (group_order(d.induced(stab)) if stab else 1)
        out.append(cnt)
    return tuple(out)


def euler_ok(lat: FaceLattice) -> bool:
    n = lat.n
    total = sum((-1) ** k * f for k, f in enumerate(lat.f_vector))
    return total == 1 - (-1) ** n


# -- diamond property ------------------------------------------------------


@dataclass
class DiamondReport:
    pairs_checked: int
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def diamond_report(lat: FaceLattice) -> DiamondReport:
    """Every (rank k-1, rank k+1) incident pair has exactly 2 faces between.

    Uses sparse cover-matrix products; the bottom sentinel appears as an
    all-ones row so the k = 0 case (each edge has two vertices) and the
    k = n-1 case (each ridge lies in two facets) are included.
    """
    n = lat.n
    counts = [sum(s.count for s in sl) for sl in lat.slots_by_rank]
    offsets = [lat.slots_by_rank[k][0].offset if lat.slots_by_rank[k] else 0
               for k in range(n + 1)]
    mats = [sp.csr_matrix(np.ones((1, counts[0]), dtype=np.int64))]
    lo_rank = np.empty(lat.face_total, dtype=np.int64)
    for k, sl in enumerate(lat.slots_by_rank):
        for s in sl:
            lo_rank[s.offset : s.offset + s.count] = k
    cov = lat.covers
    ranks_of_lo = lo_rank[cov[:, 0]]
    for k in range(n):
        sel = ranks_of_lo == k
        rows = cov[sel, 0] - offsets[k]
        cols = cov[sel, 1] - offsets[k + 1]
        mats.append(
            sp.csr_matrix(
                (np.ones(len(rows), dtype=np.int64), (rows, cols)),
                shape=(counts[k], counts[k + 1]),
            )
        )
    checked = 0
    violations = []
    for k in range(n):
        prod = (mats[k] @ mats[k + 1]).tocoo()
        checked += prod.nnz
        bad = prod.data != 2
        if bad.any():
            for r, c, v in zip(
                prod.row[bad][:10], prod.col[bad][:10], prod.data[bad][:10]
            ):
                lower = None if k == 0 else int(r + offsets[k - 1])
                violations.append((lower, int(c + offsets[k + 1]), int(v)))
    return DiamondReport(checked, violations)


# -- flag graph ------------------------------------------------------------


@dataclass
class FlagReport:
    count: int
    chain_count: int
    degree_ok: bool
    connected: bool
    method: str

    @property
    def ok(self) -> bool:
        return self.degree_ok and self.connected


def flag_report(lat: FaceLattice, method: str = "auto") -> FlagReport:
    """Check every flag has one neighbor per rank and the graph is connected.

    method "direct" builds the explicit flag adjacency graph.  "covering"
    uses the exact product structure flags = orderings x group: each rank-k
    move computed at the identity determines all others by left translation
    (faces are cosets, so this is integer-exact), making connectivity a
    chain-graph + holonomy-subgroup condition.  "auto" picks direct below
    FLAG_DIRECT_LIMIT flags.  Both methods agree on every lattice small
    enough to run both; the test suite enforces that.
    """
    if method == "auto":
        method = "direct" if lat.flag_count() <= FLAG_DIRECT_LIMIT else "covering"
    if method == "direct":
        rows = lat.flag_rows()
        degree_ok, edges = _flag_pairings(rows)
        if not degree_ok:
            return FlagReport(len(rows), len(lat.chains()), False, False, method)
        graph = sp.coo_matrix(
            (
                np.ones(len(edges), dtype=np.int8),
                (edges[:, 0], edges[:, 1]),
            ),
            shape=(len(rows), len(rows)),
        )
        ncomp, _ = connected_components(graph, directed=False)
        return FlagReport(len(rows), len(lat.chains()), True, ncomp == 1, method)
    if method == "covering":
        return _flag_report_covering(lat)
    raise ValueError("method must be auto, direct or covering")


def _flag_pairings(rows: np.ndarray):
    """Per-rank partner edges; degree_ok means every group has size 2."""
    count, n = rows.shape
    all_edges = []
    for k in range(n):
        cols = [rows[:, j] for j in range(n) if j != k]
        if cols:
            order = np.lexsort(tuple(cols[::-1]))
            key = rows[order][:, [j for j in range(n) if j != k]]
            diff = np.any(key[1:] != key[:-1], axis=1)
            starts = np.flatnonzero(np.concatenate(([True], diff)))
        else:
            order = np.arange(count)
            starts = np.array([0])
        sizes = np.diff(np.append(starts, count))
        if not np.all(sizes == 2):
            return False, None
        all_edges.append(np.stack([order[starts], order[starts + 1]], axis=1))
    return True, np.vstack(all_edges) if all_edges else np.empty((0, 2), np.int64)


def flag_partners(lat: FaceLattice) -> np.ndarray:
    """(n, flag_count) partner table: the rank-k neighbor of each flag."""
    rows = lat.flag_rows()
    degree_ok, edges_by_rank = _flag_pairings_per_rank(rows)
    if not degree_ok:
        raise WythoffError("flag graph is not a matching per rank")
    count, n = rows.shape
    out = np.empty((n, count), dtype=np.int64)
    for k, edges in enumerate(edges_by_rank):
        out[k, edges[:, 0]] = edges[:, 1]
        out[k, edges[:, 1]] = edges[:, 0]
    return out


def _flag_pairings_per_rank(rows):
    count, n = rows.shape
    per_rank = []
    for k in range(n):
        cols = [rows[:, j] for j in range(n) if j != k]
        if cols:
            order = np.lexsort(tuple(cols[::-1]))
            key = rows[order][:, [j for j in range(n) if j != k]]
            diff = np.any(key[1:] != key[:-1], axis=1)
            starts = np.flatnonzero(np.concatenate(([True], diff)))
        else:
            order = np.arange(count)
            starts = np.array([0])
        sizes = np.diff(np.append(starts, count))
        if not np.all(sizes == 2):
            return False, None
        per_rank.append(np.stack([order[starts], order[starts + 1]], axis=1))
    return True, per_rank


def _left_mult_table(group: Group, element: int) -> np.ndarray:
    """Vectorized g -> element * g table via the element's generator word."""
    table = np.arange(group.order, dtype=np.int64)
    for gi in reversed(group.word(element)):
        table = group.lmult[gi][table]
    return table


def _flag_report_covering(lat: FaceLattice) -> FlagReport:
    group = lat.group
    n = lat.n
    chains = lat.chains()
    chain_idx = {c: i for i, c in enumerate(chains)}
    slots = lat.slots_by_rank
    stab_elements = {}

    def members(slot):
        key = slot.selection
        if key not in stab_elements:
            stab_elements[key] = group.subgroup(
                slot.decoration.stabilizer_nodes()
            ).elements
        return stab_elements[key]

    moves = {}
    degree_ok = True
    for ci, chain in enumerate(chains):
        chain_slots = [slots[k][si] for k, si in enumerate(chain)]
        for k in range(n):
            lower = chain_slots[k - 1] if k > 0 else None
            upper = chain_slots[k + 1] if k + 1 < n else None
            base_slot = chain_slots[k]
            base_face = (chain[k], int(base_slot.table.coset_id[0]))
            mids = []
            for si, s in enumerate(slots[k]):
                if lower is not None and not lower.selection < s.selection:
                    continue
                if upper is not None and not s.selection < upper.selection:
                    continue
                a = (
                    np.unique(s.table.coset_id[members(lower)])
                    if lower is not None
                    else None
                )
                b = (
                    np.unique(s.table.coset_id[members(upper)])
                    if upper is not None
                    else None
                )
                if a is None and b is None:
                    here = np.arange(s.count)
                elif a is None:
                    here = b
                elif b is None:
                    here = a
                else:
                    here = np.intersect1d(a, b)
                mids.extend((si, int(c)) for c in here)
            if len(mids) != 2 or base_face not in mids:
                degree_ok = False
                break
            other_slot_i, other_coset = next(m for m in mids if m != base_face)
            other = slots[k][other_slot_i]
            others = [
                frozenset(chain_slots[j].decoration.stabilizer_nodes())
                for j in range(n)
                if j != k
            ]
            inter = (
                frozenset.intersection(*others)
                if others
                else frozenset(range(lat.diagram.rank))
            )
            pk = group.subgroup(inter).elements
            hs = pk[other.table.coset_id[pk] == other_coset]
            if len(hs) != 1:
                raise WythoffError("flag move is not unique")
            new_chain = chain[:k] + (other_slot_i,) + chain[k + 1 :]
            moves[(ci, k)] = (int(hs[0]), chain_idx[new_chain])
        if not degree_ok:
            break
    if not degree_ok:
        return FlagReport(lat.flag_count(), len(chains), False, False, "covering")
    # BFS over the chain graph, collecting holonomy generators
    p = {0: 0}
    queue = [0]
    holonomy = set()
    while queue:
        ci = queue.pop()
        for k in range(n):
            h, cj = moves[(ci, k)]
            ph = group.compose(p[ci], h)
            if cj not in p:
                p[cj] = ph
                queue.append(cj)
            else:
                w = group.compose(ph, group.inverse(p[cj]))
                if w:
                    holonomy.add(w)
    if len(p) != len(chains):
        return FlagReport(lat.flag_count(), len(chains), True, False, "covering")
    tables = [_left_mult_table(group, w) for w in sorted(holonomy)]
    visited = np.zeros(group.order, dtype=bool)
    visited[0] = True
    frontier = np.array([0], dtype=np.int64)
    while frontier.size and not visited.all():
        cand = np.concatenate([t[frontier] for t in tables]) if tables else frontier[:0]
        cand = np.unique(cand[~visited[cand]]) if cand.size else cand
        visited[cand] = True
        frontier = cand
    connected = bool(visited.all())
    return FlagReport(lat.flag_count(), len(chains), True, connected, "covering")


# -- vertex figure ----------------------------------------------------------


@dataclass
class VertexFigure:
    face_ids: list          # per rank 1..n-1, sorted global ids
    covers: np.ndarray

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(len(f) for f in self.face_ids)


def vertex_figure(lat: FaceLattice) -> VertexFigure:
    """Faces through the base vertex: cosets meeting its stabilizer.

    The base vertex is the rank-0 face whose coset contains the identity;
    a face contains it exactly when its coset meets the vertex stabilizer
    (the parabolic on the crossed nodes), so one coset per decoration per
    stabilizer orbit shows up, e.g. 3 edges + 3 squares for the cube.
    """
    stab = lat.slots_by_rank[0][0].table.subgroup.elements
    ids = []
    keep = set()
    for k in range(1, lat.n):
        level = []
        for s in lat.slots_by_rank[k]:
            level.extend(
                int(c) + s.offset for c in np.unique(s.table.coset_id[stab])
            )
        level.sort()
        ids.append(level)
        keep.update(level)
    cov = lat.covers
    mask = np.array([(a in keep and b in keep) for a, b in cov], dtype=bool)
    return VertexFigure(ids, cov[mask])


# -- generator action / lattice isomorphism ---------------------------------


def generator_face_actions(lat: FaceLattice) -> np.ndarray:
    """(n_gens, face_total) table: face id -> image face id under r_i."""
    g = lat.group
    out = np.empty((g.n_gens, lat.face_total), dtype=np.int32)
    for sl in lat.slots_by_rank:
        for s in sl:
            for gi in range(g.n_gens):
                new = s.table.coset_id[g.lmult[gi][s.table.reps]]
                out[gi, s.offset : s.offset + s.count] = new + s.offset
    return out


def _walk_code(partners: np.ndarray, start: int) -> np.ndarray:
    """Canonical BFS renumbering of the flag graph from one start flag.

    The per-rank matchings make the walk deterministic, so two polytopes
    are isomorphic exactly when some start yields identical codes.
    """
    n, count = partners.shape
    ids = np.full(count, -1, dtype=np.int64)
    order = np.empty(count, dtype=np.int64)
    ids[start] = 0
    order[0] = start
    filled = 1
    code = np.empty((count, n), dtype=np.int64)
    qi = 0
    while qi < filled:
        f = order[qi]
        for c in range(n):
            g = partners[c, f]
            if ids[g] < 0:
                ids[g] = filled
                order[filled] = g
                filled += 1
            code[qi, c] = ids[g]
        qi += 1
    if filled != count:
        raise WythoffError("flag graph is disconnected")
    return code


def lattices_isomorphic(a: FaceLattice, b: FaceLattice) -> bool:
    """Rank-preserving lattice isomorphism test via flag-walk codes."""
    if a.f_vector != b.f_vector or a.flag_count() != b.flag_count():
        return False
    pa = flag_partners(a)
    pb = flag_partners(b)
    ref = _walk_code(pa, 0)
    for start in range(pb.shape[1]):
        if np.array_equal(ref, _walk_code(pb, start)):
            return True
    return False


def lattice_document(lat: FaceLattice) -> dict:
    """JSON-ready dict: faces (rank, selection, rep) plus cover pairs."""
    d = lat.diagram
    return {
        "rank": lat.n,
        "f_vector": list(lat.f_vector),
        "faces": [
            {
                "id": f.id,
                "rank": f.rank,
                "selection": [d.node_ids[v] for v in f.selection],
                "coset_rep": f.rep,
            }
            for f in lat.faces()
        ],
        "covers": [[int(a), int(b)] for a, b in lat.covers],
        "top": lat.top_id,
    }
