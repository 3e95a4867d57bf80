"""Regular polytopes among Wythoff constructions.

Two independent notions are implemented.  ruled_verdict applies a closed
position table on the decorated diagram (which families and ring positions
yield regular polytopes).  is_flag_transitive checks transitivity of the
generating reflection group on flags by explicit orbit closure.  They can
disagree only when a polytope is regular but its full symmetry group is
strictly larger than the generating group; oracle_gap_reason enumerates
exactly those constructions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from math import comb

from .decoration import (
    decoration_from_selection,
    face_restriction,
    require_nondegenerate,
    start_decoration,
    valid_selection_sets,
)
from .diagram import (
    RING,
    DecoratedDiagram,
    canonical_certificate,
    classify_components,
    disjoint_union,
    family_diagram,
    group_order,
)
from .errors import UnknownName
from .face_lattice import FaceLattice, build_lattice, f_vector_formula, generator_face_actions

_POLYGON_NAMES = {
    3: "triangle",
    4: "square",
    5: "pentagon",
    6: "hexagon",
    7: "heptagon",
    8: "octagon",
}

_SPECIAL_F_VECTORS = {
    "icosahedron": (12, 30, 20),
    "dodecahedron": (20, 30, 12),
    "24-cell": (24, 96, 96, 24),
    "600-cell": (120, 720, 1200, 600),
    "120-cell": (600, 1200, 720, 120),
}

_ALIASES = {
    "tetrahedron": "3-simplex",
    "cube": "3-hypercube",
    "octahedron": "3-hyperoctahedron",
    "5-cell": "4-simplex",
    "tesseract": "4-hypercube",
    "16-cell": "4-hyperoctahedron",
}
_ALIASES.update({f"{k}-gon": v for k, v in _POLYGON_NAMES.items()})


def polygon_name(k: int) -> str:
    return _POLYGON_NAMES.get(k, f"{k}-gon")


def canonical_name(name: str) -> str:
    name = name.strip().lower()
    return _ALIASES.get(name, name)


def known_f_vector(name: str) -> tuple[int, ...]:
    """Face counts of a regular polytope from closed formulas."""
    name = canonical_name(name)
    if name in _SPECIAL_F_VECTORS:
        return _SPECIAL_F_VECTORS[name]
    if name == "segment":
        return (2,)
    for k, poly in _POLYGON_NAMES.items():
        if name == poly:
            return (k, k)
    m = re.fullmatch(r"(\d+)-(simplex|hypercube|hyperoctahedron|gon)", name)
    if not m:
        raise UnknownName(name)
    n, kind = int(m.group(1)), m.group(2)
    if kind == "gon":
        return (n, n)
    if kind == "simplex":
        return tuple(comb(n + 1, k + 1) for k in range(n))
    if kind == "hypercube":
        return tuple(2 ** (n - k) * comb(n, k) for k in range(n))
    return tuple(2 ** (k + 1) * comb(n, k + 1) for k in range(n))


# -- diagram position helpers -------------------------------------------------


def _path_order(d: DecoratedDiagram, comp) -> list:
    """Nodes of a path component from one end to the other."""
    if len(comp) == 1:
        return list(comp)
    ends = [v for v in comp if len(d.neighbors(v)) == 1]
    order = [min(ends)]
    prev = None
    while len(order) < len(comp):
        nxt = [w for w in d.neighbors(order[-1]) if w != prev]
        prev = order[-1]
        order.append(nxt[0])
    return order


def _oriented_path(d: DecoratedDiagram, comp, lead_label: int) -> list:
    """Path order starting at the end whose first edge carries lead_label."""
    order = _path_order(d, comp)
    if d.label(order[0], order[1]) != lead_label:
        order.reverse()
    return order


def _is_box_factor(d: DecoratedDiagram, comp) -> bool:
    """Segment, or a 4-3-...-3 chain ringed exactly at the 4 end."""
    rings = [v for v in comp if d.marks[v] == RING]
    if len(rings) != 1:
        return False
    if len(comp) == 1:
        return True
    if any(len(d.neighbors(v)) > 2 for v in comp):
        return False
    order = _path_order(d, comp)
    labels = [d.label(order[i], order[i + 1]) for i in range(len(order) - 1)]
    if len(comp) == 2:
        return labels == [4]
    if labels[0] != 4:
        order.reverse()
        labels.reverse()
    return labels[0] == 4 and all(m == 3 for m in labels[1:]) and rings[0] == order[0]


@dataclass(frozen=True)
class RuledVerdict:
    regular: bool
    name: str | None
    reason: str
    witness: tuple | None = None


def ruled_verdict(d: DecoratedDiagram) -> RuledVerdict:
    """Position-table classification of the construction.

    Regular cases: any non-degenerate 2-node diagram (polygons); products
    whose every factor is a box factor (hypercubes); and the single-ring
    positions on A, B, D, H, F diagrams listed in _connected_single_ring.
    Everything else is not regular; when two distinct face shapes exist at
    some rank the verdict carries one such witness.
    """
    require_nondegenerate(d)
    tags = classify_components(d)
    n = d.rank
    if len(tags) > 1:
        if all(_is_box_factor(d, t.nodes) for t in tags):
            return RuledVerdict(
                True,
                _dim_adjusted_name(n, "hypercube"),
                "every factor is a segment or an end-ringed 4-chain",
            )
        return RuledVerdict(
            False,
            None,
            "product with a factor that is not a box",
            regularity_witness(d),
        )
    tag = tags[0]
    rings = sorted(d.ringed_nodes())
    if n == 1:
        return RuledVerdict(True, "segment", "one mirror, one ringed node")
    if n == 2:
        k = d.label(0, 1)
        gon = k if len(rings) == 1 else 2 * k
        return RuledVerdict(
            True, polygon_name(gon), f"one ring gives a {k}-gon, two give a {2 * k}-gon"
        )
    if len(rings) != 1:
        return RuledVerdict(
            False,
            None,
            "more than one ring on a connected diagram of dimension >= 3",
            regularity_witness(d),
        )
    name = _connected_single_ring(d, tag, rings[0])
    if name is not None:
        return RuledVerdict(True, name, f"ring position on {tag} listed as {name}")
    return RuledVerdict(
        False,
        None,
        f"ring position on {tag} is not a regular one",
        regularity_witness(d),
    )


def _dim_adjusted_name(n: int, kind: str) -> str:
    if n == 1:
        return "segment"
    if n == 2:
        return polygon_name(3) if kind == "simplex" else polygon_name(4)
    return f"{n}-{kind}"


def _connected_single_ring(d, tag, v) -> str | None:
    n = tag.rank
    comp = list(range(n))
    if tag.family == "A":
        order = _path_order(d, comp)
        if v in (order[0], order[-1]):
            return f"{n}-simplex"
        if n == 3 and v == order[1]:
            return "3-hyperoctahedron"
        return None
    if tag.family == "B":
        order = _oriented_path(d, comp, 4)
        if v == order[0]:
            return f"{n}-hypercube"
        if v == order[-1]:
            return f"{n}-hyperoctahedron"
        if n == 4 and v == order[2]:
            return "24-cell"
        return None
    if tag.family == "H":
        order = _oriented_path(d, comp, 5)
        if v == order[-1]:
            return "icosahedron" if n == 3 else "600-cell"
        if v == order[0]:
            return "dodecahedron" if n == 3 else "120-cell"
        return None
    if tag.family == "F":
        if len(d.neighbors(v)) == 1:
            return "24-cell"
        return None
    if tag.family == "D":
        center = next(w for w in comp if len(d.neighbors(w)) == 3)
        leaves = [w for w in comp if len(d.neighbors(w)) == 1]
        if n == 4:
            if v == center:
                return "24-cell"
            if v in leaves:
                return "4-hyperoctahedron"
            return None
        twins = [w for w in leaves if center in d.neighbors(w)]
        long_end = next(w for w in leaves if w not in twins)
        if v == long_end:
            return f"{n}-hyperoctahedron"
        return None
    return None


# -- face-shape signatures and non-regularity witnesses -----------------------

_SIG_CACHE: dict = {}


def shape_signature(d: DecoratedDiagram):
    """Recursive combinatorial fingerprint of the polytope's shape.

    Built from closed-formula f-vectors and the multiset of facet
    signatures, so shapes that merely come from different diagrams (the
    octahedron from A3 or B3, say) get equal signatures without any group
    enumeration.
    """
    key = canonical_certificate(d)
    if key in _SIG_CACHE:
        return _SIG_CACHE[key]
    n = d.rank
    if n == 1:
        sig = ("segment",)
    elif n == 2:
        sig = ("polygon", f_vector_formula(d)[0])
    else:
        start = start_decoration(d)
        total = group_order(d)
        facets = {}
        for sel in valid_selection_sets(start, n - 1):
            stab = decoration_from_selection(start, sel).stabilizer_nodes()
            count = total // group_order(d.induced(stab))
            fsig = shape_signature(face_restriction(start, sel))
            facets[fsig] = facets.get(fsig, 0) + count
        sig = (n, f_vector_formula(d), tuple(sorted(facets.items())))
    _SIG_CACHE[key] = sig
    return sig


def regularity_witness(d: DecoratedDiagram):
    """Two same-rank faces with different shapes, or None.

    Returns (rank, selection_a, selection_b) naming the first rank at which
    two face types differ.
    """
    start = start_decoration(d)
    for k in range(2, d.rank):
        seen = {}
        for sel in sorted(valid_selection_sets(start, k), key=sorted):
            sig = shape_signature(face_restriction(start, sel))
            if sig in seen:
                continue
            for other, osig in seen.items():
                if osig != sig:
                    return (k, tuple(sorted(other)), tuple(sorted(sel)))
            seen[sel] = sig
    return None


# -- flag-transitivity oracle --------------------------------------------------


def is_flag_transitive(src, budget: int | None = None) -> bool:
    """Does the generating group act transitively on flags?

    An orbit has at most group-order flags, so more flags than elements is
    an immediate no.  Otherwise the orbit of one flag is closed under the
    generator action on faces and compared against the full flag set.
    """
    lat = src if isinstance(src, FaceLattice) else build_lattice(src, budget=budget)
    rows = lat.flag_rows()
    if len(rows) > lat.group.order:
        return False
    acts = generator_face_actions(lat)
    index = {r.tobytes(): i for i, r in enumerate(rows)}
    visited = [False] * len(rows)
    visited[0] = True
    frontier = [0]
    while frontier:
        batch = rows[frontier]
        nxt = []
        for gi in range(acts.shape[0]):
            for img in acts[gi][batch]:
                j = index[img.tobytes()]
                if not visited[j]:
                    visited[j] = True
                    nxt.append(j)
        frontier = nxt
    return all(visited)


def oracle_gap_reason(d: DecoratedDiagram) -> str | None:
    """Why a regular construction can fail generator flag-transitivity.

    These are exactly the catalog entries whose full symmetry group is
    larger than the generating group; geometric regularity still holds and
    the test suite verifies it by ridge reflections.
    """
    verdict = ruled_verdict(d)
    if not verdict.regular:
        return None
    tags = classify_components(d)
    if len(tags) > 1:
        return "box product: generating group is a proper subgroup of the hypercube group"
    tag = tags[0]
    rings = sorted(d.ringed_nodes())
    if d.rank == 2 and len(rings) == 2:
        return "doubled polygon: both nodes ringed halves the symmetry"
    if len(rings) != 1:
        return None
    v = rings[0]
    if tag.family == "A" and tag.rank == 3:
        order = _path_order(d, list(range(3)))
        if v == order[1]:
            return "octahedron from the tetrahedral group (index 2)"
    if tag.family == "D" and tag.rank == 4:
        center = next(w for w in range(4) if len(d.neighbors(w)) == 3)
        if v == center:
            return "24-cell from the D4 group (index 6)"
        return "16-cell from the demihypercube group (index 2)"
    if tag.family == "B" and tag.rank == 4:
        order = _oriented_path(d, list(range(4)), 4)
        if v == order[2]:
            return "24-cell from the hyperoctahedral group (index 3)"
    return None


# -- catalog -------------------------------------------------------------------


def _box_partitions(n: int):
    """Multisets of factor sizes (>= 1) splitting n, excluding the single block."""
    out = []

    def rec(remaining, max_part, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for p in range(min(remaining, max_part), 0, -1):
            rec(remaining - p, p, acc + [p])

    rec(n, n, [])
    return [p for p in out if len(p) > 1]


def _box_diagram(parts) -> DecoratedDiagram:
    factors = []
    for p in parts:
        if p == 1:
            factors.append(family_diagram("A", 1, ringed=(0,)))
        elif p == 2:
            factors.append(family_diagram("I2", 2, k=4, ringed=(0,)))
        else:
            factors.append(family_diagram("B", p, ringed=(0,)))
    return disjoint_union(*factors)


def regular_catalog(n: int, kmax: int = 12) -> dict[str, list[DecoratedDiagram]]:
    """All regular polytopes of dimension n with their constructions.

    Polygon entries run through edge label kmax.  Every construction the
    position table accepts appears, deduplicated up to decorated-diagram
    isomorphism; hypercubes include all box products.
    """
    if n < 1:
        raise UnknownName(f"no polytopes of dimension {n}")
    catalog: dict[str, list[DecoratedDiagram]] = {}

    def add(name, diagram):
        entry = catalog.setdefault(name, [])
        cert = canonical_certificate(diagram)
        if all(canonical_certificate(e) != cert for e in entry):
            entry.append(diagram)

    if n == 1:
        add("segment", family_diagram("A", 1, ringed=(0,)))
        return catalog
    if n == 2:
        for k in range(3, kmax + 1):
            add(polygon_name(k), family_diagram("I2", 2, k=k, ringed=(0,)))
            if k % 2 == 0 and k // 2 >= 3:
                add(polygon_name(k), family_diagram("I2", 2, k=k // 2, ringed=(0, 1)))
        add(polygon_name(4), _box_diagram((1, 1)))
        return catalog
    add(f"{n}-simplex", family_diagram("A", n, ringed=(0,)))
    add(f"{n}-hypercube", family_diagram("B", n, ringed=(0,)))
    for parts in _box_partitions(n):
        add(f"{n}-hypercube", _box_diagram(parts))
    add(f"{n}-hyperoctahedron", family_diagram("B", n, ringed=(n - 1,)))
    if n == 3:
        add("3-hyperoctahedron", family_diagram("A", 3, ringed=(1,)))
        add("icosahedron", family_diagram("H", 3, ringed=(2,)))
        add("dodecahedron", family_diagram("H", 3, ringed=(0,)))
    if n == 4:
        add("4-hyperoctahedron", family_diagram("D", 4, ringed=(0,)))
        add("24-cell", family_diagram("F", 4, ringed=(0,)))
        add("24-cell", family_diagram("B", 4, ringed=(2,)))
        add("24-cell", family_diagram("D", 4, ringed=(1,)))
        add("600-cell", family_diagram("H", 4, ringed=(3,)))
        add("120-cell", family_diagram("H", 4, ringed=(0,)))
    if n >= 5:
        add(f"{n}-hyperoctahedron", family_diagram("D", n, ringed=(0,)))
    return catalog


def constructions_of(name: str, kmax: int = 12) -> list[DecoratedDiagram]:
    """Constructions of a named regular polytope (aliases accepted)."""
    cname = canonical_name(name)
    fv = known_f_vector(cname)  # validates the name
    if cname == "segment":
        return regular_catalog(1)[cname]
    if len(fv) == 2:
        k = fv[0]
        catalog = regular_catalog(2, kmax=max(kmax, k))
        return catalog[polygon_name(k)]
    n = len(fv)
    catalog = regular_catalog(n, kmax=kmax)
    if cname not in catalog:
        raise UnknownName(name)
    return catalog[cname]
