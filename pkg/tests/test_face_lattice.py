import numpy as np
import pytest

from wythoff.decoration import start_decoration
from wythoff.diagram import disjoint_union, family_diagram, parse
from wythoff.errors import Degenerate
from wythoff.face_lattice import (
    build_lattice,
    diamond_report,
    euler_ok,
    f_vector_enumerated,
    f_vector_formula,
    flag_partners,
    flag_report,
    generator_face_actions,
    lattice_document,
    lattices_isomorphic,
    vertex_figure,
)

KNOWN_F_VECTORS = {
    "x": (2,),
    "x5o": (5, 5),
    "x3x": (6, 6),
    "x3o3o": (4, 6, 4),
    "x4o3o": (8, 12, 6),
    "o4o3x": (6, 12, 8),
    "o3x3o": (6, 12, 8),
    "x5o3o": (20, 30, 12),
    "o5o3x": (12, 30, 20),
    "o3x4x": (24, 36, 14),
    "x3x3o": (12, 18, 8),
    "x3o3o3o": (5, 10, 10, 5),
    "x3o4o3o": (24, 96, 96, 24),
    "o5o3o3x": (120, 720, 1200, 600),
    "x5o3o3o": (600, 1200, 720, 120),
}


@pytest.mark.parametrize("text,fv", KNOWN_F_VECTORS.items(), ids=KNOWN_F_VECTORS)
def test_known_f_vectors(shared, text, fv):
    lat = shared.lattice(parse(text))
    assert lat.f_vector == fv
    assert f_vector_enumerated(lat) == fv
    assert f_vector_formula(parse(text)) == fv


def test_box_product_f_vectors(shared):
    square = disjoint_union(parse("x"), parse("x"))
    assert shared.lattice(square).f_vector == (4, 4)
    prism = disjoint_union(parse("x4o"), parse("x"))
    assert shared.lattice(prism).f_vector == (8, 12, 6)
    hexprism = disjoint_union(parse("x3x"), parse("x"))
    assert shared.lattice(hexprism).f_vector == (12, 18, 8)


def test_formula_without_enumeration_for_huge_groups():
    e8 = family_diagram("E", 8, ringed=(6,))
    assert f_vector_formula(e8)[0] == 240  # orbit of the end node under E8/E7


def test_degenerate_rejected():
    with pytest.raises(Degenerate):
        build_lattice(parse("o3o"))


def test_euler_and_diamond_across_samples(shared):
    for text in KNOWN_F_VECTORS:
        lat = shared.lattice(parse(text))
        assert euler_ok(lat), text
        rep = diamond_report(lat)
        assert rep.ok and rep.pairs_checked > 0, text


def test_flag_methods_agree(shared):
    for d in [
        parse("x4o3o"),
        parse("o3x4x"),
        parse("x3x3x"),
        family_diagram("D", 4, ringed=(1,)),
        parse("x5x3x"),
        parse("x4x3x3x"),
        disjoint_union(parse("x4o"), parse("x")),
        parse("x"),
        parse("x3x"),
    ]:
        lat = shared.lattice(d)
        direct = flag_report(lat, "direct")
        covering = flag_report(lat, "covering")
        assert direct.ok and covering.ok, d
        assert direct.count == covering.count == lat.flag_count()


def test_flag_count_is_chains_times_order(shared):
    lat = shared.lattice(parse("o3x4x"))
    assert lat.flag_count() == 3 * 48
    assert len(lat.flag_rows()) == 144
    # every flag row is distinct
    assert len({r.tobytes() for r in lat.flag_rows()}) == 144


def test_flag_partners_form_matchings(shared):
    lat = shared.lattice(parse("o3x4x"))
    partners = flag_partners(lat)
    count = lat.flag_count()
    for k in range(lat.n):
        p = partners[k]
        assert (p != np.arange(count)).all()
        assert np.array_equal(p[p], np.arange(count))


def test_generator_actions_preserve_rank(shared):
    lat = shared.lattice(parse("x4o3o"))
    acts = generator_face_actions(lat)
    ranks = np.empty(lat.face_total, dtype=int)
    for sl in lat.slots_by_rank:
        for s in sl:
            ranks[s.offset : s.offset + s.count] = s.rank
    for gi in range(acts.shape[0]):
        assert np.array_equal(np.sort(acts[gi]), np.arange(lat.face_total))
        assert np.array_equal(ranks[acts[gi]], ranks)


def test_vertex_figure_counts(shared):
    cube = shared.lattice(parse("x4o3o"))
    vf = vertex_figure(cube)
    assert vf.counts == (3, 3)
    assert len(vf.covers) == 6
    cell24 = shared.lattice(family_diagram("D", 4, ringed=(1,)))
    assert vertex_figure(cell24).counts == (8, 12, 6)  # cubical vertex figure
    ico = shared.lattice(parse("o5o3x"))
    assert vertex_figure(ico).counts == (5, 5)


def test_lattice_isomorphism_positive_and_negative(shared):
    cube = shared.lattice(parse("x4o3o"))
    box3 = shared.lattice(
        disjoint_union(parse("x"), parse("x"), parse("x"))
    )
    prism = shared.lattice(disjoint_union(parse("x4o"), parse("x")))
    octa = shared.lattice(parse("o4o3x"))
    assert lattices_isomorphic(cube, box3)
    assert lattices_isomorphic(cube, prism)
    assert not lattices_isomorphic(cube, octa)
    assert not lattices_isomorphic(cube, shared.lattice(parse("o3x4x")))


def test_twenty_four_cell_three_ways(shared):
    a = shared.lattice(family_diagram("D", 4, ringed=(1,)))
    b = shared.lattice(parse("o4o3x3o"))
    c = shared.lattice(parse("x3o4o3o"))
    assert a.f_vector == b.f_vector == c.f_vector == (24, 96, 96, 24)
    assert lattices_isomorphic(a, b)
    assert lattices_isomorphic(b, c)


def test_lattice_document_shape(shared):
    lat = shared.lattice(parse("x4o3o"))
    doc = lattice_document(lat)
    assert doc["rank"] == 3
    assert doc["f_vector"] == [8, 12, 6]
    assert len(doc["faces"]) == 8 + 12 + 6 + 1
    ids = [f["id"] for f in doc["faces"]]
    assert ids == sorted(ids) and ids[0] == 0
    assert doc["top"] == max(ids)
    by_id = {f["id"]: f for f in doc["faces"]}
    for lo, hi in doc["covers"]:
        assert by_id[hi]["rank"] == by_id[lo]["rank"] + 1
        assert set(by_id[lo]["selection"]) < set(by_id[hi]["selection"])
    # vertex-edge, edge-square, square-top incidences
    assert len(doc["covers"]) == 24 + 24 + 6


def test_face_lookup_round_trip(shared):
    lat = shared.lattice(parse("o3x4x"))
    for f in lat.faces():
        again = lat.face(f.id)
        assert again == f


def test_chains_match_selection_orderings(shared):
    from wythoff.decoration import selection_orderings

    lat = shared.lattice(parse("o3x4x"))
    assert len(lat.chains()) == len(selection_orderings(start_decoration(lat.diagram)))
