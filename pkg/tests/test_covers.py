import itertools

import pytest
from hypothesis import given, settings, strategies as st

from corrhom.correspondence import CombinatorialMap, is_enlargement
from corrhom.covers import (
    BoxCover,
    NotInscribed,
    acyclic_enlargement,
    box_cells,
    box_intersection,
    is_acyclic_valued,
    is_inscribed,
    sliding_box_cover,
)
from corrhom.cubical import GridGeometry

G1 = GridGeometry(((1, 4),), (3,))
WRONG = {(0,): [(0,), (2,)], (1,): [(0,), (1,), (2,)], (2,): [(2,)]}


def wrongmap():
    return CombinatorialMap.build(G1, G1, WRONG, [(0,), (2,)], [(0,), (1,), (2,)], [(0,), (2,)])


def test_box_helpers():
    assert box_cells(((0, 1), (2, 2))) == [(0, 2), (1, 2)]
    assert box_intersection(((0, 3),), ((2, 5),)) == ((2, 3),)
    assert box_intersection(((0, 1),), ((2, 5),)) is None


def test_sliding_cover_clips_at_edges():
    c = sliding_box_cover(G1, 3)
    assert c.boxes == [((0, 0),), ((0, 1),), ((0, 2),), ((1, 2),), ((2, 2),)]
    g = GridGeometry(((0, 4), (0, 4)), (4, 4))
    assert len(sliding_box_cover(g, 2).boxes) == 25


def test_cover_must_cover():
    with pytest.raises(ValueError):
        BoxCover(G1, [((0, 1),)])
    BoxCover(G1, [((0, 1),)], support=[(0,), (1,)])
    with pytest.raises(ValueError):
        BoxCover(G1, [((0, 3),)])


def test_support_filters_boxes():
    g = GridGeometry(((0, 10),), (10,))
    c = sliding_box_cover(g, 2, support=[(0,)])
    assert c.boxes == [((0, 0),), ((0, 1),)]


def test_acyclicity():
    assert not is_acyclic_valued(wrongmap())
    assert is_acyclic_valued(wrongmap()).failures == [(0,)]
    # adjacent cells with disjoint values: fine cellwise, broken over the shared vertex
    m = CombinatorialMap.build(G1, G1, {(0,): [(0,)], (1,): [(2,)]})
    assert is_acyclic_valued(m)
    rep = is_acyclic_valued(m, pointwise=True)
    assert not rep and rep.failures == [(2,)]


def test_wrongmap_enlargement():
    m = wrongmap()
    assert not is_inscribed(m, sliding_box_cover(G1, 1))
    with pytest.raises(NotInscribed):
        acyclic_enlargement(m, sliding_box_cover(G1, 1))
    cover = sliding_box_cover(G1, 3)
    assert is_inscribed(m, cover)
    g = acyclic_enlargement(m, cover)
    assert g[(0,)] == g[(1,)] == {(0,), (1,), (2,)}
    assert g[(2,)] == {(2,)}
    assert is_enlargement(m, g)
    assert is_acyclic_valued(g, pointwise=True)
    # F(A) spills out of B once {0, 2} is filled in
    assert not g.respects_pairs and g.pair_violations() == [(0,)]


def _brute_enlarge(value, boxes):
    sets = [set(box_cells(b)) for b in boxes if set(value) <= set(box_cells(b))]
    return set.intersection(*sets)


@settings(max_examples=100)
@given(st.data())
def test_enlargement_matches_brute_force(data):
    n = 5
    g = GridGeometry(((0, n), (0, n)), (n, n))
    cells = list(itertools.product(range(n), repeat=2))
    w = data.draw(st.integers(1, 4))
    cover = sliding_box_cover(g, w)
    dom = data.draw(st.lists(st.sampled_from(cells), min_size=1, max_size=6, unique=True))
    vals = {}
    for x in dom:
        lo = data.draw(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)))
        vals[x] = {(min(lo[0] + i, n - 1), min(lo[1] + j, n - 1))
                   for i in range(data.draw(st.integers(1, w))) for j in range(data.draw(st.integers(1, w)))}
    m = CombinatorialMap.build(g, g, vals, codomain=cells)
    assert is_inscribed(m, cover)
    e = acyclic_enlargement(m, cover)
    for x in dom:
        assert e[x] == _brute_enlarge(vals[x], cover.boxes)
    assert is_enlargement(m, e)
    assert is_acyclic_valued(e)
