import pytest
from hypothesis import given, settings, strategies as st

from corrhom.cubical import CubicalComplex, CubicalPair, GridGeometry, relative_boundary
from corrhom.homology import ChainMap, NotAChainMap, homology, induced_homomorphism
from corrhom.zmodule import IntegerMatrix, smith_normal_form

RING = [(i, j) for i in range(3) for j in range(3) if (i, j) != (1, 1)]


def dense_homology(pair):
    """(betti, torsion) per degree from dense SNF of the relative boundaries, no reduction."""
    d = pair.dimension
    n = [len(c) for c in pair.relative_cells]
    ranks, tors = [0] * (d + 2), [[] for _ in range(d + 2)]
    for k in range(1, d + 1):
        if n[k] and n[k - 1]:
            s = smith_normal_form(relative_boundary(pair, k))
            ranks[k] = s.rank
            tors[k - 1] = [x for x in s.invariant_factors if x > 1]
    return [(n[k] - ranks[k] - ranks[k + 1], tors[k]) for k in range(d + 1)]


def test_point():
    pair = CubicalPair(CubicalComplex(2, [(0, 0)]))
    h = homology(pair)
    assert h.describe() == ["Z", "0", "0"]


def test_ring():
    g = GridGeometry(((0, 3), (0, 3)), (3, 3))
    pair = CubicalPair.from_top_cells(g, RING)
    assert homology(pair).describe() == ["Z", "Z", "0"]
    assert [b for b, _ in dense_homology(pair)] == [1, 1, 0]


def test_wrongmap_pair():
    g = GridGeometry(((1, 4),), (3,))
    h = homology(CubicalPair.from_top_cells(g, [(0,), (1,), (2,)], [(0,), (2,)]))
    assert h.describe() == ["0", "Z"]


@pytest.mark.parametrize("d", [1, 2, 3])
def test_full_cube_is_acyclic(d):
    g = GridGeometry(((0, 1),) * d, (1,) * d)
    assert homology(CubicalPair.from_top_cells(g, [(0,) * d])).is_acyclic()


pairs = st.integers(1, 3).flatmap(
    lambda d: st.sets(st.tuples(*([st.integers(0, 3 if d < 3 else 2)] * d)), min_size=1, max_size=14)
    .flatmap(lambda cells: st.tuples(st.just(d), st.just(sorted(cells)),
                                     st.sets(st.sampled_from(sorted(cells))))))


def _pair(d, cells, sub):
    n = 4 if d < 3 else 3
    g = GridGeometry(((0, n),) * d, (n,) * d)
    return CubicalPair.from_top_cells(g, cells, sub)


@settings(max_examples=200)
@given(pairs)
def test_euler_characteristic(p):
    pair = _pair(*p)
    h = homology(pair)
    chi_cells = sum((-1) ** k * len(c) for k, c in enumerate(pair.relative_cells))
    assert h.euler_characteristic() == chi_cells


@settings(max_examples=100)
@given(pairs)
def test_matches_dense_oracle(p):
    pair = _pair(*p)
    h = homology(pair)
    assert [(g.betti, g.torsion) for g in h.groups] == dense_homology(pair)


@settings(max_examples=100)
@given(pairs)
def test_generators_are_relative_cycles(p):
    pair = _pair(*p)
    h = homology(pair)
    for k, g in enumerate(h.groups):
        for j, chain in enumerate(g.generators):
            assert h.is_cycle(chain)
            e = [0] * g.rank
            e[j] = 1
            assert h.coordinates(k, chain) == g.group.canonical(e)


def test_identity_induces_identity():
    g = GridGeometry(((0, 3), (0, 3)), (3, 3))
    pair = CubicalPair.from_top_cells(g, RING)
    h = homology(pair)
    f = induced_homomorphism(ChainMap.identity(pair), h, h)
    for k in range(3):
        assert f[k] == IntegerMatrix.identity(h[k].rank)


def test_not_a_chain_map():
    g = GridGeometry(((0, 2),), (2,))
    pair = CubicalPair.from_top_cells(g, [(0,), (1,)])
    bad = ChainMap(pair, pair, lambda key: {key: 1} if sum(c & 1 for c in key) else {})
    with pytest.raises(NotAChainMap):
        induced_homomorphism(bad, homology(pair), homology(pair))


def _perimeter(n):
    """Vertices of the boundary of [0,n]^2 in counterclockwise order."""
    pts = [(i, 0) for i in range(n)] + [(n, j) for j in range(n)]
    pts += [(n - i, n) for i in range(n)] + [(0, n - j) for j in range(n)]
    return pts


def _edge(a, b):
    """Key of the unit edge between lattice points and the sign of the path a -> b."""
    key = tuple(2 * min(x, y) + (x != y) for x, y in zip(a, b))
    sign = 1 if a < b else -1
    return key, sign


def test_double_wrap_multiplies_by_two():
    src_pts = _perimeter(6)  # 24 edges
    tgt_pts = _perimeter(3)  # 12 edges, the outer loop of the ring
    src = CubicalPair(CubicalComplex.from_cells(2, [_edge(a, src_pts[(i + 1) % 24])[0]
                                                   for i, a in enumerate(src_pts)]))
    g = GridGeometry(((0, 3), (0, 3)), (3, 3))
    tgt = CubicalPair.from_top_cells(g, RING)
    table = {}
    for i, a in enumerate(src_pts):
        table[tuple(2 * c for c in a)] = {tuple(2 * c for c in tgt_pts[i % 12]): 1}
        ks, ss = _edge(a, src_pts[(i + 1) % 24])
        kt, st_ = _edge(tgt_pts[i % 12], tgt_pts[(i + 1) % 12])
        table[ks] = {kt: ss * st_}
    f = ChainMap(src, tgt, lambda key: table[key])
    hs, ht = homology(src), homology(tgt)
    m = induced_homomorphism(f, hs, ht)[1]
    # oracle: coordinates of the counterclockwise loops, solved independently
    loop_s, loop_t = {}, {}
    for i, a in enumerate(src_pts):
        k, s = _edge(a, src_pts[(i + 1) % 24])
        loop_s[k] = s
    for i, a in enumerate(tgt_pts):
        k, s = _edge(a, tgt_pts[(i + 1) % 12])
        loop_t[k] = s
    cs = hs.coordinates(1, loop_s)[0]
    ct = ht.coordinates(1, loop_t)[0]
    assert abs(cs) == 1 and abs(ct) == 1
    assert m == IntegerMatrix([[2 * cs * ct]])


def test_composition_of_inclusions():
    g = GridGeometry(((0, 3), (0, 3)), (3, 3))
    small = CubicalPair.from_top_cells(g, RING[:4])
    mid = CubicalPair.from_top_cells(g, RING)
    big = CubicalPair.from_top_cells(g, RING + [(1, 1)])
    inc = lambda a, b: ChainMap(a, b, lambda key: {key: 1})  # noqa: E731
    hs, hm, hb = homology(small), homology(mid), homology(big)
    f, gmap = induced_homomorphism(inc(small, mid), hs, hm), induced_homomorphism(inc(mid, big), hm, hb)
    fg = induced_homomorphism(inc(mid, big).compose(inc(small, mid)), hs, hb)
    assert fg == gmap.compose(f)


def _shift(t):
    def rule(key):
        return {tuple(k + 2 * s for k, s in zip(key, t)): 1}
    return rule


@settings(max_examples=100)
@given(st.integers(1, 2).flatmap(lambda d: st.tuples(
    st.just(d),
    st.sets(st.tuples(*[st.integers(0, 2)] * d), min_size=1, max_size=6),
    st.tuples(*[st.integers(0, 2)] * d),
    st.sets(st.tuples(*[st.integers(0, 5)] * d), max_size=6),
    st.sets(st.tuples(*[st.integers(0, 5)] * d), max_size=6))))
def test_functoriality(p):
    # translate, then include twice: (h g f)_* = h_* g_* f_*
    d, cells, t, extra1, extra2 = p
    g = GridGeometry(((0, 6),) * d, (6,) * d)
    moved = {tuple(c + s for c, s in zip(x, t)) for x in cells}
    a = CubicalPair.from_top_cells(g, sorted(cells))
    b = CubicalPair.from_top_cells(g, sorted(moved | extra1))
    c = CubicalPair.from_top_cells(g, sorted(moved | extra1 | extra2))
    f = ChainMap(a, b, _shift(t))
    inc = ChainMap(b, c, lambda key: {key: 1})
    ha, hb, hc = homology(a), homology(b), homology(c)
    fs, incs = induced_homomorphism(f, ha, hb), induced_homomorphism(inc, hb, hc)
    assert induced_homomorphism(inc.compose(f), ha, hc) == incs.compose(fs)
    assert induced_homomorphism(f.compose(ChainMap.identity(a)), ha, hb) == fs
