import itertools
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from corrhom.zmodule import (
    AbelianPresentation,
    IllDefined,
    IntegerMatrix,
    NoSolution,
    Subgroup,
    hom_kernel,
    image_basis,
    induced_on_quotients,
    is_unimodular,
    kernel_basis,
    quotient_presentation,
    smith_normal_form,
    solve_exact,
    subgroup_contains,
)


def _det(rows):
    # cofactor expansion; an oracle independent of the SNF and Bareiss code
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    return sum((-1) ** j * rows[0][j] * _det([r[:j] + r[j + 1:] for r in rows[1:]]) for j in range(n))


def minor_gcd_factors(a):
    """Invariant factors from determinantal divisors: d_1...d_k = gcd of k x k minors."""
    m, n = a.shape
    rows = a.tolist()
    divisors = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for ri in itertools.combinations(range(m), k):
            for ci in itertools.combinations(range(n), k):
                g = gcd(g, _det([[rows[i][j] for j in ci] for i in ri]))
        if g == 0:
            break
        divisors.append(g)
    return [divisors[i] // divisors[i - 1] for i in range(1, len(divisors))]


matrices = st.integers(0, 6).flatmap(
    lambda r: st.integers(0, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-5, 5), min_size=c, max_size=c), min_size=r, max_size=r)
        .map(lambda rows: IntegerMatrix(rows, r, c))))


def test_snf_identity_and_zero():
    d = smith_normal_form(IntegerMatrix.identity(3))
    assert d.s == IntegerMatrix.identity(3) and d.rank == 3
    d = smith_normal_form(IntegerMatrix.zeros(2, 2))
    assert d.s.is_zero() and d.rank == 0


@pytest.mark.parametrize("rows,diag", [([[2, 4], [6, 8]], [2, 4]), ([[2, 0], [0, 3]], [1, 6])])
def test_snf_examples(rows, diag):
    a = IntegerMatrix(rows)
    d = smith_normal_form(a)
    assert d.diagonal == diag
    assert minor_gcd_factors(a) == diag


def test_snf_empty():
    d = smith_normal_form(IntegerMatrix.zeros(0, 3))
    assert d.rank == 0 and d.v.shape == (3, 3)


@settings(max_examples=500)
@given(matrices)
def test_snf_validity(a):
    d = smith_normal_form(a)
    assert d.u @ a @ d.v == d.s
    assert is_unimodular(d.u) and is_unimodular(d.v)
    assert d.u @ d.u_inv == IntegerMatrix.identity(a.rows)
    assert d.v @ d.v_inv == IntegerMatrix.identity(a.cols)
    diag = d.diagonal
    for i in range(a.rows):
        for j in range(a.cols):
            if i != j:
                assert d.s[i, j] == 0
    assert all(x >= 0 for x in diag)
    nz = [x for x in diag if x]
    assert len(nz) == d.rank and diag[: d.rank] == nz
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))


@settings(max_examples=60)
@given(matrices.filter(lambda a: a.rows <= 4 and a.cols <= 4))
def test_snf_matches_minor_oracle(a):
    assert smith_normal_form(a).invariant_factors == minor_gcd_factors(a)


def test_snf_deterministic():
    a = IntegerMatrix([[3, 5, 7], [2, 4, 6], [1, 1, 9]])
    assert smith_normal_form(a) == smith_normal_form(a)


def _brute_kernel(a, bound=3):
    return [x for x in itertools.product(range(-bound, bound + 1), repeat=a.cols) if not any(a.apply(x))]


def _in_span(k, x):
    try:
        solve_exact(k, list(x))
        return True
    except NoSolution:
        return False


def test_kernel_examples():
    k = kernel_basis(IntegerMatrix([[1, 1]]))
    assert k.cols == 1 and abs(k[0, 0]) == 1 and k[0, 0] == -k[1, 0]
    assert kernel_basis(IntegerMatrix.identity(3)).cols == 0
    assert kernel_basis(IntegerMatrix.zeros(1, 2)).cols == 2


@settings(max_examples=80)
@given(matrices.filter(lambda a: 0 < a.cols <= 3 and a.rows <= 3))
def test_kernel_saturated(a):
    k = kernel_basis(a)
    assert (a @ k).is_zero()
    assert k.cols == a.cols - smith_normal_form(a).rank
    for x in _brute_kernel(a):
        assert _in_span(k, x)


def test_image_basis():
    a = IntegerMatrix([[2, 4], [6, 8]])
    b = image_basis(a)
    assert abs(b.determinant()) == 8
    assert image_basis(IntegerMatrix.zeros(2, 2)).cols == 0
    assert abs(image_basis(IntegerMatrix.identity(2)).determinant()) == 1


@settings(max_examples=80)
@given(matrices.filter(lambda a: 0 < a.rows <= 3 and a.cols <= 3))
def test_image_membership(a):
    b = image_basis(a)
    for y in itertools.product(range(-2, 3), repeat=a.rows):
        assert _in_span(b, y) == _in_span(a, y)


def test_solve_examples():
    assert solve_exact(IntegerMatrix([[2]]), [4]) == [2]
    with pytest.raises(NoSolution):
        solve_exact(IntegerMatrix([[2]]), [3])
    assert solve_exact(IntegerMatrix([[1, 1], [0, 2]]), [3, 2]) == [2, 1]


def test_quotients():
    z2 = AbelianPresentation.free(2)
    q = quotient_presentation(z2, Subgroup(z2, IntegerMatrix([[0], [1]])))
    assert q.presentation.describe() == "Z"
    z = AbelianPresentation.free(1)
    q = quotient_presentation(z, Subgroup(z, IntegerMatrix([[2]])))
    assert q.presentation.invariant_factors == [2] and q.presentation.free_rank == 0
    g = AbelianPresentation.from_invariants(1, [2, 4])
    assert quotient_presentation(g, Subgroup.whole(g)).presentation.is_trivial
    q = quotient_presentation(g, Subgroup.trivial(g))
    assert q.presentation.invariant_factors == [2, 4] and q.presentation.free_rank == 1


def test_quotient_projection_surjective():
    g = AbelianPresentation.free(3)
    sub = Subgroup(g, IntegerMatrix([[2, 0], [0, 3], [0, 0]]))
    q = quotient_presentation(g, sub)
    assert q.presentation.describe() == "Z + Z/6"
    # the section is a right inverse of the projection on the quotient
    back = q.projection @ q.section
    for j in range(back.cols):
        e = [0] * back.rows
        e[j] = 1
        assert q.presentation.canonical(back.column(j)) == q.presentation.canonical(e)


def test_subgroup_contains_examples():
    z = AbelianPresentation.free(1)
    assert subgroup_contains(Subgroup.trivial(z), Subgroup(z, IntegerMatrix([[5]])))
    two, one = Subgroup(z, IntegerMatrix([[2]])), Subgroup(z, IntegerMatrix([[1]]))
    assert subgroup_contains(two, one) and not subgroup_contains(one, two)
    z2 = AbelianPresentation.free(2)
    k = Subgroup(z2, IntegerMatrix([[1], [1]]))
    l = Subgroup(z2, IntegerMatrix([[1, 0], [0, 2]]))
    assert not subgroup_contains(k, l)
    with pytest.raises(NoSolution):
        solve_exact(l.generators_in_ambient, [1, 1])


subgroups = st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=2), max_size=3)


@settings(max_examples=100)
@given(subgroups, subgroups, subgroups)
def test_subgroup_contains_order(a, b, c):
    g = AbelianPresentation.from_invariants(1, [4])
    subs = [Subgroup(g, IntegerMatrix.from_columns(x, 2)) for x in (a, b, c)]
    x, y, z = subs
    assert subgroup_contains(x, x)
    if subgroup_contains(x, y) and subgroup_contains(y, z):
        assert subgroup_contains(x, z)


def test_torsion_canonical():
    g = AbelianPresentation.from_invariants(1, [3])
    assert g.canonical([4, 7]) == [1, 7]
    assert g.is_zero([3, 0]) and not g.is_zero([0, 1])


def test_induced_on_quotients():
    z2 = AbelianPresentation.free(2)
    s = Subgroup(z2, IntegerMatrix([[1], [1]]))
    m = induced_on_quotients(IntegerMatrix.identity(2), s, s)
    assert m == IntegerMatrix.identity(m.rows)
    z = AbelianPresentation.free(1)
    with pytest.raises(IllDefined):
        induced_on_quotients(IntegerMatrix.identity(1), Subgroup(z, IntegerMatrix([[2]])), Subgroup.trivial(z))


def test_factorization_through_quotient():
    # q vanishes on ker pi, so q factors through the projection
    z2 = AbelianPresentation.free(2)
    z = AbelianPresentation.free(1)
    q = IntegerMatrix([[0, 3]])
    kerpi = Subgroup(z2, IntegerMatrix([[1], [0]]))
    qt = induced_on_quotients(q, kerpi, Subgroup.trivial(z))
    quo = quotient_presentation(z2, kerpi)
    assert qt @ quo.projection == q


def test_hom_kernel_torsion_target():
    # Z -> Z/4, 1 -> 2 has kernel 2Z
    k = hom_kernel(IntegerMatrix([[2]]), AbelianPresentation.free(1), AbelianPresentation.from_invariants(0, [4]))
    assert subgroup_contains(k, Subgroup(AbelianPresentation.free(1), IntegerMatrix([[2]])))
    assert subgroup_contains(Subgroup(AbelianPresentation.free(1), IntegerMatrix([[2]])), k)


def test_bigints():
    a = IntegerMatrix([[10 ** 30, 1], [0, 10 ** 30]])
    d = smith_normal_form(a)
    assert d.diagonal == [1, 10 ** 60]
