"""Exact linear algebra over the integers.

Everything here works on dense matrices of Python ints, so arithmetic is
arbitrary precision.  The Smith normal form convention is

    u @ a @ v == s

with ``u`` and ``v`` unimodular and ``s`` diagonal, nonnegative, with each
diagonal entry dividing the next.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence


class NoSolution(ValueError):
    """Raised when a linear system has no integer solution."""


class IllDefined(ValueError):
    """Raised when a map does not descend to the requested quotients."""


class IntegerMatrix:
    """Dense, immutable integer matrix."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable[int]] = (), rows: int | None = None,
                 cols: int | None = None):
        data = tuple(tuple(int(x) for x in row) for row in data)
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError(f"entries do not form a {rows}x{cols} array")
        self.rows = rows
        self.cols = cols
        self._data = data

    # construction helpers
    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntegerMatrix":
        cols = len(columns)
        return cls([[columns[j][i] for j in range(cols)] for i in range(rows)], rows, cols)

    @classmethod
    def diagonal(cls, entries: Sequence[int], rows: int | None = None,
                 cols: int | None = None) -> "IntegerMatrix":
        n = len(entries)
        rows = n if rows is None else rows
        cols = n if cols is None else cols
        m = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(entries):
            m[i][i] = d
        return cls(m, rows, cols)

    # access
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i]

    def column(self, j: int) -> list[int]:
        return [r[j] for r in self._data]

    def columns(self) -> list[list[int]]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._data]

    def __iter__(self):
        return iter(self._data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        return f"IntegerMatrix({self.tolist()!r}, rows={self.rows}, cols={self.cols})"

    # arithmetic
    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.columns()
        out = [[sum(a * b for a, b in zip(r, c) if a) for c in ocols] for r in self._data]
        return IntegerMatrix(out, self.rows, other.cols)

    def apply(self, vec: Sequence[int]) -> list[int]:
        """Matrix-vector product."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return [sum(a * b for a, b in zip(r, vec) if a) for r in self._data]

    def __add__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntegerMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self, other)],
                             self.rows, self.cols)

    def __sub__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        return self + other.scale(-1)

    def scale(self, k: int) -> "IntegerMatrix":
        return IntegerMatrix([[k * a for a in r] for r in self._data], self.rows, self.cols)

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(zip(*self._data), self.cols, self.rows) if self.rows else \
            IntegerMatrix.zeros(self.cols, 0)

    def hstack(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return IntegerMatrix([a + b for a, b in zip(self._data, other._data)],
                             self.rows, self.cols + other.cols)

    def vstack(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        return IntegerMatrix(self._data + other._data, self.rows + other.rows, self.cols)

    def select_rows(self, idx: Sequence[int]) -> "IntegerMatrix":
        return IntegerMatrix([self._data[i] for i in idx], len(idx), self.cols)

    def select_columns(self, idx: Sequence[int]) -> "IntegerMatrix":
        return IntegerMatrix([[r[j] for j in idx] for r in self._data], self.rows, len(idx))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._data)

    def determinant(self) -> int:
        """Fraction-free Bareiss elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k]:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SmithDecomposition:
    """``u @ a @ v == s``; ``u_inv`` and ``v_inv`` are tracked alongside."""

    u: IntegerMatrix
    s: IntegerMatrix
    v: IntegerMatrix
    rank: int
    u_inv: IntegerMatrix = field(repr=False)
    v_inv: IntegerMatrix = field(repr=False)

    @property
    def diagonal(self) -> list[int]:
        return [self.s[i, i] for i in range(min(self.s.rows, self.s.cols))]

    @property
    def invariant_factors(self) -> list[int]:
        return [self.s[i, i] for i in range(self.rank)]


def _pick_pivot(m, t, rows, cols):
    best = None
    for i in range(t, len(m)):
        r = m[i]
        for j in range(t, len(r)):
            x = r[j]
            if x:
                ax = abs(x)
                if best is None or ax < best[0]:
                    best = (ax, i, j)
                    if ax == 1:
                        return i, j
    return None if best is None else (best[1], best[2])


def smith_normal_form(a: IntegerMatrix) -> SmithDecomposition:
    """Smith normal form with unimodular transforms.

    Pivot rule: smallest nonzero absolute value in the active block, ties
    broken by (row, col) order.  The output is a deterministic function of
    the input.
    """
    rows, cols = a.shape
    m = a.tolist()
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    ui = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]
    vi = [[int(i == j) for j in range(cols)] for i in range(cols)]

    # Row op "row_i += k*row_j" on m and u; ui gets the inverse column op.
    def add_row(i, j, k):
        if not k:
            return
        mi, mj = m[i], m[j]
        for c in range(cols):
            if mj[c]:
                mi[c] += k * mj[c]
        ri, rj = u[i], u[j]
        for c in range(rows):
            if rj[c]:
                ri[c] += k * rj[c]
        for r in ui:
            if r[i]:
                r[j] -= k * r[i]

    def add_col(i, j, k):
        # col_i += k*col_j on m and v; vi gets the inverse row op.
        if not k:
            return
        for r in m:
            if r[j]:
                r[i] += k * r[j]
        for r in v:
            if r[j]:
                r[i] += k * r[j]
        vj, vii = vi[j], vi[i]
        for c in range(cols):
            if vii[c]:
                vj[c] -= k * vii[c]

    def swap_rows(i, j):
        if i != j:
            m[i], m[j] = m[j], m[i]
            u[i], u[j] = u[j], u[i]
            for r in ui:
                r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        if i != j:
            for r in m:
                r[i], r[j] = r[j], r[i]
            for r in v:
                r[i], r[j] = r[j], r[i]
            vi[i], vi[j] = vi[j], vi[i]

    def negate_row(i):
        m[i] = [-x for x in m[i]]
        u[i] = [-x for x in u[i]]
        for r in ui:
            r[i] = -r[i]

    t = 0
    while t < min(rows, cols):
        piv = _pick_pivot(m, t, rows, cols)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            p = m[t][t]
            for i in range(t + 1, rows):
                if m[i][t]:
                    add_row(i, t, -(m[i][t] // p))
            for j in range(t + 1, cols):
                if m[t][j]:
                    add_col(j, t, -(m[t][j] // p))
            # leftovers in row/column t: move the smallest to the pivot
            best = None
            for i in range(t + 1, rows):
                x = abs(m[i][t])
                if x and (best is None or x < best[0]):
                    best = (x, i, t)
            for j in range(t + 1, cols):
                x = abs(m[t][j])
                if x and (best is None or x < best[0] or (x == best[0] and (t, j) < best[1:])):
                    best = (x, t, j)
            if best is not None:
                swap_rows(t, best[1])
                swap_cols(t, best[2])
                continue
            # divisibility against the remaining block
            bad = None
            for i in range(t + 1, rows):
                r = m[i]
                for j in range(t + 1, cols):
                    if r[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if m[t][t] < 0:
            negate_row(t)
        t += 1

    return SmithDecomposition(
        u=IntegerMatrix(u, rows, rows),
        s=IntegerMatrix(m, rows, cols),
        v=IntegerMatrix(v, cols, cols),
        rank=t,
        u_inv=IntegerMatrix(ui, rows, rows),
        v_inv=IntegerMatrix(vi, cols, cols),
    )


def kernel_basis(a: IntegerMatrix) -> IntegerMatrix:
    """Basis (as columns) of the lattice ``{x : a x = 0}``."""
    snf = smith_normal_form(a)
    return snf.v.select_columns(range(snf.rank, a.cols))


def image_basis(a: IntegerMatrix) -> IntegerMatrix:
    """Basis (as columns) of the integer column span of ``a``."""
    snf = smith_normal_form(a)
    d = snf.diagonal
    cols = [[x * d[j] for x in snf.u_inv.column(j)] for j in range(snf.rank)]
    return IntegerMatrix.from_columns(cols, a.rows)


def solve_exact(a: IntegerMatrix, b: Sequence[int], snf: SmithDecomposition | None = None) -> list[int]:
    """Return one integer ``x`` with ``a x = b``; raise NoSolution otherwise."""
    if len(b) != a.rows:
        raise ValueError("right-hand side has the wrong length")
    if snf is None:
        snf = smith_normal_form(a)
    c = snf.u.apply(b)
    y = [0] * a.cols
    for i, ci in enumerate(c):
        if i < snf.rank:
            d = snf.s[i, i]
            if ci % d:
                raise NoSolution(f"no integer solution (component {i} not divisible by {d})")
            y[i] = ci // d
        elif ci:
            raise NoSolution("right-hand side outside the rational column span")
    return snf.v.apply(y)


def is_unimodular(m: IntegerMatrix) -> bool:
    return m.rows == m.cols and abs(m.determinant()) == 1


class AbelianPresentation:
    """Finitely generated abelian group ``Z^generators / (column span of relations)``."""

    def __init__(self, generators: int, relations: IntegerMatrix | None = None):
        if relations is None:
            relations = IntegerMatrix.zeros(generators, 0)
        if relations.rows != generators:
            raise ValueError("relation columns must have one entry per generator")
        self.generators = generators
        self.relations = relations
        self._snf = smith_normal_form(relations)
        d = self._snf.invariant_factors
        self.invariant_factors = [x for x in d if x > 1]
        self.free_rank = generators - self._snf.rank

    @classmethod
    def free(cls, n: int) -> "AbelianPresentation":
        return cls(n)

    @classmethod
    def from_invariants(cls, free_rank: int, torsion: Sequence[int] = ()) -> "AbelianPresentation":
        """Presentation whose first generators carry the torsion orders."""
        torsion = list(torsion)
        n = len(torsion) + free_rank
        return cls(n, IntegerMatrix.diagonal(torsion, n, len(torsion)))

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def orders(self) -> list[int]:
        """Per-generator order (0 = infinite) when relations are diagonal."""
        out = [0] * self.generators
        for j in range(self.relations.cols):
            nz = [(i, x) for i, x in enumerate(self.relations.column(j)) if x]
            if len(nz) != 1:
                raise ValueError("relations are not diagonal")
            out[nz[0][0]] = abs(nz[0][1])
        return out

    def canonical(self, x: Sequence[int]) -> list[int]:
        """Canonical representative of the coset ``x + relations``."""
        if len(x) != self.generators:
            raise ValueError("element has the wrong length")
        if self.relations.cols == 0:
            return list(x)
        snf = self._snf
        c = snf.u.apply(x)
        for i in range(snf.rank):
            c[i] %= snf.s[i, i]
        return snf.u_inv.apply(c)

    def is_zero(self, x: Sequence[int]) -> bool:
        return not any(self.canonical(x))

    def describe(self) -> str:
        parts = ["Z" if self.free_rank == 1 else f"Z^{self.free_rank}"] if self.free_rank else []
        parts += [f"Z/{d}" for d in self.invariant_factors]
        return " + ".join(parts) if parts else "0"

    def __eq__(self, other):
        if not isinstance(other, AbelianPresentation):
            return NotImplemented
        return self.generators == other.generators and self.relations == other.relations

    def __repr__(self):
        return f"AbelianPresentation({self.describe()}, generators={self.generators})"


class Subgroup:
    """Subgroup of ``ambient`` generated by the columns of a matrix."""

    def __init__(self, ambient: AbelianPresentation, generators_in_ambient: IntegerMatrix):
        if generators_in_ambient.rows != ambient.generators:
            raise ValueError("subgroup generators must live in the ambient group")
        cols = [ambient.canonical(c) for c in generators_in_ambient.columns()]
        self.ambient = ambient
        self.generators_in_ambient = IntegerMatrix.from_columns(cols, ambient.generators)

    @classmethod
    def whole(cls, ambient: AbelianPresentation) -> "Subgroup":
        return cls(ambient, IntegerMatrix.identity(ambient.generators))

    @classmethod
    def trivial(cls, ambient: AbelianPresentation) -> "Subgroup":
        return cls(ambient, IntegerMatrix.zeros(ambient.generators, 0))

    @property
    def is_trivial(self) -> bool:
        return self.generators_in_ambient.is_zero()

    def lattice(self) -> IntegerMatrix:
        """Generators stacked with the ambient relations."""
        return self.generators_in_ambient.hstack(self.ambient.relations)

    def contains_element(self, x: Sequence[int]) -> bool:
        try:
            solve_exact(self.lattice(), list(x))
        except NoSolution:
            return False
        return True

    def __repr__(self):
        return f"Subgroup(of {self.ambient.describe()}, {self.generators_in_ambient.cols} generators)"


def subgroup_contains(k: Subgroup, l: Subgroup) -> bool:
    """True iff ``k`` is contained in ``l``."""
    if k.ambient is not l.ambient and k.ambient != l.ambient:
        raise ValueError("subgroups of different ambient groups")
    lat = l.lattice()
    snf = smith_normal_form(lat)
    for col in k.generators_in_ambient.columns():
        if not any(col):
            continue
        try:
            solve_exact(lat, col, snf)
        except NoSolution:
            return False
    return True


class Quotient(NamedTuple):
    presentation: AbelianPresentation
    projection: IntegerMatrix  # quotient generators x ambient generators
    section: IntegerMatrix  # ambient generators x quotient generators; projection @ section = id


def quotient_presentation(ambient: AbelianPresentation, sub: Subgroup) -> Quotient:
    """Presentation of ``ambient / sub`` with the natural projection.

    Quotients by the trivial subgroup keep the ambient generators unchanged.
    """
    if sub.ambient is not ambient and sub.ambient != ambient:
        raise ValueError("subgroup lives in a different group")
    n = ambient.generators
    if sub.is_trivial:
        eye = IntegerMatrix.identity(n)
        return Quotient(ambient, eye, eye)
    snf = smith_normal_form(sub.lattice())
    d = snf.diagonal + [0] * max(0, n - min(n, snf.s.cols))
    keep = [i for i in range(n) if i >= snf.rank or d[i] != 1]
    torsion = [d[i] for i in keep if i < snf.rank]
    proj = snf.u.select_rows(keep)
    section = snf.u_inv.select_columns(keep)
    pres = AbelianPresentation(len(keep), IntegerMatrix.diagonal(torsion, len(keep), len(torsion)))
    return Quotient(pres, proj, section)


def hom_kernel(f: IntegerMatrix, source: AbelianPresentation,
               target: AbelianPresentation) -> Subgroup:
    """Kernel of the homomorphism with matrix ``f`` (target x source)."""
    stacked = f.hstack(target.relations)
    k = kernel_basis(stacked)
    gens = k.select_rows(range(source.generators))
    return Subgroup(source, gens)


def image_subgroup(f: IntegerMatrix, target: AbelianPresentation) -> Subgroup:
    return Subgroup(target, f)


def induced_on_quotients(f: IntegerMatrix, source: Subgroup, target: Subgroup) -> IntegerMatrix:
    """Matrix of the map ``source.ambient/source -> target.ambient/target`` induced by ``f``.

    Raises IllDefined when ``f`` does not carry ``source`` (or the source
    relations) into ``target``.
    """
    src, tgt = source.ambient, target.ambient
    if f.shape != (tgt.generators, src.generators):
        raise ValueError("map matrix has the wrong shape")
    lat = target.lattice()
    snf = smith_normal_form(lat)
    for col in source.lattice().columns():
        img = f.apply(col)
        if not any(img):
            continue
        try:
            solve_exact(lat, img, snf)
        except NoSolution:
            raise IllDefined("map does not send the source subgroup into the target subgroup")
    qs = quotient_presentation(src, source)
    qt = quotient_presentation(tgt, target)
    m = qt.projection @ f @ qs.section
    return reduce_columns(m, qt.presentation)


def reduce_columns(m: IntegerMatrix, target: AbelianPresentation) -> IntegerMatrix:
    """Canonicalize each column of ``m`` modulo the target relations."""
    cols = [target.canonical(c) for c in m.columns()]
    return IntegerMatrix.from_columns(cols, m.rows)


def matrix_rank(m: IntegerMatrix) -> int:
    return smith_normal_form(m).rank
