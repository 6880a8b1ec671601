"""Elementary cubes, cubical complexes on uniform grids, and relative pairs.

Cubes are stored as *keys*: tuples of doubled coordinates.  On each axis an
even entry ``2k`` is the degenerate interval ``[k]`` and an odd entry
``2k+1`` is the unit interval ``[k, k+1]``.  Top cell ``(k1, ..., kd)`` of a
grid is the key ``(2k1+1, ..., 2kd+1)``.

Boundary convention: for ``Q = I_1 x ... x I_d``

    dQ = sum_i (-1)^{e_i} (Q with I_i -> upper face  -  Q with I_i -> lower face)

where ``e_i`` counts nondegenerate factors before axis ``i``.  So
``d[0,1] = [1] - [0]``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .zmodule import IntegerMatrix

Key = tuple  # doubled-coordinate cube key


class OutOfRange(ValueError):
    """Cell coordinates outside the grid."""


@dataclass(frozen=True)
class GridGeometry:
    """Uniform subdivision of the box ``prod [lo_i, hi_i]`` into ``divisions[i]`` cells per axis."""

    bounds: tuple[tuple[float, float], ...]
    divisions: tuple[int, ...]

    def __post_init__(self):
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        divisions = tuple(int(n) for n in self.divisions)
        object.__setattr__(self, "bounds", bounds)
        object.__setattr__(self, "divisions", divisions)
        if len(bounds) != len(divisions) or not bounds:
            raise ValueError("bounds and divisions must be nonempty and of equal length")
        for (lo, hi), n in zip(bounds, divisions):
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ValueError(f"degenerate axis bounds [{lo}, {hi}]")
            if n < 1:
                raise ValueError("divisions must be >= 1")

    @property
    def dimension(self) -> int:
        return len(self.divisions)

    @property
    def widths(self) -> tuple[float, ...]:
        return tuple((hi - lo) / n for (lo, hi), n in zip(self.bounds, self.divisions))

    def edge(self, axis: int, k: int) -> float:
        """Coordinate of grid line ``k`` on ``axis``."""
        lo, hi = self.bounds[axis]
        n = self.divisions[axis]
        if k == n:
            return hi
        return lo + k * ((hi - lo) / n)

    def cell_box(self, cell: Sequence[int]) -> list[tuple[float, float]]:
        self.check_cell(cell)
        return [(self.edge(i, k), self.edge(i, k + 1)) for i, k in enumerate(cell)]

    def check_cell(self, cell: Sequence[int]) -> None:
        if len(cell) != self.dimension:
            raise OutOfRange(f"cell {tuple(cell)} has wrong dimension for a {self.dimension}-d grid")
        for k, n in zip(cell, self.divisions):
            if not 0 <= k < n:
                raise OutOfRange(f"cell {tuple(cell)} outside grid divisions {self.divisions}")

    def all_cells(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(n) for n in self.divisions)))

    def axis_cells_containing(self, axis: int, x: float) -> list[int]:
        """Indices ``k`` with ``edge(k) <= x <= edge(k+1)`` (closed cells)."""
        lo, hi = self.bounds[axis]
        n = self.divisions[axis]
        if not (lo <= x <= hi):
            return []
        k = min(int(math.floor((x - lo) / ((hi - lo) / n))), n - 1)
        out = []
        for j in (k - 1, k, k + 1):
            if 0 <= j < n and self.edge(axis, j) <= x <= self.edge(axis, j + 1):
                out.append(j)
        return out

    def cells_containing(self, point: Sequence[float]) -> list[tuple[int, ...]]:
        """All closed top cells containing ``point`` (empty if outside the grid)."""
        if len(point) != self.dimension:
            raise ValueError("point dimension does not match grid")
        per_axis = [self.axis_cells_containing(i, float(x)) for i, x in enumerate(point)]
        return list(itertools.product(*per_axis))

    def product(self, other: "GridGeometry") -> "GridGeometry":
        return GridGeometry(self.bounds + other.bounds, self.divisions + other.divisions)

    def to_dict(self) -> dict:
        return {"bounds": [list(b) for b in self.bounds], "divisions": list(self.divisions)}

    @classmethod
    def from_dict(cls, d: dict) -> "GridGeometry":
        return cls(tuple(tuple(b) for b in d["bounds"]), tuple(d["divisions"]))


class ElementaryCube(NamedTuple):
    """Product of unit or degenerate intervals: ``[base_i, base_i + extent_i]`` per axis."""

    base: tuple[int, ...]
    extent: tuple[int, ...]

    @property
    def dim(self) -> int:
        return sum(self.extent)

    @property
    def key(self) -> Key:
        return tuple(2 * b + e for b, e in zip(self.base, self.extent))

    @classmethod
    def from_key(cls, key: Key) -> "ElementaryCube":
        return cls(tuple(c >> 1 for c in key), tuple(c & 1 for c in key))

    def faces(self) -> list["ElementaryCube"]:
        return [ElementaryCube.from_key(f) for f, _ in cube_boundary(self.key)]


def top_key(cell: Sequence[int]) -> Key:
    return tuple(2 * k + 1 for k in cell)


def key_to_cell(key: Key) -> tuple[int, ...]:
    return tuple(c >> 1 for c in key)


def cube_dim(key: Key) -> int:
    return sum(c & 1 for c in key)


def cube_boundary(key: Key) -> list[tuple[Key, int]]:
    """Faces of ``key`` with their incidence coefficients."""
    out = []
    sign = 1
    for i, c in enumerate(key):
        if c & 1:
            out.append((key[:i] + (c + 1,) + key[i + 1:], sign))
            out.append((key[:i] + (c - 1,) + key[i + 1:], -sign))
            sign = -sign
    return out


def closure_keys(key: Key) -> Iterable[Key]:
    """All faces of ``key`` including itself."""
    choices = [(c - 1, c, c + 1) if c & 1 else (c,) for c in key]
    return itertools.product(*choices)


def _order(key: Key):
    return tuple(c >> 1 for c in key), tuple(c & 1 for c in key)


class CubicalComplex:
    """Finite cubical complex closed under faces, with a deterministic cell order."""

    def __init__(self, dimension: int, keys: Iterable[Key]):
        self.dimension = dimension
        by_dim: list[list[Key]] = [[] for _ in range(dimension + 1)]
        for k in set(keys):
            if len(k) != dimension:
                raise ValueError("cube dimension mismatch")
            by_dim[cube_dim(k)].append(k)
        for cells in by_dim:
            cells.sort(key=_order)
        self.cells = by_dim
        self.index = {k: i for cells in by_dim for i, k in enumerate(cells)}

    @classmethod
    def from_cells(cls, dimension: int, keys: Iterable[Key]) -> "CubicalComplex":
        """Closure of arbitrary cubes."""
        out = set()
        for k in keys:
            if k not in out:
                out.update(closure_keys(k))
        return cls(dimension, out)

    def __contains__(self, key) -> bool:
        return key in self.index

    def __len__(self) -> int:
        return len(self.index)

    def __eq__(self, other):
        if not isinstance(other, CubicalComplex):
            return NotImplemented
        return self.dimension == other.dimension and self.cells == other.cells

    def count(self, k: int) -> int:
        return len(self.cells[k]) if 0 <= k <= self.dimension else 0

    def counts(self) -> list[int]:
        return [len(c) for c in self.cells]

    def top_cells(self) -> list[tuple[int, ...]]:
        """Grid coordinates of full-dimensional cells."""
        return [key_to_cell(k) for k in self.cells[self.dimension]]

    def maximal_keys(self) -> list[Key]:
        """Cells that are not a face of another cell."""
        faces = set()
        for cells in self.cells[1:]:
            for k in cells:
                faces.update(f for f, _ in cube_boundary(k))
        return [k for cells in self.cells for k in cells if k not in faces]

    def keys(self) -> Iterable[Key]:
        for cells in self.cells:
            yield from cells

    def __repr__(self):
        return f"CubicalComplex(dim={self.dimension}, counts={self.counts()})"


def complex_from_top_cells(grid: GridGeometry, tops: Iterable[Sequence[int]]) -> CubicalComplex:
    """Closure of the listed full-dimensional grid cells."""
    keys = []
    for cell in tops:
        grid.check_cell(cell)
        keys.append(top_key(cell))
    return CubicalComplex.from_cells(grid.dimension, keys)


class InvalidPair(ValueError):
    pass


class CubicalPair:
    """Relative pair ``(total, sub)`` with ``sub`` a subcomplex of ``total``."""

    def __init__(self, total: CubicalComplex, sub: CubicalComplex | None = None):
        if sub is None:
            sub = CubicalComplex(total.dimension, ())
        if sub.dimension != total.dimension:
            raise InvalidPair("pair components have different ambient dimensions")
        for k in sub.keys():
            if k not in total:
                raise InvalidPair(f"cell {k} of the subcomplex is not in the total complex")
        self.total = total
        self.sub = sub
        self.relative_cells = [[k for k in cells if k not in sub] for cells in total.cells]
        self.relative_index = {k: i for cells in self.relative_cells for i, k in enumerate(cells)}

    @classmethod
    def from_top_cells(cls, grid: GridGeometry, tops, sub_tops=()) -> "CubicalPair":
        return cls(complex_from_top_cells(grid, tops), complex_from_top_cells(grid, sub_tops))

    @property
    def dimension(self) -> int:
        return self.total.dimension

    def is_relative(self, key: Key) -> bool:
        return key in self.relative_index

    def relative_boundary_of(self, key: Key) -> list[tuple[Key, int]]:
        return [(f, s) for f, s in cube_boundary(key) if f in self.relative_index]


def _dense_boundary(rows_cells, cols_cells, bd) -> IntegerMatrix:
    rindex = {k: i for i, k in enumerate(rows_cells)}
    m = [[0] * len(cols_cells) for _ in rows_cells]
    for j, k in enumerate(cols_cells):
        for f, s in bd(k):
            i = rindex.get(f)
            if i is not None:
                m[i][j] += s
    return IntegerMatrix(m, len(rows_cells), len(cols_cells))


def boundary_matrix(c: CubicalComplex, degree: int) -> IntegerMatrix:
    """Dense matrix of the boundary from ``degree``-cells to ``degree-1``-cells."""
    if not 1 <= degree <= c.dimension:
        raise ValueError(f"degree must be in 1..{c.dimension}")
    return _dense_boundary(c.cells[degree - 1], c.cells[degree], cube_boundary)


def relative_boundary(pair: CubicalPair, degree: int) -> IntegerMatrix:
    """Boundary of the quotient complex ``C(X)/C(A)``."""
    if not 1 <= degree <= pair.dimension:
        raise ValueError(f"degree must be in 1..{pair.dimension}")
    return _dense_boundary(pair.relative_cells[degree - 1], pair.relative_cells[degree],
                           cube_boundary)
