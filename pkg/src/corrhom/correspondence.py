"""Combinatorial multivalued maps, their graphs, projections, and sampled maps."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .cubical import (
    CubicalPair,
    GridGeometry,
    Key,
    OutOfRange,
    complex_from_top_cells,
    top_key,
)
from .homology import ChainMap

Cell = tuple  # grid coordinates of a top cell


class InvalidMap(ValueError):
    pass


class EmptyValue(ValueError):
    """A domain cell would receive an empty value."""


class OutOfGrid(ValueError):
    """A sample lies outside the cells it should belong to."""


class GridMismatch(ValueError):
    pass


def _cellset(cells: Iterable[Sequence[int]]) -> frozenset:
    return frozenset(tuple(int(k) for k in c) for c in cells)


@dataclass(frozen=True)
class CombinatorialMap:
    """Multivalued map ``(X, A) => (Y, B)`` between grid cells.

    ``values`` maps every domain cell to a nonempty set of codomain cells.
    The map restricted to ``domain_sub`` is the map on the subpair.
    """

    source_grid: GridGeometry
    target_grid: GridGeometry
    domain: frozenset
    domain_sub: frozenset
    codomain: frozenset
    codomain_sub: frozenset
    values: Mapping[Cell, frozenset] = field(repr=False)
    strict: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "domain", _cellset(self.domain))
        object.__setattr__(self, "domain_sub", _cellset(self.domain_sub))
        object.__setattr__(self, "codomain", _cellset(self.codomain))
        object.__setattr__(self, "codomain_sub", _cellset(self.codomain_sub))
        object.__setattr__(self, "values", {tuple(k): _cellset(v) for k, v in self.values.items()})
        self.validate()

    def validate(self) -> None:
        for c in self.domain:
            self.source_grid.check_cell(c)
        for c in self.codomain:
            self.target_grid.check_cell(c)
        if not self.domain_sub <= self.domain:
            raise InvalidMap("domain subset is not contained in the domain")
        if not self.codomain_sub <= self.codomain:
            raise InvalidMap("codomain subset is not contained in the codomain")
        if set(self.values) != set(self.domain):
            extra = set(self.values) - set(self.domain)
            if extra:
                raise InvalidMap(f"values given for cells outside the domain: {sorted(extra)[:3]}")
            missing = sorted(set(self.domain) - set(self.values))
            raise EmptyValue(f"no value for domain cells {missing[:3]}")
        for xi, val in self.values.items():
            if not val:
                raise EmptyValue(f"empty value at {xi}")
            if not val <= self.codomain:
                raise InvalidMap(f"value of {xi} leaves the codomain")
            if self.strict and xi in self.domain_sub and not val <= self.codomain_sub:
                raise InvalidMap(f"cell {xi} of the domain subset maps outside the codomain subset")

    @classmethod
    def build(cls, source_grid, target_grid, values: Mapping, domain_sub=(), codomain=None,
              codomain_sub=()) -> "CombinatorialMap":
        """Convenience constructor; domain is the key set, codomain defaults to the union of values."""
        values = {tuple(k): _cellset(v) for k, v in values.items()}
        if codomain is None:
            codomain = set().union(*values.values()) | _cellset(codomain_sub) if values else set()
        return cls(source_grid, target_grid, frozenset(values), _cellset(domain_sub),
                   _cellset(codomain), _cellset(codomain_sub), values)

    def __getitem__(self, xi) -> frozenset:
        return self.values[tuple(xi)]

    def pair_violations(self) -> list[Cell]:
        """Cells of the domain subset whose value leaves the codomain subset."""
        return sorted(xi for xi in self.domain_sub if not self.values[xi] <= self.codomain_sub)

    @property
    def respects_pairs(self) -> bool:
        return not self.pair_violations()

    def effective_codomain_sub(self) -> frozenset:
        """Smallest superset of the codomain subset receiving the image of the domain subset."""
        out = set(self.codomain_sub)
        for xi in self.domain_sub:
            out |= self.values[xi]
        return frozenset(out)

    def domain_pair(self) -> CubicalPair:
        return CubicalPair.from_top_cells(self.source_grid, self.domain, self.domain_sub)

    def codomain_pair(self) -> CubicalPair:
        """``(Y, B)``; for a map that does not respect the pairs, ``B`` is enlarged to receive ``F(A)``."""
        return CubicalPair.from_top_cells(self.target_grid, self.codomain, self.effective_codomain_sub())

    def restrict(self, cells: Iterable[Cell]) -> "CombinatorialMap":
        keep = _cellset(cells) & self.domain
        return CombinatorialMap(self.source_grid, self.target_grid, keep, self.domain_sub & keep,
                                self.codomain, self.codomain_sub,
                                {xi: self.values[xi] for xi in keep}, self.strict)

    def transpose(self) -> "CombinatorialMap":
        """Inverse relation ``eta => {xi : eta in F(xi)}``; only for maps on absolute pairs."""
        if self.domain_sub or self.codomain_sub:
            raise InvalidMap("transpose is only defined for maps with empty subsets")
        inv: dict[Cell, set] = {}
        for xi, val in self.values.items():
            for eta in val:
                inv.setdefault(eta, set()).add(xi)
        return CombinatorialMap(self.target_grid, self.source_grid, frozenset(inv), frozenset(),
                                self.domain, frozenset(), inv)

    def size(self) -> int:
        return sum(len(v) for v in self.values.values())

    def same_pairs(self, other: "CombinatorialMap") -> bool:
        return (self.domain, self.domain_sub, self.codomain, self.codomain_sub) == \
            (other.domain, other.domain_sub, other.codomain, other.codomain_sub)


def identity_map(grid: GridGeometry, cells: Iterable[Cell], sub: Iterable[Cell] = ()) -> CombinatorialMap:
    cells = _cellset(cells)
    sub = _cellset(sub)
    return CombinatorialMap(grid, grid, cells, sub, cells, sub, {c: frozenset([c]) for c in cells})


@dataclass
class GraphPair:
    """Graph of a combinatorial map as a cubical pair in the product grid (X-axes first)."""

    pair: CubicalPair
    source_grid: GridGeometry
    target_grid: GridGeometry
    map: CombinatorialMap

    @property
    def split(self) -> int:
        return self.source_grid.dimension


def graph_pair(m: CombinatorialMap) -> GraphPair:
    grid = m.source_grid.product(m.target_grid)
    tops = [xi + eta for xi in sorted(m.domain) for eta in sorted(m.values[xi])]
    sub_tops = [xi + eta for xi in sorted(m.domain_sub) for eta in sorted(m.values[xi])]
    total = complex_from_top_cells(grid, tops)
    sub = complex_from_top_cells(grid, sub_tops)
    return GraphPair(CubicalPair(total, sub), m.source_grid, m.target_grid, m)


def projection_chain_maps(g: GraphPair, source: CubicalPair | None = None,
                          target: CubicalPair | None = None) -> tuple[ChainMap, ChainMap]:
    """Chain maps of the projections ``p`` onto ``(X, A)`` and ``q`` onto ``(Y, B)``.

    ``p(P x Q) = P`` when ``Q`` is a vertex and 0 otherwise; ``q`` likewise.
    """
    d = g.split
    if source is None:
        source = g.map.domain_pair()
    if target is None:
        target = g.map.codomain_pair()

    def p_rule(key: Key):
        ys = key[d:]
        if any(c & 1 for c in ys):
            return {}
        return {key[:d]: 1}

    def q_rule(key: Key):
        xs = key[:d]
        if any(c & 1 for c in xs):
            return {}
        return {key[d:]: 1}

    return ChainMap(g.pair, source, p_rule), ChainMap(g.pair, target, q_rule)


def _points(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return a if a.ndim == 2 else a.reshape(len(a), -1)


@dataclass
class SampleSet:
    """Pairs ``(x, y)`` of points in the source and target spaces."""

    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        self.xs = _points(self.xs)
        self.ys = _points(self.ys)
        if len(self.xs) != len(self.ys):
            raise ValueError("sample coordinate arrays differ in length")
        if not (np.all(np.isfinite(self.xs)) and np.all(np.isfinite(self.ys))):
            raise ValueError("sample coordinates must be finite")

    def __len__(self):
        return len(self.xs)

    def __iter__(self):
        return zip(self.xs, self.ys)

    @classmethod
    def empty(cls, dx: int, dy: int) -> "SampleSet":
        return cls(np.zeros((0, dx)), np.zeros((0, dy)))

    def __add__(self, other: "SampleSet") -> "SampleSet":
        return SampleSet(np.vstack([self.xs, other.xs]), np.vstack([self.ys, other.ys]))


def sample_induced_map(samples: SampleSet, source_grid: GridGeometry, target_grid: GridGeometry,
                       domain, domain_sub, codomain, codomain_sub,
                       drop_unhit: bool = False) -> CombinatorialMap:
    """Map induced by samples: ``eta in F(xi)`` iff some ``(x, y)`` has ``x in |xi|`` and ``y in |eta|``.

    Cells are closed, so a sample on a cell boundary contributes to every
    incident cell.  Domain cells without samples raise EmptyValue unless
    ``drop_unhit`` is set, in which case they are removed from the domain.
    """
    domain = _cellset(domain)
    domain_sub = _cellset(domain_sub)
    codomain = _cellset(codomain)
    codomain_sub = _cellset(codomain_sub)
    values: dict[Cell, set] = {}
    for x, y in samples:
        xis = [c for c in source_grid.cells_containing(x) if c in domain]
        if not xis:
            raise OutOfGrid(f"sample x={tuple(x)} lies outside the domain cells")
        etas = [c for c in target_grid.cells_containing(y) if c in codomain]
        if not etas:
            raise OutOfGrid(f"sample y={tuple(y)} lies outside the codomain cells")
        for xi in xis:
            values.setdefault(xi, set()).update(etas)
    unhit = domain - set(values)
    if unhit:
        if not drop_unhit:
            raise EmptyValue(f"{len(unhit)} domain cells received no sample, e.g. {sorted(unhit)[0]}")
        domain = domain - unhit
        domain_sub = domain_sub - unhit
    return CombinatorialMap(source_grid, target_grid, domain, domain_sub, codomain, codomain_sub, values)


def is_enlargement(f: CombinatorialMap, g: CombinatorialMap) -> bool:
    """True iff ``g`` contains ``f``."""
    if f.source_grid != g.source_grid or f.target_grid != g.target_grid:
        raise GridMismatch("maps live on different grids")
    if not (f.domain <= g.domain and f.domain_sub <= g.domain_sub):
        return False
    return all(v <= g.values[xi] for xi, v in f.values.items())


def contains_samples(m: CombinatorialMap, samples: SampleSet) -> bool:
    """True iff every sample ``(x, y)`` with ``x`` in a domain cell ``xi`` has ``y`` in ``|F(xi)|``."""
    for x, y in samples:
        ycells = set(m.target_grid.cells_containing(y))
        for xi in m.source_grid.cells_containing(x):
            val = m.values.get(xi)
            if val is not None and not (ycells & val):
                return False
    return True
