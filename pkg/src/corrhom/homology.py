"""Homology of cubical pairs with explicit generators, and induced homomorphisms.

The relative chain complex ``C(X)/C(A)`` is first shrunk by sparse algebraic
reduction; homology of what survives is read off from Smith normal forms.
Generators are lifted back to cycles on the relative cells of the pair.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from ._reduction import Reduction
from .cubical import CubicalPair, Key, cube_boundary, cube_dim
from .zmodule import (
    AbelianPresentation,
    IntegerMatrix,
    Subgroup,
    matrix_rank,
    reduce_columns,
    smith_normal_form,
    subgroup_contains,
)

Chain = dict  # Key -> int


class NotAChainMap(ValueError):
    pass


class InternalInconsistency(RuntimeError):
    pass


@dataclass
class HomologyGroup:
    """One degree of a homology module."""

    group: AbelianPresentation
    generators: list[Chain]
    orders: list[int]  # 0 for free generators
    # internal: coordinates of a reduced cycle are coord @ (vector on survivors)
    _survivors: list[int]
    _coord: IntegerMatrix
    _bd_check: IntegerMatrix | None = None

    @property
    def betti(self) -> int:
        return self.group.free_rank

    @property
    def torsion(self) -> list[int]:
        return list(self.group.invariant_factors)

    @property
    def rank(self) -> int:
        return len(self.generators)


class HomologyModule:
    """Homology ``H_*(X, A)`` of a cubical pair, degree by degree."""

    def __init__(self, pair: CubicalPair, groups: list[HomologyGroup], reduction: Reduction,
                 ids: dict[Key, int], keys: list[Key]):
        self.pair = pair
        self.groups = groups
        self._reduction = reduction
        self._ids = ids
        self._keys = keys

    @property
    def top_degree(self) -> int:
        return len(self.groups) - 1

    def __getitem__(self, k: int) -> HomologyGroup:
        return self.groups[k]

    def group(self, k: int) -> AbelianPresentation:
        if 0 <= k < len(self.groups):
            return self.groups[k].group
        return AbelianPresentation(0)

    def betti_numbers(self) -> list[int]:
        return [g.betti for g in self.groups]

    def describe(self) -> list[str]:
        return [g.group.describe() for g in self.groups]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * g.betti for k, g in enumerate(self.groups))

    def is_acyclic(self) -> bool:
        """Homology of a point."""
        if not self.groups or self.groups[0].group.free_rank != 1 or self.groups[0].torsion:
            return False
        return all(g.group.is_trivial for g in self.groups[1:])

    def relative_part(self, chain: Mapping[Key, int]) -> dict[int, int]:
        out = {}
        for key, v in chain.items():
            if not v:
                continue
            if key in self._ids:
                i = self._ids[key]
                out[i] = out.get(i, 0) + v
            elif key not in self.pair.total:
                raise ValueError(f"cell {key} is not in the complex")
        return {i: v for i, v in out.items() if v}

    def is_cycle(self, chain: Mapping[Key, int]) -> bool:
        bd: dict[Key, int] = {}
        for key, v in chain.items():
            if v and self.pair.is_relative(key):
                for f, s in cube_boundary(key):
                    if self.pair.is_relative(f):
                        bd[f] = bd.get(f, 0) + s * v
        return not any(bd.values())

    def coordinates(self, k: int, chain: Mapping[Key, int]) -> list[int]:
        """Coordinates of the class of a relative ``k``-cycle in the generators of degree ``k``."""
        if not 0 <= k < len(self.groups):
            return []
        g = self.groups[k]
        x = self._reduction.project(self.relative_part(chain))
        pos = {c: i for i, c in enumerate(g._survivors)}
        vec = [0] * len(g._survivors)
        for c, v in x.items():
            i = pos.get(c)
            if i is None:
                raise InternalInconsistency(f"projected chain has a component off the degree-{k} survivors")
            vec[i] = v
        if g._bd_check is not None and any(g._bd_check.apply(vec)):
            raise InternalInconsistency("chain is not a relative cycle")
        c = g._coord.apply(vec)
        return [ci % o if o else ci for ci, o in zip(c, g.orders)]


def _cells_and_boundaries(pair: CubicalPair):
    keys: list[Key] = [k for cells in pair.relative_cells for k in cells]
    ids = {k: i for i, k in enumerate(keys)}
    dims = [cube_dim(k) for k in keys]
    bds = []
    for k in keys:
        b = {}
        for f, s in cube_boundary(k):
            j = ids.get(f)
            if j is not None:
                b[j] = b.get(j, 0) + s
        bds.append(b)
    return keys, ids, dims, bds


def homology(pair: CubicalPair) -> HomologyModule:
    """Homology of the pair with deterministic generators in every degree 0..dim."""
    keys, ids, dims, bds = _cells_and_boundaries(pair)
    red = Reduction(dims, bds)
    top = pair.dimension
    surv = [red.survivors(k) for k in range(top + 1)]
    # dense boundaries among survivors: D[k] maps degree k to degree k-1
    D: list[IntegerMatrix | None] = [None] * (top + 2)
    for k in range(top + 2):
        if k == 0 or k > top:
            continue
        rows = {c: i for i, c in enumerate(surv[k - 1])}
        m = [[0] * len(surv[k]) for _ in surv[k - 1]]
        for j, c in enumerate(surv[k]):
            for f, v in red.bd[c].items():
                m[rows[f]][j] = v
        D[k] = IntegerMatrix(m, len(surv[k - 1]), len(surv[k]))

    groups = []
    for k in range(top + 1):
        n = len(surv[k])
        if k >= 1 and n and len(surv[k - 1]):
            snf_k = smith_normal_form(D[k])
            r = snf_k.rank
            kbasis = snf_k.v.select_columns(range(r, n))
            linv = snf_k.v_inv.select_rows(range(r, n))
            bd_check = D[k] if r else None
        else:
            kbasis = IntegerMatrix.identity(n)
            linv = IntegerMatrix.identity(n)
            bd_check = None
        z = kbasis.cols
        if k + 1 <= top and len(surv[k + 1]) and z:
            m = linv @ D[k + 1]
        else:
            m = IntegerMatrix.zeros(z, 0)
        snf = smith_normal_form(m)
        diag = snf.diagonal
        keep = [i for i in range(z) if i >= snf.rank or diag[i] != 1]
        orders = [diag[i] if i < snf.rank else 0 for i in keep]
        coord = (snf.u @ linv).select_rows(keep)
        gen_cols = (kbasis @ snf.u_inv).select_columns(keep)
        generators = []
        for j in range(len(keep)):
            reduced = {surv[k][i]: v for i, v in enumerate(gen_cols.column(j)) if v}
            lifted = red.lift(reduced, k)
            generators.append({keys[c]: v for c, v in sorted(lifted.items()) if v})
        torsion = [o for o in orders if o]
        pres = AbelianPresentation(len(keep), IntegerMatrix.diagonal(torsion, len(keep), len(torsion)))
        groups.append(HomologyGroup(pres, generators, orders, surv[k], coord, bd_check))
    return HomologyModule(pair, groups, red, ids, keys)


class ChainMap:
    """Chain map between relative chain complexes of two cubical pairs.

    ``rule(key)`` returns the image of a source cell as a chain on target
    cells; cells of the target subcomplex are discarded.
    """

    def __init__(self, source: CubicalPair, target: CubicalPair, rule: Callable[[Key], Mapping[Key, int]]):
        self.source = source
        self.target = target
        self._rule = rule
        self._cache: dict[Key, dict[Key, int]] = {}

    @classmethod
    def from_matrices(cls, source: CubicalPair, target: CubicalPair,
                      matrices: Mapping[int, IntegerMatrix]) -> "ChainMap":
        """Matrices indexed by degree, in relative-cell order (target rows x source columns)."""
        table: dict[Key, dict[Key, int]] = {}
        for k, m in matrices.items():
            src = source.relative_cells[k] if k <= source.dimension else []
            tgt = target.relative_cells[k] if k <= target.dimension else []
            if m.shape != (len(tgt), len(src)):
                raise ValueError(f"degree-{k} matrix has shape {m.shape}, expected {(len(tgt), len(src))}")
            for j, key in enumerate(src):
                table[key] = {tgt[i]: m[i, j] for i in range(m.rows) if m[i, j]}
        return cls(source, target, lambda key: table.get(key, {}))

    @classmethod
    def identity(cls, pair: CubicalPair) -> "ChainMap":
        return cls(pair, pair, lambda key: {key: 1})

    def image(self, key: Key) -> dict[Key, int]:
        out = self._cache.get(key)
        if out is None:
            out = {c: v for c, v in self._rule(key).items() if v and self.target.is_relative(c)}
            self._cache[key] = out
        return out

    def apply(self, chain: Mapping[Key, int]) -> dict[Key, int]:
        out: dict[Key, int] = {}
        for key, v in chain.items():
            if not v or not self.source.is_relative(key):
                continue
            for c, w in self.image(key).items():
                out[c] = out.get(c, 0) + v * w
        return {c: v for c, v in out.items() if v}

    def matrix(self, k: int) -> IntegerMatrix:
        src = self.source.relative_cells[k]
        tgt = self.target.relative_cells[k]
        idx = {c: i for i, c in enumerate(tgt)}
        m = [[0] * len(src) for _ in tgt]
        for j, key in enumerate(src):
            for c, v in self.image(key).items():
                m[idx[c]][j] = v
        return IntegerMatrix(m, len(tgt), len(src))

    def compose(self, first: "ChainMap") -> "ChainMap":
        """``self o first``."""
        return ChainMap(first.source, self.target, lambda key: self.apply(first.image(key)))

    def check(self) -> None:
        """Raise NotAChainMap unless the map commutes with the relative boundaries."""
        tgt = self.target
        for key in self.source.relative_index:
            lhs: dict[Key, int] = {}
            for c, v in self.image(key).items():
                for f, s in cube_boundary(c):
                    if tgt.is_relative(f):
                        lhs[f] = lhs.get(f, 0) + s * v
            rhs: dict[Key, int] = {}
            for f, s in self.source.relative_boundary_of(key):
                for c, v in self.image(f).items():
                    rhs[c] = rhs.get(c, 0) + s * v
            lhs = {c: v for c, v in lhs.items() if v}
            rhs = {c: v for c, v in rhs.items() if v}
            if lhs != rhs:
                raise NotAChainMap(f"boundary does not commute at cell {key}")


class HomHomomorphism:
    """Homomorphism between homology modules, one matrix per degree.

    Column ``j`` of ``matrices[k]`` holds the target coordinates of the image
    of source generator ``j``; torsion coordinates are reduced.
    """

    def __init__(self, source: HomologyModule, target: HomologyModule,
                 matrices: list[IntegerMatrix]):
        self.source = source
        self.target = target
        self.matrices = matrices

    def __getitem__(self, k: int) -> IntegerMatrix:
        if 0 <= k < len(self.matrices):
            return self.matrices[k]
        return IntegerMatrix.zeros(len(self.target.groups[k].generators) if k < len(self.target.groups) else 0,
                                   len(self.source.groups[k].generators) if k < len(self.source.groups) else 0)

    def compose(self, first: "HomHomomorphism") -> "HomHomomorphism":
        """``self o first``."""
        mats = []
        for k in range(min(len(self.matrices), len(first.matrices))):
            m = self.matrices[k] @ first.matrices[k]
            mats.append(reduce_columns(m, self.target.group(k)))
        return HomHomomorphism(first.source, self.target, mats)

    def rank(self, k: int) -> int:
        """Rank of the free part of the image in degree ``k``."""
        m = self[k]
        free_rows = [i for i, o in enumerate(self.target.groups[k].orders) if o == 0] \
            if k < len(self.target.groups) else []
        return matrix_rank(m.select_rows(free_rows)) if free_rows and m.cols else 0

    def is_surjective(self, k: int) -> bool:
        tgt = self.target.group(k)
        return subgroup_contains(Subgroup.whole(tgt), Subgroup(tgt, self[k]))

    def is_isomorphism(self) -> bool:
        # surjections between isomorphic finitely generated abelian groups are isomorphisms
        degrees = max(len(self.source.groups), len(self.target.groups))
        for k in range(degrees):
            src = self.source.group(k)
            tgt = self.target.group(k)
            if (src.free_rank, src.invariant_factors) != (tgt.free_rank, tgt.invariant_factors):
                return False
            if not self.is_surjective(k):
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, HomHomomorphism):
            return NotImplemented
        return self.matrices == other.matrices


def induced_homomorphism(chain_map: ChainMap, source: HomologyModule, target: HomologyModule,
                         check: bool = True) -> HomHomomorphism:
    """Homomorphism induced in homology by ``chain_map``."""
    if check:
        chain_map.check()
    mats = []
    for k in range(len(source.groups)):
        cols = []
        for gen in source.groups[k].generators:
            img = chain_map.apply(gen)
            if k < len(target.groups):
                try:
                    cols.append(target.coordinates(k, img))
                except InternalInconsistency as exc:
                    raise InternalInconsistency(f"degree {k}: image of a cycle is not a cycle") from exc
            else:
                if img:
                    raise InternalInconsistency(f"degree {k}: nonzero image above the target dimension")
                cols.append([])
        nrows = len(target.groups[k].generators) if k < len(target.groups) else 0
        mats.append(IntegerMatrix.from_columns(cols, nrows))
    return HomHomomorphism(source, target, mats)
