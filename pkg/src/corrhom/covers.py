"""Box covers of grids and the acyclic enlargement of an inscribed map.

A box is a product of inclusive cell-index ranges.  Intersections of boxes
are boxes, so a family of boxes is a good closed cover as long as its
members are taken inside a codomain where they stay acyclic.  The
enlargement replaces each value by the intersection of all boxes that
contain it, clipped to the codomain.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .correspondence import CombinatorialMap
from .cubical import GridGeometry, complex_from_top_cells, CubicalPair
from .homology import homology

Box = tuple  # ((lo_0, hi_0), ..., (lo_d, hi_d)), inclusive cell indices


class NotInscribed(ValueError):
    pass


def box_cells(box: Box) -> list[tuple[int, ...]]:
    return list(itertools.product(*(range(lo, hi + 1) for lo, hi in box)))


def box_intersection(a: Box, b: Box) -> Box | None:
    out = []
    for (alo, ahi), (blo, bhi) in zip(a, b):
        lo, hi = max(alo, blo), min(ahi, bhi)
        if lo > hi:
            return None
        out.append((lo, hi))
    return tuple(out)


def bounding_box(cells) -> Box:
    arr = np.asarray(sorted(cells))
    return tuple((int(lo), int(hi)) for lo, hi in zip(arr.min(axis=0), arr.max(axis=0)))


@dataclass
class BoxCover:
    grid: GridGeometry
    boxes: list
    support: frozenset | None = None  # cells that must be covered; None = whole grid
    _arr: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.boxes = [tuple((int(lo), int(hi)) for lo, hi in b) for b in self.boxes]
        d = self.grid.dimension
        for b in self.boxes:
            if len(b) != d:
                raise ValueError("box dimension does not match grid")
            for (lo, hi), n in zip(b, self.grid.divisions):
                if not 0 <= lo <= hi < n:
                    raise ValueError(f"box {b} is empty or leaves the grid")
        self._arr = np.array(self.boxes, dtype=np.int64).reshape(len(self.boxes), d, 2)
        missing = self.uncovered()
        if missing:
            raise ValueError(f"{len(missing)} cells are not covered, e.g. {missing[0]}")

    def uncovered(self) -> list:
        cells = self.support if self.support is not None else self.grid.all_cells()
        out = []
        for c in sorted(cells):
            c = np.asarray(c)
            inside = np.all((self._arr[:, :, 0] <= c) & (c <= self._arr[:, :, 1]), axis=1)
            if not inside.any():
                out.append(tuple(int(x) for x in c))
        return out

    def containing(self, box: Box) -> np.ndarray:
        """Indices of cover boxes that contain ``box``."""
        lo = np.array([b[0] for b in box])
        hi = np.array([b[1] for b in box])
        ok = np.all((self._arr[:, :, 0] <= lo) & (hi <= self._arr[:, :, 1]), axis=1)
        return np.nonzero(ok)[0]

    def subcover(self, indices) -> "BoxCover":
        return BoxCover(self.grid, [self.boxes[i] for i in indices], self.support)


def sliding_box_cover(grid: GridGeometry, window, support=None) -> BoxCover:
    """All windows of the given per-axis size, clipped to the grid.

    Windows start at ``1 - window`` so that cells near the grid edge are
    covered by clipped boxes as well.  With ``support`` only boxes meeting
    the support are kept.
    """
    if isinstance(window, int):
        window = (window,) * grid.dimension
    if any(w < 1 for w in window):
        raise ValueError("window must be >= 1 on every axis")
    ranges = []
    for n, w in zip(grid.divisions, window):
        axis = sorted({(max(s, 0), min(s + w - 1, n - 1)) for s in range(1 - w, n)})
        ranges.append(axis)
    boxes = list(itertools.product(*ranges))
    if support is not None:
        support = frozenset(tuple(c) for c in support)
        sup = np.asarray(sorted(support)).reshape(len(support), grid.dimension)
        keep = []
        for b in boxes:
            lo = np.array([r[0] for r in b])
            hi = np.array([r[1] for r in b])
            if len(sup) and np.any(np.all((lo <= sup) & (sup <= hi), axis=1)):
                keep.append(b)
        boxes = keep
    return BoxCover(grid, boxes, support)


def is_inscribed(m: CombinatorialMap, cover: BoxCover) -> bool:
    """Every value fits inside a single cover box."""
    if cover.grid != m.target_grid:
        raise ValueError("cover lives on a different grid than the map's codomain")
    return all(len(cover.containing(bounding_box(v))) for v in m.values.values())


@dataclass
class AcyclicityReport:
    acyclic: bool
    failures: list = field(default_factory=list)  # cells (or faces) whose value is not acyclic

    def __bool__(self):
        return self.acyclic


def _acyclic_cells(grid: GridGeometry, cells, cache: dict) -> bool:
    key = frozenset(cells)
    hit = cache.get(key)
    if hit is None:
        hit = homology(CubicalPair(complex_from_top_cells(grid, key))).is_acyclic()
        cache[key] = hit
    return hit


def is_acyclic_valued(m: CombinatorialMap, pointwise: bool = False) -> AcyclicityReport:
    """Check that every value is acyclic.

    With ``pointwise`` the check is made on the value over every face of
    the domain complex, i.e. the union of values of all domain cells that
    contain the face.  That is the fiber condition for the graph projection.
    """
    cache: dict = {}
    failures = []
    for xi in sorted(m.domain):
        if not _acyclic_cells(m.target_grid, m.values[xi], cache):
            failures.append(xi)
    if pointwise:
        incident: dict = {}
        for xi in m.domain:
            for face in itertools.product(*((2 * k, 2 * k + 1, 2 * k + 2) for k in xi)):
                incident.setdefault(face, []).append(xi)
        for face in sorted(incident):
            cells = incident[face]
            if len(cells) == 1:
                continue
            union = frozenset().union(*(m.values[c] for c in cells))
            if not _acyclic_cells(m.target_grid, union, cache):
                failures.append(face)
    return AcyclicityReport(not failures, failures)


def acyclic_enlargement(m: CombinatorialMap, cover: BoxCover) -> CombinatorialMap:
    """Enlarge each value to the intersection of all cover boxes containing it (within the codomain).

    The result may send cells of the domain subset outside the codomain
    subset; it is then returned as a non-strict map (``respects_pairs`` is
    False) and cannot be compared with ``m`` as a map of pairs.
    """
    if cover.grid != m.target_grid:
        raise ValueError("cover lives on a different grid than the map's codomain")
    if m.codomain_sub:
        sub_boxes = [b for b in cover.boxes if set(box_cells(b)) <= m.codomain_sub]
        covered = set().union(*(box_cells(b) for b in sub_boxes)) if sub_boxes else set()
        if covered != set(m.codomain_sub):
            raise ValueError("codomain subset is not a union of cover boxes")
    values = {}
    for xi, val in m.values.items():
        idx = cover.containing(bounding_box(val))
        if not len(idx):
            raise NotInscribed(f"value of {xi} fits in no cover box")
        box = cover.boxes[idx[0]]
        for i in idx[1:]:
            box = box_intersection(box, cover.boxes[i])
        values[xi] = frozenset(c for c in box_cells(box) if c in m.codomain)
    return CombinatorialMap(m.source_grid, m.target_grid, m.domain, m.domain_sub, m.codomain,
                            m.codomain_sub, values, strict=False)
