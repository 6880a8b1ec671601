"""Sparse algebraic reduction of a based chain complex over the integers.

A reduction removes a pair of cells ``(a, b)`` with ``<da, b> = +-1`` and
rewrites the boundary of every other coface ``c`` of ``b`` as
``dc - <dc, b> * eps * da``.  Collapses (``b`` has a single coface) and
coreductions (``a`` has a single face) cause no fill-in and are taken first;
when none is available the unit pair with the least fill-in is used.

Each reduction is recorded so that chains can be pushed down to the
surviving cells (``project``) and cycles on surviving cells lifted back to
the original complex (``lift``).
"""
from __future__ import annotations

import heapq
from collections import deque


class Reduction:
    __slots__ = ("ncells", "dims", "bd", "cob", "alive", "records", "removed_at", "heap")

    def __init__(self, dims: list[int], boundaries: list[dict[int, int]]):
        n = len(dims)
        self.ncells = n
        self.dims = dims
        self.bd = [dict(b) for b in boundaries]
        self.cob: list[dict[int, int]] = [{} for _ in range(n)]
        for c, b in enumerate(self.bd):
            for f, v in b.items():
                self.cob[f][c] = v
        self.alive = [True] * n
        # (a, b, eps, col_a without b, row_b without a)
        self.records: list[tuple[int, int, int, dict, dict]] = []
        self.removed_at: dict[int, int] = {}
        self.heap: list = []
        self._run()

    def _free_pair(self, c):
        if not self.alive[c]:
            return None
        b = self.bd[c]
        if len(b) == 1:
            (f, v), = b.items()
            if v == 1 or v == -1:
                return c, f
        cb = self.cob[c]
        if len(cb) == 1:
            (a, v), = cb.items()
            if v == 1 or v == -1:
                return a, c
        return None

    def _cost(self, a, b):
        return (len(self.bd[a]) - 1) * (len(self.cob[b]) - 1)

    def _push_pairs(self, a):
        """Offer every unit pair with upper cell ``a`` to the fill-in heap."""
        for b, v in self.bd[a].items():
            if v == 1 or v == -1:
                heapq.heappush(self.heap, (self._cost(a, b), a, b))

    def _cheapest_pair(self):
        # lazy heap: entries are revalidated and re-costed when popped
        heap = self.heap
        while heap:
            cost, a, b = heapq.heappop(heap)
            if not (self.alive[a] and self.alive[b]):
                continue
            v = self.bd[a].get(b)
            if v != 1 and v != -1:
                continue
            now = self._cost(a, b)
            if now != cost:
                heapq.heappush(heap, (now, a, b))
                continue
            return a, b
        return None

    def _reduce(self, a, b, queue):
        bd, cob = self.bd, self.cob
        eps = bd[a][b]
        col_a = bd[a]
        row_b = cob[b]
        row_snapshot = {c: v for c, v in row_b.items() if c != a}
        col_snapshot = {f: v for f, v in col_a.items() if f != b}
        touched = set()
        for c, cb in row_snapshot.items():
            lam = cb * eps
            bc = bd[c]
            for f, fa in col_a.items():
                nv = bc.get(f, 0) - lam * fa
                if nv:
                    bc[f] = nv
                    cob[f][c] = nv
                else:
                    bc.pop(f, None)
                    cob[f].pop(c, None)
            touched.add(c)
        # remove a and b from the complex
        for f in list(bd[a]):
            cob[f].pop(a, None)
            touched.add(f)
        for d in list(cob[a]):
            bd[d].pop(a, None)
            touched.add(d)
        for f in list(bd[b]):
            cob[f].pop(b, None)
            touched.add(f)
        for d in list(cob[b]):
            bd[d].pop(b, None)
            touched.add(d)
        bd[a] = {}
        cob[a] = {}
        bd[b] = {}
        cob[b] = {}
        self.alive[a] = self.alive[b] = False
        r = len(self.records)
        self.records.append((a, b, eps, col_snapshot, row_snapshot))
        self.removed_at[a] = r
        self.removed_at[b] = r
        touched.discard(a)
        touched.discard(b)
        queue.extend(sorted(touched))
        if self.heap:
            for c in touched:
                self._push_pairs(c)

    def _run(self):
        queue = deque(range(self.ncells))
        while True:
            while queue:
                c = queue.popleft()
                pair = self._free_pair(c)
                if pair is not None:
                    self._reduce(*pair, queue)
            if not self.heap:
                for a in range(self.ncells):
                    if self.alive[a]:
                        self._push_pairs(a)
            pair = self._cheapest_pair()
            if pair is None:
                break
            self._reduce(*pair, queue)

    def survivors(self, dim: int) -> list[int]:
        return [c for c in range(self.ncells) if self.alive[c] and self.dims[c] == dim]

    def project(self, chain: dict[int, int]) -> dict[int, int]:
        """Image of a chain under the composite projection onto surviving cells."""
        x = {c: v for c, v in chain.items() if v}
        removed_at = self.removed_at
        heap = [(removed_at[c], c) for c in x if c in removed_at]
        heapq.heapify(heap)
        records = self.records
        while heap:
            r, c = heapq.heappop(heap)
            coef = x.pop(c, 0)
            if not coef:
                continue
            a, b, eps, col_a, _ = records[r]
            if c == b:
                k = coef * eps
                for f, v in col_a.items():
                    nv = x.get(f, 0) - k * v
                    if nv:
                        if f not in x and f in removed_at:
                            heapq.heappush(heap, (removed_at[f], f))
                        x[f] = nv
                    else:
                        x.pop(f, None)
            # c == a: the paired upper cell projects to zero
        return x

    def lift(self, chain: dict[int, int], dim: int) -> dict[int, int]:
        """Image of a chain on surviving cells under the composite inclusion."""
        x = {c: v for c, v in chain.items() if v}
        dims = self.dims
        for a, b, eps, _, row_b in reversed(self.records):
            if dims[a] != dim:
                continue
            lam = 0
            if len(row_b) < len(x):
                for c, v in row_b.items():
                    xc = x.get(c)
                    if xc:
                        lam += xc * v
            else:
                for c, xc in x.items():
                    v = row_b.get(c)
                    if v:
                        lam += xc * v
            if lam:
                x[a] = -lam * eps
        return x
