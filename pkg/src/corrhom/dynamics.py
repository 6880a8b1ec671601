"""Time series, the Henon orbit, the noisy double-winding sampler, and annulus grids."""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .correspondence import CombinatorialMap, EmptyValue, SampleSet
from .cubical import GridGeometry


class Diverged(ArithmeticError):
    pass


class OutOfBounds(ValueError):
    pass


class DegenerateProjection(ArithmeticError):
    pass


@dataclass
class TimeSeries:
    """Ordered points in R^d."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1) if pts.size else pts.reshape(0, 1)
        if pts.ndim != 2:
            raise ValueError("a time series is a 2-d array of points")
        if not np.all(np.isfinite(pts)):
            raise ValueError("time series coordinates must be finite")
        self.points = pts

    def __len__(self):
        return len(self.points)

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    def bounds(self) -> list[tuple[float, float]]:
        return [(float(lo), float(hi)) for lo, hi in zip(self.points.min(axis=0), self.points.max(axis=0))]


def henon_step(a: float, b: float, x: float, y: float) -> tuple[float, float]:
    # evaluation order is fixed: ((1 - (a*x)*x) + y, b*x)
    return 1.0 - a * x * x + y, b * x


def henon_orbit(a: float = 1.4, b: float = 0.3, x0: Sequence[float] = (0.0, 0.0), skip: int = 100,
                n: int = 100000, escape: float = 1e6) -> TimeSeries:
    """Points ``x_skip, ..., x_n`` of the orbit of ``x0`` (``x_0 = x0``)."""
    if n <= skip or skip < 0:
        raise ValueError("need 0 <= skip < n")
    a, b = float(a), float(b)
    x, y = float(x0[0]), float(x0[1])
    out = np.empty((n - skip + 1, 2))
    for i in range(n + 1):
        if i >= skip:
            out[i - skip] = (x, y)
        if i == n:
            break
        x, y = henon_step(a, b, x, y)
        if not (abs(x) <= escape and abs(y) <= escape):
            raise Diverged(f"orbit left the escape box |.| <= {escape} at step {i + 1}")
    return TimeSeries(out)


def _cells_of_points(grid: GridGeometry, pts: np.ndarray) -> list[list[tuple[int, ...]]]:
    if pts.shape[1] != grid.dimension:
        raise ValueError("point dimension does not match grid")
    out = []
    for p in pts:
        cells = grid.cells_containing(p)
        if not cells:
            raise OutOfBounds(f"point {tuple(float(v) for v in p)} lies outside the grid {grid.bounds}")
        out.append(cells)
    return out


def grid_from_points(grid: GridGeometry, pts: TimeSeries | np.ndarray) -> set[tuple[int, ...]]:
    """All closed grid cells containing at least one point."""
    arr = pts.points if isinstance(pts, TimeSeries) else np.asarray(pts, dtype=float)
    cells: set = set()
    for c in _cells_of_points(grid, arr):
        cells.update(c)
    return cells


@dataclass
class TimeSeriesMap:
    map: CombinatorialMap
    dropped: list  # cells hit only by the final point


def map_from_time_series(grid: GridGeometry, cells: Iterable | None, ts: TimeSeries,
                         strict: bool = False) -> TimeSeriesMap:
    """``eta in F(xi)`` iff ``x_i in |xi|`` and ``x_{i+1} in |eta|`` for some ``i``.

    The last point has no successor, so a cell it alone occupies gets no
    value; such cells are dropped from the domain (and reported), or raise
    EmptyValue with ``strict``.  The domain subset is empty and the codomain
    equals the given cell set.
    """
    per_point = _cells_of_points(grid, ts.points)
    if cells is None:
        cells = {c for cs in per_point for c in cs}
    cells = frozenset(tuple(c) for c in cells)
    values: dict = {}
    for cur, nxt in zip(per_point, per_point[1:]):
        targets = [c for c in nxt if c in cells]
        if not targets:
            raise OutOfBounds("a successor point lies outside the given cells")
        for xi in cur:
            if xi in cells:
                values.setdefault(xi, set()).update(targets)
    dropped = sorted(cells - set(values))
    if dropped and strict:
        raise EmptyValue(f"{len(dropped)} cells are hit only by the final point, e.g. {dropped[0]}")
    m = CombinatorialMap(grid, grid, frozenset(values), frozenset(), cells, frozenset(), values)
    return TimeSeriesMap(m, dropped)


def double_winding(theta: np.ndarray, noise_vec: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Points on the circle and radial projections of their (perturbed) double-winding images."""
    theta = np.asarray(theta, dtype=float)
    xs = np.column_stack([np.cos(theta), np.sin(theta)])
    ys = np.column_stack([np.cos(2 * theta), np.sin(2 * theta)])
    if noise_vec is not None:
        ys = ys + noise_vec
    norms = np.hypot(ys[:, 0], ys[:, 1])
    if np.any(norms == 0):
        raise DegenerateProjection("a perturbed image is the origin")
    return xs, ys / norms[:, None]


@dataclass
class WindingSample:
    samples: SampleSet
    theta: np.ndarray
    retries: int


def winding_sampler(samples: int = 3000, noise: float = 0.1, seed: int = 0) -> WindingSample:
    """Noisy samples of the double winding of the unit circle.

    Uses numpy's PCG64 generator: all angles are drawn first, then the
    noise vectors, uniform in ``[-noise, noise]^2``.  An image landing on
    the origin is redrawn (angle and noise) and counted in ``retries``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if noise < 0:
        raise ValueError("noise must be >= 0")
    rng = np.random.Generator(np.random.PCG64(seed))
    theta = rng.uniform(0.0, 2 * math.pi, samples)
    eps = rng.uniform(-noise, noise, (samples, 2)) if noise > 0 else np.zeros((samples, 2))
    retries = 0
    while True:
        ys = np.column_stack([np.cos(2 * theta), np.sin(2 * theta)]) + eps
        bad = np.nonzero(np.hypot(ys[:, 0], ys[:, 1]) == 0)[0]
        if not len(bad):
            break
        retries += len(bad)
        theta[bad] = rng.uniform(0.0, 2 * math.pi, len(bad))
        eps[bad] = rng.uniform(-noise, noise, (len(bad), 2))
    xs, ys = double_winding(theta, eps)
    return WindingSample(SampleSet(xs, ys), theta, retries)


def _norm_range(box: Sequence[tuple[float, float]]) -> tuple[float, float]:
    near, far = 0.0, 0.0
    for lo, hi in box:
        near += 0.0 if lo <= 0 <= hi else min(lo * lo, hi * hi)
        far += max(lo * lo, hi * hi)
    return math.sqrt(near), math.sqrt(far)


def annulus_cells(grid: GridGeometry, radius_tol: float, radius: float = 1.0) -> set[tuple[int, ...]]:
    """Cells meeting the set of points within sup-norm distance ``radius_tol`` of the circle.

    A point is that close iff the sup-norm ball around it meets the circle,
    so a cell qualifies iff its box widened by ``radius_tol`` meets the
    circle, i.e. the Euclidean norm over the widened box attains ``radius``.
    """
    if radius_tol <= 0:
        raise ValueError("radius_tol must be positive")
    out = set()
    for cell in grid.all_cells():
        box = [(lo - radius_tol, hi + radius_tol) for lo, hi in grid.cell_box(cell)]
        near, far = _norm_range(box)
        if near <= radius <= far:
            out.add(cell)
    return out


def read_points(path: str | Path) -> TimeSeries:
    """Whitespace-separated coordinates, one point per line; ``#`` starts a comment."""
    rows = []
    width = None
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            row = [float(t) for t in line.split()]
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ValueError(f"{path}:{lineno}: expected {width} coordinates, got {len(row)}")
        rows.append(row)
    return TimeSeries(np.array(rows) if rows else np.zeros((0, 1)))


def write_points(path: str | Path, ts: TimeSeries) -> None:
    with open(path, "w") as fh:
        for p in ts.points:
            fh.write(" ".join(repr(float(v)) for v in p) + "\n")


def winding_number(grid: GridGeometry, chain: dict, center: Sequence[float] = (0.0, 0.0)) -> int:
    """Winding number about ``center`` of a planar 1-cycle given on cube keys.

    Each edge contributes its signed angle increment; edges are short
    compared with their distance to the center, so the sum is exact after
    rounding.
    """
    total = 0.0
    cx, cy = center
    for key, coef in chain.items():
        if not coef:
            continue
        i = 0 if key[0] & 1 else 1
        start = [grid.edge(ax, c // 2) for ax, c in enumerate(key)]
        end = list(start)
        end[i] = grid.edge(i, key[i] // 2 + 1)
        a0 = math.atan2(start[1] - cy, start[0] - cx)
        a1 = math.atan2(end[1] - cy, end[0] - cx)
        d = (a1 - a0 + math.pi) % (2 * math.pi) - math.pi
        total += coef * d
    w = total / (2 * math.pi)
    if abs(w - round(w)) > 1e-6:
        raise ValueError("chain is not a cycle, or passes through the center")
    return int(round(w))
