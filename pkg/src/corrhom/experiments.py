"""End-to-end runs of the Henon and double-winding experiments."""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .correspondence import CombinatorialMap, EmptyValue, SampleSet, contains_samples, sample_induced_map
from .covers import acyclic_enlargement, is_acyclic_valued, sliding_box_cover
from .cubical import CubicalPair, GridGeometry
from .dynamics import (
    TimeSeries,
    annulus_cells,
    double_winding,
    henon_orbit,
    map_from_time_series,
    winding_number,
    winding_sampler,
)
from .homology import homology
from .induced import (
    InducedHomReport,
    NotEndomorphism,
    analyze,
    is_enlargement,
    nilpotency_check,
    selector_conclusion,
    verify_homological_extension,
)


@dataclass
class HenonConfig:
    a: float = 1.4
    b: float = 0.3
    x0: tuple[float, float] = (0.0, 0.0)
    n: int = 100000
    skip: int = 100
    divisions: int = 256
    bounds: tuple[float, float] = (-2.0, 2.0)


@dataclass
class HenonResult:
    config: HenonConfig
    orbit: TimeSeries
    grid: GridGeometry
    map: CombinatorialMap
    dropped: list
    report: InducedHomReport
    nilpotent: bool | None
    nilpotency_error: str | None
    seconds: float

    def summary(self) -> dict:
        r = self.report
        return {
            "cells": len(self.map.codomain),
            "dropped_cells": len(self.dropped),
            "orbit_bounds": self.orbit.bounds(),
            "betti_X": r.domain_homology.betti_numbers(),
            "betti_graph": r.graph_homology.betti_numbers(),
            "rank_p1": r.rank_p(1) if len(r.degrees) > 1 else 0,
            "complete": r.complete,
            "consistent": r.consistent,
            "nilpotent": self.nilpotent,
            "nilpotency_error": self.nilpotency_error,
            "verdict": selector_conclusion(self.map, report=r).kind,
        }


def run_henon(cfg: HenonConfig = HenonConfig()) -> HenonResult:
    t0 = time.perf_counter()
    orbit = henon_orbit(cfg.a, cfg.b, cfg.x0, cfg.skip, cfg.n)
    lo, hi = cfg.bounds
    grid = GridGeometry(((lo, hi), (lo, hi)), (cfg.divisions, cfg.divisions))
    tsm = map_from_time_series(grid, None, orbit)
    report = analyze(tsm.map)
    nilpotent, err = None, None
    try:
        nilpotent = nilpotency_check(report, 1) if len(report.degrees) > 1 else True
    except NotEndomorphism as exc:
        err = str(exc)
    return HenonResult(cfg, orbit, grid, tsm.map, tsm.dropped, report, nilpotent, err,
                       time.perf_counter() - t0)


def occupancy_pgm(grid: GridGeometry, cells) -> bytes:
    """Binary PGM (P5): one pixel per cell, black if occupied, first row at the top of the y-axis."""
    nx, ny = grid.divisions
    img = np.full((ny, nx), 255, dtype=np.uint8)
    for i, j in cells:
        img[ny - 1 - j, i] = 0
    return f"P5\n{nx} {ny}\n255\n".encode("ascii") + img.tobytes()


@dataclass
class WindingConfig:
    samples: int = 3000
    noise: float = 0.1
    seed: int = 0
    divisions: int = 256
    bounds: tuple[float, float] = (-2.0, 2.0)
    tol: float = 0.01
    window: int = 32  # sliding box size for the enlargement


@dataclass
class WindingResult:
    config: WindingConfig
    grid: GridGeometry
    band: frozenset
    samples: SampleSet
    retries: int
    map: CombinatorialMap
    report: InducedHomReport
    enlargement: CombinatorialMap | None
    enlargement_report: InducedHomReport | None
    contains_f: bool
    clean_map_contains_samples: bool
    degree: int | None
    verdict: object
    extension: object
    seconds: float
    notes: list = field(default_factory=list)

    def summary(self) -> dict:
        r = self.report
        er = self.enlargement_report
        return {
            "band_cells": len(self.band),
            "domain_cells": len(self.map.domain),
            "retries": self.retries,
            "betti_X": r.domain_homology.betti_numbers(),
            "betti_Y": r.codomain_homology.betti_numbers(),
            "betti_graph": r.graph_homology.betti_numbers(),
            "complete": r.complete,
            "consistent": r.consistent,
            "induced_degree1": r.induced_matrix[1].tolist() if len(r.degrees) > 1 else [],
            "oriented_degree": self.degree,
            "contains_f": self.contains_f,
            "clean_map_contains_samples": self.clean_map_contains_samples,
            "enlargement": None if er is None else {
                "window": self.config.window,
                "acyclic_valued": is_acyclic_valued(self.enlargement).acyclic,
                "is_enlargement": is_enlargement(self.map, self.enlargement),
                "complete": er.complete,
                "consistent": er.consistent,
                "homological_extension": bool(self.extension),
            },
            "verdict": self.verdict.kind,
            "verdict_detail": self.verdict.conclusion,
            "notes": self.notes,
        }


def oriented_degree(report: InducedHomReport) -> int | None:
    """Degree-1 induced map on circle-like pairs with both generators turned counterclockwise.

    Returns None unless H_1 of both pairs is Z, the map is complete in
    degree 1, and the target quotient is Z generated by the codomain class.
    """
    if len(report.degrees) < 2:
        return None
    d = report.degrees[1]
    hx, hy = report.domain_homology[1], report.codomain_homology[1]
    if hx.betti != 1 or hx.rank != 1 or hy.betti != 1 or hy.rank != 1 or not d.complete:
        return None
    qt = d.quotient_target
    if qt.presentation.generators != 1 or qt.presentation.orders() != [0]:
        return None
    wx = winding_number(report.map.source_grid, hx.generators[0])
    wy = winding_number(report.map.target_grid, hy.generators[0])
    s = qt.projection.apply([wy])[0]  # counterclockwise class of Y in quotient coordinates
    if wx not in (1, -1) or s not in (1, -1):
        return None
    return wx * report.evaluate(1, [1])[0] * s


def run_winding(cfg: WindingConfig = WindingConfig(), enlarge: bool = True) -> WindingResult:
    t0 = time.perf_counter()
    lo, hi = cfg.bounds
    grid = GridGeometry(((lo, hi), (lo, hi)), (cfg.divisions, cfg.divisions))
    band = frozenset(annulus_cells(grid, cfg.tol))
    ws = winding_sampler(cfg.samples, cfg.noise, cfg.seed)
    m = sample_induced_map(ws.samples, grid, grid, band, (), band, (), drop_unhit=True)
    hx = homology(m.domain_pair())
    if hx.betti_numbers()[:2] != [1, 1] or not all(hx[k].rank == hx[k].betti for k in (0, 1)):
        raise EmptyValue(f"{len(band) - len(m.domain)} of {len(band)} band cells received no sample and "
                         f"the sampled cells do not form a circle (H = {hx.describe()}); raise --samples")
    hy = homology(CubicalPair.from_top_cells(grid, band))
    report = analyze(m, hx, hy)
    xs, ys = double_winding(ws.theta)
    clean = SampleSet(xs, ys)
    contains_f = contains_samples(m, clean)
    clean_map = sample_induced_map(clean, grid, grid, band, (), band, (), drop_unhit=True)
    clean_ok = contains_samples(clean_map, ws.samples)
    g = greport = ext = None
    if enlarge:
        cover = sliding_box_cover(grid, cfg.window, support=band)
        g = acyclic_enlargement(m, cover)
        greport = analyze(g, hx, hy)
        ext = verify_homological_extension(m, g, report, greport)
    verdict = selector_conclusion(m, clean, g, report, greport)
    return WindingResult(cfg, grid, band, ws.samples, ws.retries, m, report, g, greport, contains_f, clean_ok,
                         oriented_degree(report), verdict, ext, time.perf_counter() - t0)


def config_dict(cfg) -> dict:
    return asdict(cfg)
