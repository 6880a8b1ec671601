"""JSON documents: cubical pairs, combinatorial maps, and analysis reports."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import jsonschema

from .correspondence import CombinatorialMap
from .cubical import CubicalPair, GridGeometry
from .homology import HomologyModule
from .induced import DegreeAnalysis, InducedHomReport
from .zmodule import AbelianPresentation


class ParseError(ValueError):
    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


_GRID = {
    "type": "object",
    "additionalProperties": False,
    "required": ["bounds", "divisions"],
    "properties": {
        "bounds": {"type": "array", "minItems": 1,
                   "items": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}},
        "divisions": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 1}},
    },
}
_CELL = {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 0}}
_CELLS = {"type": "array", "items": _CELL}

PAIR_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["grid", "cells"],
    "properties": {"grid": _GRID, "cells": _CELLS, "subset": _CELLS, "comment": {"type": "string"}},
}

MAP_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["grid_x", "cells_x", "map"],
    "properties": {
        "grid_x": _GRID,
        "grid_y": _GRID,
        "cells_x": _CELLS,
        "subset_a": _CELLS,
        "cells_y": _CELLS,
        "subset_b": _CELLS,
        "map": {"type": "array", "items": {
            "type": "object", "additionalProperties": False, "required": ["from", "to"],
            "properties": {"from": _CELL, "to": {"type": "array", "minItems": 1, "items": _CELL}},
        }},
        "comment": {"type": "string"},
    },
}


def _load_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(str(path), exc.strerror or str(exc)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None


def _validate(doc: Any, schema: dict, where: str) -> None:
    err = jsonschema.exceptions.best_match(jsonschema.Draft202012Validator(schema).iter_errors(doc))
    if err is not None:
        pointer = "/" + "/".join(str(p) for p in err.absolute_path)
        raise ParseError(f"{where}#{pointer}", err.message)


def _grid(d: dict, where: str) -> GridGeometry:
    try:
        return GridGeometry.from_dict(d)
    except ValueError as exc:
        raise ParseError(where, str(exc)) from None


def pair_from_document(doc: dict, where: str = "<document>") -> tuple[GridGeometry, CubicalPair]:
    _validate(doc, PAIR_SCHEMA, where)
    grid = _grid(doc["grid"], f"{where}#/grid")
    cells = [tuple(c) for c in doc["cells"]]
    sub = [tuple(c) for c in doc.get("subset", [])]
    for c in cells + sub:
        grid.check_cell(c)
    return grid, CubicalPair.from_top_cells(grid, cells, sub)


def load_pair(path: str | Path) -> tuple[GridGeometry, CubicalPair]:
    return pair_from_document(_load_json(path), str(path))


def map_from_document(doc: dict, where: str = "<document>") -> CombinatorialMap:
    _validate(doc, MAP_SCHEMA, where)
    gx = _grid(doc["grid_x"], f"{where}#/grid_x")
    gy = _grid(doc["grid_y"], f"{where}#/grid_y") if "grid_y" in doc else gx
    values: dict = {}
    for i, entry in enumerate(doc["map"]):
        key = tuple(entry["from"])
        if key in values:
            raise ParseError(f"{where}#/map/{i}", f"duplicate entry for cell {list(key)}")
        values[key] = [tuple(c) for c in entry["to"]]
    cells_x = {tuple(c) for c in doc["cells_x"]}
    if set(values) != cells_x:
        raise ParseError(f"{where}#/map", "map entries must cover cells_x exactly")
    cells_y = [tuple(c) for c in doc["cells_y"]] if "cells_y" in doc else None
    return CombinatorialMap.build(gx, gy, values, [tuple(c) for c in doc.get("subset_a", [])], cells_y,
                                  [tuple(c) for c in doc.get("subset_b", [])])


def load_map(path: str | Path) -> CombinatorialMap:
    return map_from_document(_load_json(path), str(path))


def map_to_document(m: CombinatorialMap) -> dict:
    return {
        "grid_x": m.source_grid.to_dict(),
        "grid_y": m.target_grid.to_dict(),
        "cells_x": [list(c) for c in sorted(m.domain)],
        "subset_a": [list(c) for c in sorted(m.domain_sub)],
        "cells_y": [list(c) for c in sorted(m.codomain)],
        "subset_b": [list(c) for c in sorted(m.codomain_sub)],
        "map": [{"from": list(xi), "to": [list(c) for c in sorted(m.values[xi])]} for xi in sorted(m.domain)],
    }


def _chain(chain: dict) -> list:
    return [[list(k), v] for k, v in sorted(chain.items())]


def presentation_dict(p: AbelianPresentation) -> dict:
    return {"betti": p.free_rank, "torsion": list(p.invariant_factors), "text": p.describe()}


def homology_section(h: HomologyModule, generators: bool = False) -> list[dict]:
    out = []
    for k, g in enumerate(h.groups):
        entry = {"degree": k, "betti": g.betti, "torsion": g.torsion}
        if generators:
            entry["generators"] = [{"order": o, "chain": _chain(c)} for o, c in zip(g.orders, g.generators)]
        out.append(entry)
    return out


def _witnesses(d: DegreeAnalysis) -> tuple[list | None, list | None]:
    complete_w = None
    if not d.complete:
        n = d.im_p.ambient.generators
        for i in range(n):
            e = [0] * n
            e[i] = 1
            if not d.im_p.contains_element(e):
                complete_w = e
                break
    consistent_w = None
    if not d.consistent:
        for col in d.ker_p.generators_in_ambient.columns():
            if not d.ker_q.contains_element(col):
                consistent_w = col
                break
    return complete_w, consistent_w


def analysis_section(r: InducedHomReport) -> dict:
    degrees = []
    for d in r.degrees:
        cw, kw = _witnesses(d)
        degrees.append({
            "degree": d.degree,
            "p_star": d.p_matrix.tolist(),
            "q_star": d.q_matrix.tolist(),
            "rank_p": d.rank_p,
            "complete": d.complete,
            "consistent": d.consistent,
            "not_in_image_of_p": cw,
            "in_ker_p_not_ker_q": kw,
            "domain_basis": d.domain_basis.tolist(),
            "induced_matrix": d.induced_matrix.tolist(),
            "quotient_target": presentation_dict(d.quotient_target.presentation),
        })
    return {
        "homology": {
            "domain": homology_section(r.domain_homology),
            "codomain": homology_section(r.codomain_homology),
            "graph": homology_section(r.graph_homology),
        },
        "complete": r.complete,
        "consistent": r.consistent,
        "respects_pairs": r.map.respects_pairs,
        "degrees": degrees,
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def text_report(doc: dict, indent: str = "") -> str:
    """Flat ``key: value`` rendering for the text format."""
    lines = []
    for k in sorted(doc):
        v = doc[k]
        if isinstance(v, dict):
            lines.append(f"{indent}{k}:")
            lines.append(text_report(v, indent + "  ").rstrip("\n"))
        elif isinstance(v, list) and v and all(isinstance(x, dict) for x in v):
            for i, x in enumerate(v):
                lines.append(f"{indent}{k}[{i}]:")
                lines.append(text_report(x, indent + "  ").rstrip("\n"))
        else:
            lines.append(f"{indent}{k}: {json.dumps(v)}")
    return "\n".join(lines) + "\n"
