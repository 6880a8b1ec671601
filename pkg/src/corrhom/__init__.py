"""Homology of combinatorial multivalued maps and closed correspondences on cubical grids."""
from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:
    __version__ = "0.1.0"

from .correspondence import CombinatorialMap, graph_pair, identity_map, sample_induced_map
from .cubical import CubicalComplex, CubicalPair, GridGeometry
from .homology import homology, induced_homomorphism
from .induced import analyze, selector_conclusion, verify_homological_extension
from .zmodule import AbelianPresentation, IntegerMatrix, smith_normal_form

__all__ = [
    "AbelianPresentation",
    "CombinatorialMap",
    "CubicalComplex",
    "CubicalPair",
    "GridGeometry",
    "IntegerMatrix",
    "analyze",
    "graph_pair",
    "homology",
    "identity_map",
    "induced_homomorphism",
    "sample_induced_map",
    "selector_conclusion",
    "smith_normal_form",
    "verify_homological_extension",
]
