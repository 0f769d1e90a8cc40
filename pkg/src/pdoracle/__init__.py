"""Exact distance oracles for directed planar graphs.

Distances are answered exactly from structures built around additively
weighted graph Voronoi diagrams over a balanced cycle-separator
decomposition.
"""

from .planar import (INF, PlanarGraph, build_embedded_graph, read_graph,
                     reweight_nonnegative, triangulate, write_graph)
from .pieces import Piece, split_by_cycle

__all__ = [
    "INF",
    "PlanarGraph",
    "Piece",
    "build_embedded_graph",
    "read_graph",
    "reweight_nonnegative",
    "split_by_cycle",
    "triangulate",
    "write_graph",
]
