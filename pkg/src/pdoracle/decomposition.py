"""Recursive separator decompositions and r-divisions.

Levels rotate the balancing target: level % 3 == 0 balances vertex count,
== 1 boundary-vertex count, == 2 hole count (one unit of weight on the
smallest vertex of each hole walk).  Degenerate targets (no boundary, fewer
than two holes) fall back to vertex count, which is what drives progress.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .pieces import Piece, split_by_cycle_darts
from .planar import triangulate_all
from .separators import cycle_separator_darts

H_MAX = 10          # asserted hole budget per piece
RDIV_N_FACTOR = 2   # r-division pieces have at most 2r vertices
RDIV_B_FACTOR = 6   # ... and at most 6 sqrt(r) boundary vertices
MIN_SPLIT_N = 5     # never split pieces smaller than this


@dataclass
class DecompositionNode:
    piece: Piece
    level: int
    node_id: int = -1
    separator: list = None          # root-graph vertex ids, leaves: None
    children: tuple = ()
    forced_leaf: bool = False
    round_ref: int = -1             # n at the most recent earlier %3==0 level

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass
class DecompositionTree:
    root: DecompositionNode
    nodes: list = field(default_factory=list)  # preorder

    def leaves(self):
        return [nd for nd in self.nodes if nd.is_leaf]


_HOLE_PRESSURE = 5  # boundary levels switch to hole balancing beyond this


def _hole_weights(piece: Piece):
    g = piece.graph
    holes = piece.holes()
    if len(holes) < 2:
        return None
    w = np.zeros(piece.n, dtype=np.float64)
    for f in holes:
        w[min(g.tail(d) for d in g.face_walk(f))] = 1.0
    return w


def _weights_for(piece: Piece, level: int) -> np.ndarray:
    if level % 3 == 1:
        # keep the hole budget in check before balancing boundary vertices;
        # vertex-count levels are never overridden so progress is unaffected
        if len(piece.holes()) >= _HOLE_PRESSURE:
            w = _hole_weights(piece)
            if w is not None:
                return w
        if piece.b > 0:
            w = np.zeros(piece.n, dtype=np.float64)
            w[piece.boundary] = 1.0
            return w
    if level % 3 == 2:
        w = _hole_weights(piece)
        if w is not None:
            return w
    return np.ones(piece.n, dtype=np.float64)


def decompose(root_piece: Piece, stop) -> DecompositionTree:
    """Generic engine: split until ``stop(piece)`` or no progress."""
    root = DecompositionNode(root_piece, 0)
    nodes = []
    stack = [root]
    while stack:
        nd = stack.pop()
        nd.node_id = len(nodes)
        nodes.append(nd)
        p = nd.piece
        if stop(p) or p.n < MIN_SPLIT_N:
            continue
        # vertex counts only shrink at %3==0 levels; a full round without
        # progress means the schedule is stuck on this piece
        if nd.level % 3 == 0 and 0 <= nd.round_ref <= p.n:
            nd.forced_leaf = True
            continue
        ref = p.n if nd.level % 3 == 0 else nd.round_ref
        tri = triangulate_all(p.graph)
        # diagonals filling a hole would fragment it if the cycle used them
        hole_diag = np.zeros(tri.graph.num_edges, dtype=bool)
        host = tri.edge_host_face
        added = host >= 0
        hole_diag[added] = p.graph.face_label[host[added]] < 0
        darts = cycle_separator_darts(tri.graph, _weights_for(p, nd.level),
                                      edge_penalty=hole_diag)
        side_a, side_b, cyc = split_by_cycle_darts(p, tri, darts)
        nd.separator = [int(p.to_root_vertex[v]) for v in cyc]
        ca = DecompositionNode(side_a, nd.level + 1, round_ref=ref)
        cb = DecompositionNode(side_b, nd.level + 1, round_ref=ref)
        nd.children = (ca, cb)
        stack.append(cb)
        stack.append(ca)
    return DecompositionTree(root, nodes)


def build_decomposition(g_or_piece, terminal_size: int) -> DecompositionTree:
    piece = g_or_piece if isinstance(g_or_piece, Piece) \
        else Piece.from_graph(g_or_piece)
    return decompose(piece, lambda p: p.n <= terminal_size)


@dataclass
class RDivision:
    pieces: list
    boundary_count: int
    host: Piece
    tree: DecompositionTree

    def piece_of_vertex(self):
        """Map host-local vertex -> index of the first piece containing it."""
        owner = np.full(self.host.n, -1, dtype=np.int64)
        host_root = {int(r): i for i, r in enumerate(self.host.to_root_vertex)}
        for pi, pc in enumerate(self.pieces):
            for r in pc.to_root_vertex:
                hv = host_root[int(r)]
                if owner[hv] < 0:
                    owner[hv] = pi
        return owner


def build_r_division(piece: Piece, r: int) -> RDivision:
    if r < 1:
        raise ValueError("r must be >= 1")
    b_cap = RDIV_B_FACTOR * math.sqrt(r)

    def stop(p):
        return p.n <= RDIV_N_FACTOR * r and p.b <= b_cap

    tree = decompose(piece, stop)
    leaves = [nd.piece for nd in tree.leaves()]
    bcount = sum(p.b for p in leaves)
    return RDivision(leaves, bcount, piece, tree)


def node_stats(tree: DecompositionTree) -> list[dict]:
    out = []
    for nd in tree.nodes:
        if nd.piece is not None:
            n, b, holes = nd.piece.n, nd.piece.b, len(nd.piece.holes())
        else:  # reloaded tree: piece graphs were not persisted
            n, b, holes = nd.stats_nbh
        out.append({
            "id": nd.node_id,
            "level": nd.level,
            "n": n,
            "b": b,
            "holes": holes,
            "separator_len": len(nd.separator) if nd.separator else 0,
        })
    return out
