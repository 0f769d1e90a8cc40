"""Pieces: subgraphs with boundary vertices, holes, and parent maps.

A piece keeps every parent edge assigned to its side plus *virtual*
infinite-length closure edges along the splitting cycle, so piece graphs stay
connected and the new hole is a single face whose walk is exactly the cycle.
Virtual edges never shorten distances and are excluded from edge accounting
(``parent_edge[e] == -1``).

Faces of a piece carry labels: ``-1`` marks a hole (a face that is not a face
of the root graph); fragments of a labelled face clipped by a cycle keep the
label, fragments of a hole stay holes.
"""
from __future__ import annotations

import numpy as np

from .errors import NotACycle, NotSimple
from .planar import INF, PlanarGraph, Triangulation, triangulate_all


class Piece:
    __slots__ = ("graph", "boundary", "parent_edge", "root_edge",
                 "to_parent_vertex", "to_root_vertex")

    def __init__(self, graph, boundary, parent_edge, root_edge,
                 to_parent_vertex, to_root_vertex):
        self.graph = graph
        self.boundary = np.asarray(boundary, dtype=np.int64)
        self.parent_edge = np.asarray(parent_edge, dtype=np.int64)
        self.root_edge = np.asarray(root_edge, dtype=np.int64)
        self.to_parent_vertex = np.asarray(to_parent_vertex, dtype=np.int64)
        self.to_root_vertex = np.asarray(to_root_vertex, dtype=np.int64)

    @classmethod
    def from_graph(cls, g: PlanarGraph) -> "Piece":
        ident = np.arange(g.num_vertices, dtype=np.int64)
        eid = np.arange(g.num_edges, dtype=np.int64)
        return cls(g, np.empty(0, dtype=np.int64), eid, eid.copy(), ident,
                   ident.copy())

    @property
    def n(self) -> int:
        return self.graph.num_vertices

    @property
    def b(self) -> int:
        return len(self.boundary)

    def holes(self) -> list[int]:
        return self.graph.holes()

    def real_edges(self) -> np.ndarray:
        """Local edge ids backed by a root-graph edge (excludes virtuals)."""
        return np.flatnonzero(self.root_edge >= 0)

    def real_root_edges(self) -> np.ndarray:
        """Root-graph edge ids of this piece's real edges."""
        return self.root_edge[self.root_edge >= 0]


def split_by_cycle_darts(piece: Piece, tri: Triangulation, cycle_darts):
    """Split a piece along a simple cycle in its triangulation.

    Returns (side_a, side_b, cycle_vertices) where side_a is the side on the
    left of ``cycle_darts[0]``.  Real edges coinciding with the cycle go to
    side_a; both sides receive the full cycle as closure edges.
    """
    tg = tri.graph
    k = len(cycle_darts)
    if k < 2:
        raise NotACycle("cycle needs at least two darts")
    cyc_tails = [tg.tail(d) for d in cycle_darts]
    for j, d in enumerate(cycle_darts):
        if tg.head(d) != cyc_tails[(j + 1) % k]:
            raise NotACycle(f"darts do not chain at position {j}")
    if len(set(cyc_tails)) != k:
        raise NotSimple("cycle repeats a vertex")
    cyc_edge_set = set(d >> 1 for d in cycle_darts)
    if len(cyc_edge_set) != k:
        raise NotSimple("cycle repeats an edge")

    color = _two_color_faces(tg, cyc_edge_set, int(tg.dart_face[cycle_darts[0]]))
    for d in cycle_darts:
        if color[tg.dart_face[d]] != 0 or color[tg.dart_face[d ^ 1]] != 1:
            raise NotACycle("cycle does not separate the triangulation")

    e_parent = piece.graph.num_edges
    edge_side = np.asarray(
        [color[tg.dart_face[2 * e]] for e in range(e_parent)], dtype=np.int64)
    on_cycle = np.zeros(e_parent, dtype=bool)
    for e in cyc_edge_set:
        if e < e_parent:
            on_cycle[e] = True
            edge_side[e] = 0  # cycle-coincident real edges go to side A

    sides = []
    for s in (0, 1):
        sides.append(_build_side(piece, tg, cycle_darts, cyc_edge_set,
                                 edge_side, on_cycle, s))
    return sides[0], sides[1], cyc_tails


def _two_color_faces(tg, cyc_edge_set, seed_face):
    color = np.full(tg.num_faces, -1, dtype=np.int8)
    color[seed_face] = 0
    stack = [seed_face]
    # adjacency across non-cycle edges
    adj = [[] for _ in range(tg.num_faces)]
    for e in range(tg.num_edges):
        if e in cyc_edge_set:
            continue
        fa, fb = int(tg.dart_face[2 * e]), int(tg.dart_face[2 * e + 1])
        adj[fa].append(fb)
        adj[fb].append(fa)
    while stack:
        f = stack.pop()
        for f2 in adj[f]:
            if color[f2] < 0:
                color[f2] = color[f]
                stack.append(f2)
    color[color < 0] = 1
    return color


def _build_side(piece, tg, cycle_darts, cyc_edge_set, edge_side, on_cycle, s):
    pg = piece.graph
    e_parent = pg.num_edges
    # one side edge per kept triangulation edge: real interior, real closure
    # (side A only), or virtual closure
    side_edge_of = {}
    records = []  # (tail, head, luv, lvu, parent_edge)

    def add(tp_edge, parent_e):
        idx = len(records)
        side_edge_of[tp_edge] = idx
        t, h = int(tg.edge_tail[tp_edge]), int(tg.edge_head[tp_edge])
        if parent_e >= 0:
            luv = int(pg.dart_len[2 * parent_e])
            lvu = int(pg.dart_len[2 * parent_e + 1])
        else:
            luv = lvu = INF
        records.append((t, h, luv, lvu, parent_e))

    for e in range(e_parent):
        if not on_cycle[e] and edge_side[e] == s:
            add(e, e)
    for d in cycle_darts:
        e = d >> 1
        if e < e_parent and s == 0:
            add(e, e)
        else:
            add(e, -1)

    verts = sorted(set(t for t, h, *_ in records) | set(h for t, h, *_ in records))
    local = {v: i for i, v in enumerate(verts)}
    nv = len(verts)
    edge_tail = np.asarray([local[r[0]] for r in records], dtype=np.int64)
    edge_head = np.asarray([local[r[1]] for r in records], dtype=np.int64)
    dart_len = np.empty(2 * len(records), dtype=np.int64)
    dart_len[0::2] = [r[2] for r in records]
    dart_len[1::2] = [r[3] for r in records]
    parent_edge = np.asarray([r[4] for r in records], dtype=np.int64)
    root_edge = np.asarray(
        [int(piece.root_edge[pe]) if pe >= 0 else -1 for *_, pe in records],
        dtype=np.int64)

    # inherited rotations: walk the triangulation order, keep present edges
    rot_next = np.full(2 * len(records), -1, dtype=np.int64)
    vertex_dart = np.full(nv, -1, dtype=np.int64)
    for v in verts:
        first = None
        prev = None
        for d in tg.rotation(v):
            se = side_edge_of.get(d >> 1)
            if se is None:
                continue
            sd = 2 * se + (d & 1)
            if first is None:
                first = sd
                vertex_dart[local[v]] = sd
            else:
                rot_next[prev] = sd
            prev = sd
        rot_next[prev] = first

    graph = PlanarGraph(nv, edge_tail, edge_head, dart_len, rot_next,
                        vertex_dart, face_label=None)

    closure_darts = set()
    for d in cycle_darts:
        closure_darts.add(2 * side_edge_of[d >> 1] + (d & 1))
        closure_darts.add((2 * side_edge_of[d >> 1] + (d & 1)) ^ 1)
    d0 = cycle_darts[0]
    hole_entry = 2 * side_edge_of[d0 >> 1] + (d0 & 1)
    if s == 0:
        hole_entry ^= 1  # side A sees the merged far side across twin(d0)
    new_hole_face = int(graph.dart_face[hole_entry])

    labels = np.empty(graph.num_faces, dtype=np.int64)
    for f in range(graph.num_faces):
        walk = graph.face_walk(f)
        lab = None
        all_closure = True
        for d in walk:
            if d in closure_darts:
                continue
            all_closure = False
            pe = int(parent_edge[d >> 1])
            pd = 2 * pe + (d & 1)
            lab = int(pg.face_label[pg.dart_face[pd]])
            break
        if f == new_hole_face or all_closure:
            labels[f] = -1
        else:
            labels[f] = lab
    graph.face_label = labels

    cyc_vert_set = set(tg.tail(d) for d in cycle_darts)
    bset = set(int(v) for v in piece.boundary if v in local) | cyc_vert_set
    boundary = np.asarray(sorted(local[v] for v in bset), dtype=np.int64)
    to_parent = np.asarray(verts, dtype=np.int64)
    to_root = piece.to_root_vertex[to_parent]
    return Piece(graph, boundary, parent_edge, root_edge, to_parent, to_root)


def split_by_cycle(piece: Piece, cycle_vertices):
    """Split along a vertex cycle resolved in the piece's triangulation.

    Consecutive vertices are joined by the smallest connecting dart of the
    triangulation.  Prefer :func:`split_by_cycle_darts` when the cycle came
    from the separator (it already knows its darts).
    """
    if len(set(cycle_vertices)) != len(cycle_vertices):
        raise NotSimple("cycle repeats a vertex")
    tri = triangulate_all(piece.graph)
    tg = tri.graph
    out_darts = {}
    for d in range(2 * tg.num_edges):
        key = (tg.tail(d), tg.head(d))
        if key not in out_darts:
            out_darts[key] = d
    darts = []
    k = len(cycle_vertices)
    for j in range(k):
        a, b = cycle_vertices[j], cycle_vertices[(j + 1) % k]
        d = out_darts.get((a, b))
        if d is None:
            raise NotACycle(f"no edge from {a} to {b} in the triangulation")
        darts.append(d)
    return split_by_cycle_darts(piece, tri, darts)
