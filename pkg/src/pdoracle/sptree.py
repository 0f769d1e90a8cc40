"""Shortest-path trees with embedding-consistent preorder numbering.

The DFS visits children in clockwise rotation order starting from the dart
following the parent dart, so preorder comparisons answer "does the path to v
leave the path to a reference corner on its left or right".

``side_of_path`` classifies a vertex against the root-to-corner path of a
face, where the reference endpoint is conceptually an artificial leaf hanging
inside the face at one of its corners.  The leaf is implicit: a corner is a
pair (attachment vertex y, anchor), the anchor being the largest preorder
visited before the DFS would reach that corner.  Then

* OnPath  <=> v is an ancestor of y (the leaf's parent),
* Right   <=> preorder(v) > anchor,
* Left    otherwise.
"""
from __future__ import annotations

from enum import Enum

import numpy as np

from .errors import UnknownFace
from .kernels import INF, build_csr, sssp
from .pieces import Piece
from .planar import PlanarGraph


class PathSide(Enum):
    LEFT = -1
    ON_PATH = 0
    RIGHT = 1


class SPTree:
    __slots__ = ("graph", "root", "root_start", "dist", "parent_dart", "pre",
                 "last", "hole_faces")

    def __init__(self, graph, root, root_start, dist, parent_dart, pre, last,
                 hole_faces):
        self.graph = graph
        self.root = root
        self.root_start = root_start
        self.dist = dist
        self.parent_dart = parent_dart
        self.pre = pre
        self.last = last
        self.hole_faces = hole_faces

    def entry_dart(self, v: int) -> int:
        """Dart from which v's clockwise child scan starts.

        For the root of a site tree this is the hole-walk dart leaving the
        root: the reference paths conceptually exit into the hole there, so
        the hole corner acts as the root's parent side.
        """
        pd = self.parent_dart[v]
        return self.root_start if pd < 0 else (int(pd) ^ 1)


def build_sptree(piece_or_graph, root: int, with_artificial: bool = True,
                 hole=None, csr=None, big=None) -> SPTree:
    """Shortest-path tree rooted at ``root`` with preorder numbering.

    ``hole`` designates the face whose corners carry no location data (for a
    Piece the hole faces are taken from its labels).  ``with_artificial`` is
    kept for symmetry; corner data is derived lazily so it costs nothing.
    """
    if isinstance(piece_or_graph, Piece):
        g = piece_or_graph.graph
        hole_faces = set(piece_or_graph.holes())
    else:
        g = piece_or_graph
        hole_faces = set(g.holes())
    if hole is not None:
        hole_faces.add(int(hole))
    if csr is None:
        csr = build_csr(g, big=big)
    dist, parent, _ = sssp(csr, g.num_vertices, root)
    root_start = int(g.vertex_dart[root])
    if hole is not None:
        for d in g.face_walk(int(hole)):
            if g.tail(d) == root:
                root_start = d
                break
    tree = SPTree(g, root, root_start, dist, parent, None, None,
                  frozenset(hole_faces))
    tree.pre, tree.last = _preorder(tree)
    return tree


def _tree_children(t, v):
    """Outgoing tree darts of v in clockwise order from the entry dart."""
    g = t.graph
    e0 = t.entry_dart(v)
    out = []
    d = e0
    while True:
        head = g.head(d)
        if t.parent_dart[head] == d:
            out.append(d)
        d = int(g.rot_next[d])
        if d == e0:
            break
    return out


def _preorder(t):
    g = t.graph
    n = g.num_vertices
    pre = np.full(n, -1, dtype=np.int64)
    last = np.full(n, -1, dtype=np.int64)
    counter = 0
    stack = [(t.root, None)]
    while stack:
        v, it = stack.pop()
        if it is None:
            pre[v] = counter
            counter += 1
            it = iter(_tree_children(t, v))
        child = next(it, None)
        if child is None:
            last[v] = counter - 1
            continue
        stack.append((v, it))
        stack.append((int(g.head(child)), None))
    return pre, last


def tree_dist(t: SPTree, v: int) -> int:
    return int(t.dist[v])


def is_ancestor(t: SPTree, u: int, v: int) -> bool:
    """Reflexive ancestor test via preorder intervals."""
    return bool(t.pre[u] <= t.pre[v] <= t.last[u])


def preorder_cmp(t: SPTree, u: int, v: int) -> int:
    a, b = int(t.pre[u]), int(t.pre[v])
    return -1 if a < b else (0 if a == b else 1)


def corner_after_dart(g: PlanarGraph, f: int, pos: int):
    """The corner of face f at walk position ``pos`` as (vertex, after-dart).

    The corner at ``pos`` sits at the tail of ``walk[pos]``, wedged between
    ``twin(walk[pos-1])`` and ``walk[pos]`` in the clockwise rotation.
    """
    walk = g.face_walk(f)
    y = g.tail(walk[pos])
    return y, walk[pos - 1] ^ 1


def corner_anchor(t: SPTree, y: int, after_dart: int) -> int:
    """Largest preorder visited before the corner following ``after_dart``."""
    g = t.graph
    e0 = t.entry_dart(y)
    cur = int(t.pre[y])
    d = e0
    while True:
        head = g.head(d)
        if t.parent_dart[head] == d:
            cur = int(t.last[head])
        if d == after_dart:
            return cur
        d = int(g.rot_next[d])
        if d == e0:
            raise ValueError(f"dart {after_dart} not around vertex {y}")


def side_at_corner(t: SPTree, y: int, anchor: int, v: int) -> PathSide:
    if is_ancestor(t, v, y):
        return PathSide.ON_PATH
    return PathSide.RIGHT if t.pre[v] > anchor else PathSide.LEFT


def side_of_path(t: SPTree, f: int, v: int) -> PathSide:
    """Side of v relative to the root path into face f.

    The reference corner is the face corner closest to the root, ties by
    vertex id; holes carry no corner data.
    """
    if f in t.hole_faces or t.graph.face_label[f] < 0:
        raise UnknownFace(f"face {f} is a hole")
    walk = t.graph.face_walk(f)
    best = None
    for pos, d in enumerate(walk):
        y = t.graph.tail(d)
        key = (int(t.dist[y]), y, pos)
        if best is None or key < best[0]:
            best = (key, pos)
    y, after = corner_after_dart(t.graph, f, best[1])
    return side_at_corner(t, y, corner_anchor(t, y, after), v)
