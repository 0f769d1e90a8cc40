"""Additively weighted graph Voronoi diagrams and point location.

Pipeline per (piece, hole): build a :class:`HoleContext` once (working graph
triangulated everywhere except the hole, shortest-path trees per site); then
for each weight vector compute the cell assignment, its dual tree, and a
centroid-decomposition point-location structure of O(sites) size.

The dual tree's nodes are the faces whose three corners lie in three
distinct cells ("real" Voronoi vertices) plus one copy of the hole's dual
vertex per cell transition along the hole walk.  Consecutive copies whose
stretch of hole walk does not contain the site owning it are joined by
artificial edges, which turns the forest into a tree.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegreeViolation, GraphError
from .kernels import (INF, K_COPY, K_LEAF, K_REAL, K_SINGLE, NODE_W,
                      build_csr, graph_big, multi_sssp, pl_locate)
from .pieces import Piece
from .planar import PlanarGraph, triangulate_except
from .sptree import SPTree, build_sptree, corner_anchor


class HoleContext:
    """Weight-independent preprocessing shared by all diagrams of a hole."""

    __slots__ = ("graph", "hole", "walk", "walk_tails", "sites", "site_index",
                 "trees", "dist2d", "pre2d", "last2d", "csr", "id_key",
                 "to_root", "big", "face_darts", "face_tails")

    def __init__(self, graph: PlanarGraph, hole: int, sites, id_key=None,
                 to_root=None, big=None):
        self.graph = graph
        self.hole = int(hole)
        self.walk = graph.face_walk(self.hole)
        self.walk_tails = np.asarray([graph.tail(d) for d in self.walk],
                                     dtype=np.int64)
        self.sites = np.asarray(sites, dtype=np.int64)
        self.site_index = {int(s): i for i, s in enumerate(self.sites)}
        if len(self.site_index) != len(self.sites):
            raise ValueError("duplicate sites")
        on_walk = set(int(t) for t in self.walk_tails)
        for s in self.sites:
            if int(s) not in on_walk:
                raise ValueError(f"site {s} does not lie on the hole walk")
        self.id_key = np.arange(graph.num_vertices, dtype=np.int64) \
            if id_key is None else np.asarray(id_key, dtype=np.int64)
        self.to_root = self.id_key if to_root is None else to_root
        self.big = graph_big(graph) if big is None else int(big)
        self.csr = build_csr(graph, big=self.big)
        # static per-face dart walks (non-hole faces have 2 or 3 darts)
        fd = np.full((graph.num_faces, 3), -1, dtype=np.int64)
        ft = np.full((graph.num_faces, 3), -1, dtype=np.int64)
        for f in range(graph.num_faces):
            if f == self.hole:
                continue
            walk = graph.face_walk(f)
            for j, d in enumerate(walk):
                fd[f, j] = d
                ft[f, j] = graph.tail(d)
        self.face_darts = fd
        self.face_tails = ft
        self.trees = [build_sptree(graph, int(s), hole=self.hole, csr=self.csr)
                      for s in self.sites]
        if self.trees:
            self.dist2d = np.ascontiguousarray(
                np.stack([t.dist for t in self.trees]))
            self.pre2d = np.ascontiguousarray(
                np.stack([t.pre for t in self.trees]))
            self.last2d = np.ascontiguousarray(
                np.stack([t.last for t in self.trees]))

    @property
    def b(self) -> int:
        return len(self.sites)


def sites_on_hole(graph: PlanarGraph, hole: int, eligible) -> list[int]:
    """Eligible vertices in first-occurrence order along the hole walk."""
    seen = set()
    out = []
    for d in graph.face_walk(hole):
        t = graph.tail(d)
        if t in eligible and t not in seen:
            seen.add(t)
            out.append(t)
    return out


def piece_hole_context(piece: Piece, hole_face: int, big=None) -> HoleContext:
    """Context for a piece and one of its holes; sites are the boundary
    vertices on that hole, ordered along its walk."""
    tri = triangulate_except(piece.graph, hole_face)
    w = tri.graph
    hole = tri.face_map[hole_face]
    sites = sites_on_hole(w, hole, set(int(v) for v in piece.boundary))
    return HoleContext(w, hole, sites, id_key=piece.to_root_vertex,
                       to_root=piece.to_root_vertex, big=big)


@dataclass
class VoronoiAssignment:
    sites: np.ndarray
    weights: np.ndarray
    cell: np.ndarray
    dist: np.ndarray
    parent_dart: np.ndarray


def compute_voronoi(ctx: HoleContext, weights) -> VoronoiAssignment:
    """Cell assignment by one multi-source run; ties go to the smaller
    site index, infinite weights are allowed (the site just never wins)."""
    return compute_voronoi_on(ctx.graph, ctx.hole, ctx.sites, weights,
                              csr=ctx.csr)


def compute_voronoi_on(graph: PlanarGraph, hole: int, sites, weights,
                       csr=None, big=None) -> VoronoiAssignment:
    sites = np.asarray(sites, dtype=np.int64)
    weights = np.asarray(weights, dtype=np.int64)
    if csr is None:
        csr = build_csr(graph, big=graph_big(graph) if big is None else big)
    dist, parent, cell = multi_sssp(csr, graph.num_vertices, sites, weights)
    if (cell >= len(sites)).any():
        raise GraphError("some vertex is unreachable from every site")
    return VoronoiAssignment(sites, weights, cell, dist, parent)


@dataclass
class DualEdge:
    artificial: bool
    a: int
    b: int
    cells: tuple            # site indices left/right of the first dart
    dart_a: int = -1        # crossing dart at endpoint a (diagram edges)
    dart_b: int = -1
    y: int = -1             # associated vertex (artificial edges)
    y_pos: int = -1         # its walk position


@dataclass
class VoronoiDualTree:
    copy_pos: list          # walk position per h*-copy node (node ids 0..)
    real_faces: list        # face id per real node (node ids after copies)
    edges: list = field(default_factory=list)
    guarded_joins: int = 0  # artificial edges added by the spanning guard

    @property
    def num_nodes(self) -> int:
        return len(self.copy_pos) + len(self.real_faces)

    @property
    def num_real(self) -> int:
        return len(self.real_faces)

    def degrees(self):
        deg = np.zeros(self.num_nodes, dtype=np.int64)
        for e in self.edges:
            deg[e.a] += 1
            deg[e.b] += 1
        return deg


class _DSU:
    def __init__(self, n):
        self.p = list(range(n))

    def find(self, x):
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.p[ra] = rb
        return True


def build_dual(ctx: HoleContext, assignment: VoronoiAssignment) -> VoronoiDualTree:
    g = ctx.graph
    cell = assignment.cell
    tails, heads = g.dart_tails(), g.dart_heads()
    bi = cell[tails] != cell[heads]          # per dart; symmetric per edge

    copy_pos = [p for p, d in enumerate(ctx.walk) if bi[d]]
    pos_of_dart = {ctx.walk[p]: p for p in copy_pos}
    copy_node = {p: i for i, p in enumerate(copy_pos)}

    # faces by number of bichromatic boundary darts
    nf = g.num_faces
    fdeg = np.bincount(g.dart_face[bi], minlength=nf)
    if (fdeg == 1).any():
        raise GraphError("face with a single cell transition")
    real_faces = [int(f) for f in np.flatnonzero(fdeg >= 3) if f != ctx.hole]
    for f in real_faces:
        if fdeg[f] != 3:
            raise DegreeViolation(f"face {f} has dual degree {fdeg[f]}")
    node_of_face = {f: len(copy_pos) + i for i, f in enumerate(real_faces)}

    # pass-through pairing for degree-2 faces
    other_bi = {}
    fdarts = ctx.face_darts
    for f in np.flatnonzero(fdeg == 2):
        if f == ctx.hole:
            continue
        ds = [int(d) for d in fdarts[f] if d >= 0 and bi[d]]
        other_bi[(int(f), ds[0])] = ds[1]
        other_bi[(int(f), ds[1])] = ds[0]

    tree = VoronoiDualTree(copy_pos, real_faces)
    dsu = _DSU(tree.num_nodes)

    def endpoint(dart):
        """Node at the face left of ``dart``; None means pass-through."""
        f = int(g.dart_face[dart])
        if f == ctx.hole:
            return copy_node[pos_of_dart[dart]], dart
        if f in node_of_face:
            return node_of_face[f], dart
        return None, dart

    used = np.zeros(2 * g.num_edges, dtype=bool)

    def walk_chain(start_dart):
        """Follow duals of bichromatic edges through degree-2 faces."""
        if used[start_dart]:
            return None
        node_a, da = endpoint(start_dart)
        assert node_a is not None
        d = start_dart
        while True:
            used[d] = True
            used[d ^ 1] = True
            nxt = d ^ 1  # cross the primal edge into the other face
            node_b, db = endpoint(nxt)
            if node_b is not None:
                return node_a, node_b, da, nxt
            d = other_bi[(int(g.dart_face[nxt]), nxt)]

    starts = [ctx.walk[p] for p in copy_pos]
    for f in real_faces:
        starts.extend(int(d) for d in fdarts[f] if d >= 0 and bi[d])
    for sd in starts:
        res = walk_chain(sd)
        if res is None:
            continue
        na, nb, da, db = res
        cells = (int(cell[tails[da]]), int(cell[heads[da]]))
        if not dsu.union(na, nb):
            raise GraphError("cycle in the diagram dual")
        tree.edges.append(DualEdge(False, na, nb, cells, da, db))
    if bi.any() and not used[bi].all():
        raise GraphError("dual component not attached to the hole")

    # artificial edges between consecutive copies along the hole walk
    m = len(copy_pos)
    nw = len(ctx.walk)
    deferred = []
    for k in range(m):
        p, q = copy_pos[k], copy_pos[(k + 1) % m]
        run = []
        pos = (p + 1) % nw
        while True:
            run.append(pos)
            if pos == q:
                break
            pos = (pos + 1) % nw
        cx = int(cell[ctx.walk_tails[(p + 1) % nw]])
        site_v = int(ctx.sites[cx])
        contains = any(int(ctx.walk_tails[pos]) == site_v for pos in run)
        ypos = min(run, key=lambda pos: (int(ctx.id_key[ctx.walk_tails[pos]]), pos))
        edge = DualEdge(True, copy_node[p], copy_node[q], (cx, cx),
                        y=int(ctx.walk_tails[ypos]), y_pos=ypos)
        if contains:
            deferred.append(edge)
        elif dsu.union(edge.a, edge.b):
            tree.edges.append(edge)
    for edge in deferred:
        if dsu.union(edge.a, edge.b):
            tree.edges.append(edge)
            tree.guarded_joins += 1

    if m:
        root = dsu.find(0)
        if any(dsu.find(x) != root for x in range(tree.num_nodes)):
            raise GraphError("diagram did not form a tree")
        if len(tree.edges) != tree.num_nodes - 1:
            raise GraphError("diagram edge count is off")
        validate_dual(tree, ctx.b)
    return tree


def validate_dual(tree: VoronoiDualTree, b: int):
    deg = tree.degrees()
    m = len(tree.copy_pos)
    for i in range(m):
        if deg[i] > 3:
            raise DegreeViolation("hole copy with degree > 3")
    for i in range(m, tree.num_nodes):
        if deg[i] != 3:
            raise DegreeViolation("real Voronoi vertex with degree != 3")
    if b >= 2 and tree.num_real + 1 > b:
        raise DegreeViolation(
            f"{tree.num_real} real Voronoi vertices for {b} sites")


def dual_to_json(ctx: HoleContext, tree: VoronoiDualTree) -> dict:
    nodes = [{"id": i, "type": "hole-copy", "walk_pos": int(p)}
             for i, p in enumerate(tree.copy_pos)]
    nodes += [{"id": len(tree.copy_pos) + i, "type": "real", "face": int(f)}
              for i, f in enumerate(tree.real_faces)]
    edges = []
    for e in tree.edges:
        rec = {"a": e.a, "b": e.b, "artificial": e.artificial,
               "cells": [int(c) for c in e.cells]}
        if e.artificial:
            rec["y"] = int(e.y)
        edges.append(rec)
    return {"sites": [int(s) for s in ctx.sites], "nodes": nodes,
            "edges": edges}


@dataclass
class PointLocation:
    """Centroid-decomposition rows consumable by the locate kernels."""

    nodes: np.ndarray
    root: int
    depth: int = 0


def _blank_row():
    row = np.full(NODE_W, -1, dtype=np.int64)
    row[4] = 0
    return row


def build_point_location(ctx: HoleContext, dual: VoronoiDualTree,
                         assignment: VoronoiAssignment) -> PointLocation:
    cell = assignment.cell
    g = ctx.graph
    nw = len(ctx.walk)
    m = len(dual.copy_pos)

    if not dual.edges:
        row = _blank_row()
        row[0] = K_SINGLE
        row[4] = 1
        row[5] = int(cell[0]) if len(cell) else 0
        return PointLocation(np.asarray([row]), 0, 1)

    full_adj = [[] for _ in range(dual.num_nodes)]
    for ei, e in enumerate(dual.edges):
        full_adj[e.a].append(ei)
        full_adj[e.b].append(ei)

    def edge_dart_at(e, node):
        return e.dart_a if e.a == node else e.dart_b

    def art_role(e, node):
        """'prev' if the artificial edge ends at this copy, else 'next'."""
        return "next" if e.a == node else "prev"

    rows = []
    depth_max = 0

    def leaf_row(eid):
        e = dual.edges[eid]
        row = _blank_row()
        if not e.artificial:
            row[0] = K_LEAF
            sites = sorted(set(e.cells))
        else:
            row[0] = K_LEAF
            sites = set()
            for node in (e.a, e.b):
                p = dual.copy_pos[node]
                sites.add(int(cell[ctx.walk_tails[p]]))
                sites.add(int(cell[ctx.walk_tails[(p + 1) % nw]]))
            sites = sorted(sites)[:3]
        row[4] = len(sites)
        for j, s in enumerate(sites):
            row[5 + 4 * j] = s
        rows.append(row)
        return len(rows) - 1

    def copy_entries(node):
        """(site, y, anchor, role) per incident artificial edge."""
        p = dual.copy_pos[node]
        out = []
        for ei in full_adj[node]:
            e = dual.edges[ei]
            if not e.artificial:
                continue
            if art_role(e, node) == "prev":
                site = int(cell[ctx.walk_tails[p]])
                role = 0
            else:
                site = int(cell[ctx.walk_tails[(p + 1) % nw]])
                role = 1
            after = ctx.walk[(e.y_pos - 1) % nw] ^ 1
            anchor = corner_anchor(ctx.trees[site], e.y, after)
            out.append((site, int(e.y), anchor, role))
        out.sort(key=lambda t: t[3])  # prev entry first
        return out

    def slot_of_edge(node, eid):
        e = dual.edges[eid]
        if node >= m:  # real vertex: slots follow the face walk
            walk = ctx.face_darts[dual.real_faces[node - m]]
            d = edge_dart_at(e, node)
            return 0 if walk[0] == d else (1 if walk[1] == d else 2)
        if not e.artificial:
            return 1
        return 0 if art_role(e, node) == "prev" else 2

    def rec(edge_ids, depth):
        nonlocal depth_max
        depth_max = max(depth_max, depth)
        if len(edge_ids) == 1:
            return leaf_row(edge_ids[0])
        sub = set(edge_ids)
        adj = {}
        for ei in edge_ids:
            e = dual.edges[ei]
            adj.setdefault(e.a, []).append((ei, e.b))
            adj.setdefault(e.b, []).append((ei, e.a))
        r0 = min(adj)
        order = []
        parent = {r0: (-1, -1)}
        stack = [r0]
        while stack:
            u = stack.pop()
            order.append(u)
            for ei, w_node in adj[u]:
                if w_node not in parent:
                    parent[w_node] = (u, ei)
                    stack.append(w_node)
        sub_edges = {u: 0 for u in order}
        for u in reversed(order):
            pu, pe = parent[u]
            if pu >= 0:
                sub_edges[pu] += sub_edges[u] + 1
        total = len(edge_ids)
        best = None
        for u in order:
            mc = total - sub_edges[u]
            for ei, w_node in adj[u]:
                if parent.get(w_node, (None,))[0] == u:
                    mc = max(mc, sub_edges[w_node] + 1)
            if best is None or (mc, u) < best[0]:
                best = ((mc, u), u)
        c = best[1]
        limit = (total + 1) // 2
        row = _blank_row()
        children = [-1, -1, -1]
        for ei, w_node in adj[c]:
            comp = _component_edges(adj, sub, c, ei, w_node)
            if len(comp) > limit:
                raise GraphError("centroid split exceeded half the edges")
            children[slot_of_edge(c, ei)] = rec(comp, depth + 1)
        if c >= m:
            row[0] = K_REAL
            walk = ctx.face_darts[dual.real_faces[c - m]]
            tails3 = ctx.face_tails[dual.real_faces[c - m]]
            row[4] = 3
            for j in range(3):
                y = int(tails3[j])
                site = int(cell[y])
                after = int(walk[(j - 1) % 3]) ^ 1
                anchor = corner_anchor(ctx.trees[site], y, after)
                base = 5 + 4 * j
                row[base] = site
                row[base + 1] = y
                row[base + 2] = anchor
        else:
            row[0] = K_COPY
            ents = copy_entries(c)
            if not ents:
                raise GraphError("hole copy centroid without artificial edges")
            row[4] = len(ents)
            for j, (site, y, anchor, role) in enumerate(ents):
                base = 5 + 4 * j
                row[base] = site
                row[base + 1] = y
                row[base + 2] = anchor
                row[base + 3] = role
        row[1:4] = children
        rows.append(row)
        return len(rows) - 1

    root = rec(list(range(len(dual.edges))), 1)
    return PointLocation(np.ascontiguousarray(np.stack(rows)), root, depth_max)


def _component_edges(adj, sub, centroid, via_edge, start_node):
    comp = [via_edge]
    seen = {centroid, start_node}
    stack = [start_node]
    while stack:
        x = stack.pop()
        for ej, z in adj[x]:
            if ej == via_edge or ej not in sub:
                continue
            if z not in seen:
                seen.add(z)
                comp.append(ej)
                stack.append(z)
            elif z == centroid:
                continue
    return comp


def point_locate(ctx: HoleContext, pls: PointLocation, omega, v: int):
    """Site whose cell contains v under weights ``omega`` and its distance.

    Matches the cell assignment exactly; distances are in the context's
    internal metric where values >= ctx.big are logically infinite.
    """
    om = np.ascontiguousarray(np.asarray(omega, dtype=np.int64))
    val, site, steps = pl_locate(pls.nodes, pls.root, om, 0,
                                 ctx.dist2d, ctx.pre2d, ctx.last2d, int(v))
    return int(site), int(val), steps


@dataclass
class Diagram:
    """A queryable diagram: context + weights + point location structure."""

    ctx: HoleContext
    omega: np.ndarray
    pls: PointLocation
    dual: VoronoiDualTree = None

    def locate(self, v):
        site, val, _ = point_locate(self.ctx, self.pls, self.omega, v)
        return site, val


def build_diagram(ctx: HoleContext, omega, keep_dual=False) -> Diagram:
    omega = np.asarray(omega, dtype=np.int64)
    assignment = compute_voronoi(ctx, omega)
    dual = build_dual(ctx, assignment)
    pls = build_point_location(ctx, dual, assignment)
    return Diagram(ctx, omega, pls, dual if keep_dual else None)
