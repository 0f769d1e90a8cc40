"""The space/query tradeoff oracle: diagrams only at r-division boundaries.

Instead of one Voronoi diagram per vertex, each split node carries an
r-division of either side and stores diagrams only for the division's
boundary vertices.  A cross query walks the boundary of the querying
vertex's division piece, combining in-piece distances with one point
location per (boundary vertex, opposite hole).  Terminal pieces (at most
``max(r, 8)`` vertices) answer internal paths with an on-demand Dijkstra
restricted to the piece and boundary-leaving paths with their own division.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .decomposition import build_r_division, decompose, node_stats
from .errors import GraphError
from .kernels import (INF, build_csr, finite_or_inf, graph_big,
                      pl_locate_many, sssp)
from .oracle_simple import (LBL_A, LBL_B, LBL_SEP, HolePool,
                            TreeArrays)
from .pieces import Piece
from .planar import PlanarGraph
from .voronoi import (build_dual, build_point_location, compute_voronoi,
                      piece_hole_context)


@dataclass
class RPieceData:
    local: dict            # root id -> local vertex in the division piece
    bverts: list           # boundary root ids, sorted
    rev: np.ndarray        # [b', n_piece]: distances to each boundary vertex


@dataclass
class DivisionData:
    pieces: list           # RPieceData
    owner_piece: dict      # root id -> index of its (first) division piece
    boundary: list         # distinct division-boundary root ids, sorted
    piece_sizes: list = field(default_factory=list)   # (n, b) per piece


@dataclass
class TONode:
    node_id: int
    local: dict
    label: dict = None
    pools: tuple = ()      # per side: HolePool list for that side's piece
    divisions: tuple = ()  # per side: DivisionData of that side
    csr: tuple = None      # leaves: piece CSR for on-demand Dijkstra
    division: DivisionData = None   # leaves
    leaf_pools: list = ()


class TradeoffOracle:
    def __init__(self, graph, tree, nodes, r, big):
        self.graph = graph
        self.tree = tree
        self.nodes = nodes
        self.r = r
        self.big = big
        self.n = graph.num_vertices
        self.diagram_count = 0
        for nd in nodes:
            for side in nd.pools:
                self.diagram_count += sum(len(p.roots) for p in side)
            self.diagram_count += sum(len(p.roots) for p in nd.leaf_pools)

    def query(self, u: int, v: int, stats=None) -> int:
        if u == v:
            return 0
        nd = self.tree.root
        while True:
            data = self.nodes[nd.node_id]
            if stats is not None:
                stats["nodes_visited"] = stats.get("nodes_visited", 0) + 1
            if nd.is_leaf:
                return self._terminal_query(data, u, v, stats)
            tu = data.label[u]
            tv = data.label[v]
            ca, cb = nd.children
            if tu == tv or tu == LBL_SEP or tv == LBL_SEP:
                pick = tu if tu != LBL_SEP else tv
                nd = cb if pick == LBL_B else ca
                continue
            side_v = 0 if tv == LBL_A else 1
            div = data.divisions[1 - side_v]
            best = self._via_boundary(div, data.pools[side_v], u, v, stats)
            return finite_or_inf(best, self.big)

    def _via_boundary(self, div: DivisionData, pools, u: int, v: int,
                      stats) -> int:
        rp = div.pieces[div.owner_piece[u]]
        ul = rp.local[u]
        bases = np.minimum(rp.rev[:, ul], self.big)
        best = 1 << 62
        for pool in pools:
            slots = np.asarray([pool.owner_slot[s] for s in rp.bverts],
                               dtype=np.int64)
            tr = pool.trees
            val, _slot, _site, calls, steps = pl_locate_many(
                pool.nodes, pool.roots[slots], pool.omega, slots * pool.b,
                bases, tr.dist2d, tr.pre2d, tr.last2d, pool.vloc[v])
            if stats is not None:
                stats["pl_calls"] = stats.get("pl_calls", 0) + calls
                stats["pl_steps_max"] = max(stats.get("pl_steps_max", 0), steps)
                bound = math.log2(max(3 * pool.b, 2)) + 2
                if steps > bound:
                    stats["step_violations"] = \
                        stats.get("step_violations", 0) + 1
            if val < best:
                best = int(val)
        return best

    def _terminal_query(self, data: TONode, u: int, v: int, stats) -> int:
        ul, vl = data.local[u], data.local[v]
        dist, _, _ = sssp(data.csr, len(data.local), ul)
        best = int(dist[vl])
        if stats is not None:
            stats["terminal_dijkstras"] = \
                stats.get("terminal_dijkstras", 0) + 1
        if data.leaf_pools:
            best = min(best, self._via_boundary(data.division,
                                                data.leaf_pools, u, v, stats))
        return finite_or_inf(best, self.big)

    def space_report(self) -> dict:
        rep = {"site_trees": 0, "diagram_weights": 0, "pls_nodes": 0,
               "division_tables": 0, "terminal_graphs": 0, "routing": 0}
        for data in self.nodes:
            rep["routing"] += len(data.local)
            if data.label is not None:
                rep["routing"] += len(data.label)
            for pools in list(data.pools) + [data.leaf_pools]:
                for pool in pools:
                    rep["site_trees"] += pool.trees.dist2d.size + \
                        pool.trees.pre2d.size + pool.trees.last2d.size
                    rep["diagram_weights"] += pool.omega.size + pool.roots.size
                    rep["pls_nodes"] += pool.nodes.size
            for div in list(data.divisions) + \
                    ([data.division] if data.division else []):
                for rp in div.pieces:
                    rep["division_tables"] += rp.rev.size
            if data.csr is not None:
                rep["terminal_graphs"] += sum(len(a) for a in data.csr)
        rep["total"] = sum(v for k, v in rep.items() if k != "total")
        return rep

    def stats_lines(self) -> list:
        return node_stats(self.tree)


def _division_data(piece: Piece, r: int, big: int) -> DivisionData:
    rdiv = build_r_division(piece, r)
    pieces = []
    owner = {}
    boundary = set()
    sizes = []
    for idx, rp in enumerate(rdiv.pieces):
        local = {int(ro): i for i, ro in enumerate(rp.to_root_vertex)}
        bverts = sorted(int(rp.to_root_vertex[b]) for b in set(rp.boundary))
        rcsr = build_csr(rp.graph, reverse=True, big=big)
        rev = np.empty((len(bverts), rp.n), dtype=np.int64)
        broot = {int(rp.to_root_vertex[b]) for b in rp.boundary}
        rows = {}
        for i, s in enumerate(bverts):
            rows[s] = i
        for bl in rp.boundary:
            s = int(rp.to_root_vertex[bl])
            rev[rows[s]], _, _ = sssp(rcsr, rp.n, int(bl))
        pieces.append(RPieceData(local, bverts, rev))
        sizes.append((rp.n, rp.b))
        boundary.update(bverts)
        for ro in local:
            owner.setdefault(ro, idx)
        del broot
    return DivisionData(pieces, owner, sorted(boundary), sizes)


def _pools_for(target_piece: Piece, owners, cache, big):
    pools = []
    for hole in target_piece.holes():
        ctx = piece_hole_context(target_piece, hole, big=big)
        if ctx.b == 0:
            continue
        site_roots = [int(ctx.to_root[s]) for s in ctx.sites]
        rev_rows = np.stack([cache(s)[1] for s in site_roots])
        omegas = rev_rows[:, owners].T.copy() if owners else \
            np.empty((0, ctx.b), dtype=np.int64)
        rows_all = []
        roots = np.empty(len(owners), dtype=np.int64)
        offset = 0
        stats = []
        for k in range(len(owners)):
            asg = compute_voronoi(ctx, omegas[k])
            dual = build_dual(ctx, asg)
            pls = build_point_location(ctx, dual, asg)
            rows = pls.nodes.copy()
            cols = rows[:, 1:4]
            cols[cols >= 0] += offset
            roots[k] = pls.root + offset
            offset += len(rows)
            rows_all.append(rows)
            stats.append((dual.num_real, dual.num_nodes, len(dual.edges)))
        pools.append(HolePool(
            TreeArrays.of(ctx),
            np.ascontiguousarray(np.concatenate(rows_all)) if rows_all
            else np.empty((0, 17), dtype=np.int64),
            roots,
            np.ascontiguousarray(omegas.reshape(-1)),
            {s: k for k, s in enumerate(owners)},
            {int(ro): i for i, ro in enumerate(ctx.to_root)},
            hole, stats))
    return pools


def build_tradeoff_oracle(graph: PlanarGraph, r: int) -> TradeoffOracle:
    if not (1 <= r):
        raise ValueError("r must be >= 1")
    lens = graph.dart_len
    if ((lens < 0) & (lens < INF)).any():
        raise GraphError("negative lengths; reweight_nonnegative first")
    big = graph_big(graph)
    fwd_csr = build_csr(graph, big=big)
    rev_csr = build_csr(graph, reverse=True, big=big)
    n = graph.num_vertices
    _cache = {}

    def cache(s):
        if s not in _cache:
            df, _, _ = sssp(fwd_csr, n, s)
            dr, _, _ = sssp(rev_csr, n, s)
            _cache[s] = (df, dr)
        return _cache[s]

    terminal = max(r, 8)
    tree = decompose(Piece.from_graph(graph), lambda p: p.n <= terminal)
    nodes = []
    for nd in tree.nodes:
        piece = nd.piece
        local = {int(ro): i for i, ro in enumerate(piece.to_root_vertex)}
        data = TONode(nd.node_id, local)
        if nd.is_leaf:
            data.csr = build_csr(piece.graph, big=big)
            data.division = _division_data(piece, r, big)
            data.leaf_pools = _pools_for(piece, data.division.boundary,
                                         cache, big)
        else:
            ca, cb = nd.children
            set_a = set(int(ro) for ro in ca.piece.to_root_vertex)
            set_b = set(int(ro) for ro in cb.piece.to_root_vertex)
            label = {}
            for ro in local:
                ina, inb = ro in set_a, ro in set_b
                label[ro] = LBL_SEP if (ina and inb) else \
                    (LBL_A if ina else LBL_B)
            data.label = label
            div_a = _division_data(ca.piece, r, big)
            div_b = _division_data(cb.piece, r, big)
            data.divisions = (div_a, div_b)
            data.pools = (_pools_for(ca.piece, div_b.boundary, cache, big),
                          _pools_for(cb.piece, div_a.boundary, cache, big))
        nodes.append(data)
    return TradeoffOracle(graph, tree, nodes, r, big)
