"""The full-size exact oracle: a Voronoi diagram per (vertex, opposite hole).

Preprocessing walks the recursive decomposition.  Every node stores global
distance tables for its piece's boundary vertices; every split node stores,
for each hole of each child and each vertex strictly on the other side, a
point-location structure whose site weights are the true graph distances
from that vertex to the hole's boundary sites.

Queries descend to the first node separating u from v (or answering from a
boundary table) and combine one point location per hole.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .decomposition import DecompositionTree, build_decomposition, node_stats
from .errors import GraphError
from .kernels import (INF, build_csr, finite_or_inf, graph_big, pl_locate,
                      sssp)
from .planar import PlanarGraph
from .voronoi import (HoleContext, build_dual, build_point_location,
                      compute_voronoi, piece_hole_context)

TERMINAL_SIZE = 16

LBL_SEP = 0
LBL_A = 1
LBL_B = 2


@dataclass
class TreeArrays:
    """Query-facing view of a hole context: per-site tree arrays."""

    b: int
    dist2d: np.ndarray
    pre2d: np.ndarray
    last2d: np.ndarray

    @classmethod
    def of(cls, ctx):
        return cls(ctx.b, ctx.dist2d, ctx.pre2d, ctx.last2d)


@dataclass
class HolePool:
    """All diagrams of one (target piece, hole), one slot per owner vertex."""

    trees: TreeArrays
    nodes: np.ndarray          # concatenated point-location rows
    roots: np.ndarray          # per slot: root row
    omega: np.ndarray          # per slot: b weights, flat
    owner_slot: dict           # owner root id -> slot
    vloc: dict = None          # target-piece root id -> working-graph vertex
    hole_face: int = -1        # piece-level face id of this hole
    dual_stats: list = field(default_factory=list)  # (real, nodes, edges)

    @property
    def b(self) -> int:
        return self.trees.b


@dataclass
class OracleNode:
    node_id: int
    local: dict                # root id -> piece-local index
    bt_rows: dict              # boundary root id -> table row
    bt_fwd: np.ndarray         # [b, n] d_G(s -> x)
    bt_rev: np.ndarray         # [b, n] d_G(x -> s)
    allpairs: np.ndarray = None        # leaves: [n, n] in-piece distances
    label: dict = None                 # splits: root id -> LBL_*
    pools: tuple = ()                  # splits: (pools for side A, side B)


class SimpleOracle:
    def __init__(self, graph, tree, nodes, big):
        self.graph = graph
        self.tree = tree
        self.nodes = nodes
        self.big = big
        self.n = graph.num_vertices
        self.diagram_count = sum(
            len(p.roots) for nd in nodes for side in nd.pools for p in side)

    # -- query ---------------------------------------------------------

    def query(self, u: int, v: int, stats=None) -> int:
        if u == v:
            return 0
        nd = self.tree.root
        while True:
            data = self.nodes[nd.node_id]
            if stats is not None:
                stats["nodes_visited"] = stats.get("nodes_visited", 0) + 1
            if nd.is_leaf:
                return self._leaf_query(data, u, v)
            tu = data.label[u]
            tv = data.label[v]
            ca, cb = nd.children
            if tv == LBL_SEP:
                child = self.nodes[(ca if tu != LBL_B else cb).node_id]
                row = child.bt_rows[v]
                return finite_or_inf(int(child.bt_rev[row, child.local[u]]),
                                     self.big)
            if tu == LBL_SEP:
                child = self.nodes[(ca if tv != LBL_B else cb).node_id]
                row = child.bt_rows[u]
                return finite_or_inf(int(child.bt_fwd[row, child.local[v]]),
                                     self.big)
            if tu == tv:
                nd = ca if tu == LBL_A else cb
                continue
            side = 0 if tv == LBL_A else 1
            return self._cross_query(data, side, u, v, stats)

    def _leaf_query(self, data: OracleNode, u: int, v: int) -> int:
        ul, vl = data.local[u], data.local[v]
        best = int(data.allpairs[ul, vl])
        if len(data.bt_rows):
            # clamp legs at big before adding: >= big is already infinite
            cand = np.minimum(data.bt_rev[:, ul], self.big) + \
                np.minimum(data.bt_fwd[:, vl], self.big)
            best = min(best, int(cand.min()))
        return finite_or_inf(best, self.big)

    def _cross_query(self, data: OracleNode, side: int, u: int, v: int,
                     stats) -> int:
        best = 1 << 62
        for pool in data.pools[side]:
            slot = pool.owner_slot[u]
            tr = pool.trees
            val, _site, steps = pl_locate(
                pool.nodes, int(pool.roots[slot]), pool.omega,
                slot * pool.b, tr.dist2d, tr.pre2d, tr.last2d,
                pool.vloc[v])
            if stats is not None:
                stats["pl_calls"] = stats.get("pl_calls", 0) + 1
                stats["pl_steps_max"] = max(stats.get("pl_steps_max", 0), steps)
                bound = np.log2(max(3 * pool.b, 2)) + 2
                if steps > bound:
                    stats["step_violations"] = \
                        stats.get("step_violations", 0) + 1
            if val < best:
                best = val
        return finite_or_inf(int(best), self.big)

    # -- reporting -------------------------------------------------------

    def space_report(self) -> dict:
        rep = {"global_tables": 0, "terminal_tables": 0, "site_trees": 0,
               "diagram_weights": 0, "pls_nodes": 0, "routing": 0}
        for data in self.nodes:
            rep["global_tables"] += data.bt_fwd.size + data.bt_rev.size
            if data.allpairs is not None:
                rep["terminal_tables"] += data.allpairs.size
            if data.label is not None:
                rep["routing"] += len(data.label)
            rep["routing"] += len(data.local)
            for side in data.pools:
                for pool in side:
                    rep["site_trees"] += pool.trees.dist2d.size + \
                        pool.trees.pre2d.size + pool.trees.last2d.size
                    rep["diagram_weights"] += pool.omega.size + pool.roots.size
                    rep["pls_nodes"] += pool.nodes.size
        rep["total"] = sum(v for k, v in rep.items() if k != "total")
        return rep

    def stats_lines(self) -> list:
        return node_stats(self.tree)


def _global_tables(piece, cache, big):
    rootids = piece.to_root_vertex
    bverts = sorted(int(r) for r in set(int(piece.to_root_vertex[b])
                                        for b in piece.boundary))
    fwd = np.empty((len(bverts), piece.n), dtype=np.int64)
    rev = np.empty((len(bverts), piece.n), dtype=np.int64)
    for i, s in enumerate(bverts):
        gf, gr = cache(s)
        fwd[i] = gf[rootids]
        rev[i] = gr[rootids]
    rows = {s: i for i, s in enumerate(bverts)}
    return rows, fwd, rev


def _build_pools(target_piece, owners, cache, big):
    """Diagram pools of a piece's holes for every owner vertex."""
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
        dual_stats = []
        for k, u in enumerate(owners):
            om = omegas[k]
            asg = compute_voronoi(ctx, om)
            dual = build_dual(ctx, asg)
            pls = build_point_location(ctx, dual, asg)
            rows = pls.nodes.copy()
            child_cols = rows[:, 1:4]
            child_cols[child_cols >= 0] += offset
            roots[k] = pls.root + offset
            offset += len(rows)
            rows_all.append(rows)
            dual_stats.append((dual.num_real, dual.num_nodes, len(dual.edges)))
        pool = HolePool(
            TreeArrays.of(ctx),
            np.ascontiguousarray(np.concatenate(rows_all)) if rows_all
            else np.empty((0, 17), dtype=np.int64),
            roots,
            np.ascontiguousarray(omegas.reshape(-1)),
            {u: k for k, u in enumerate(owners)},
            {int(r): i for i, r in enumerate(ctx.to_root)},
            hole, dual_stats)
        pools.append(pool)
    return pools


def build_oracle(graph: PlanarGraph, terminal_size: int = TERMINAL_SIZE,
                 tree: DecompositionTree = None) -> SimpleOracle:
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

    if tree is None:
        tree = build_decomposition(graph, terminal_size)
    nodes = []
    for nd in tree.nodes:
        piece = nd.piece
        rootids = piece.to_root_vertex
        local = {int(r): i for i, r in enumerate(rootids)}
        bt_rows, bt_fwd, bt_rev = _global_tables(piece, cache, big)
        data = OracleNode(nd.node_id, local, bt_rows, bt_fwd, bt_rev)
        if nd.is_leaf:
            csr = build_csr(piece.graph, big=big)
            ap = np.empty((piece.n, piece.n), dtype=np.int64)
            for x in range(piece.n):
                ap[x], _, _ = sssp(csr, piece.n, x)
            data.allpairs = ap
        else:
            ca, cb = nd.children
            set_a = set(int(r) for r in ca.piece.to_root_vertex)
            set_b = set(int(r) for r in cb.piece.to_root_vertex)
            label = {}
            for r in rootids:
                r = int(r)
                ina, inb = r in set_a, r in set_b
                label[r] = LBL_SEP if (ina and inb) else \
                    (LBL_A if ina else LBL_B)
            data.label = label
            owners_b = sorted(set_b - set_a)   # strict side B
            owners_a = sorted(set_a - set_b)
            data.pools = (_build_pools(ca.piece, owners_b, cache, big),
                          _build_pools(cb.piece, owners_a, cache, big))
        nodes.append(data)
    return SimpleOracle(graph, tree, nodes, big)
