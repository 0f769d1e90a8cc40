"""Versioned binary container for built oracles (magic ``PDO1``).

Layout: magic, version, oracle kind, a canonical-JSON manifest (structure,
scalars, array directory), then the raw little-endian int64 array payloads
grouped by space-report category.  Round trips are bit-exact; identical
builds serialize to identical bytes.
"""
from __future__ import annotations

import json
import struct

import numpy as np

from .decomposition import DecompositionNode, DecompositionTree
from .errors import FormatError
from .oracle_simple import HolePool, OracleNode, SimpleOracle, TreeArrays
from .oracle_tradeoff import (DivisionData, RPieceData, TONode,
                              TradeoffOracle)
from .planar import read_graph, write_graph

MAGIC = b"PDO1"
VERSION = 1

# categories in space_report order; arrays are written grouped this way
CATEGORIES = ["global_tables", "terminal_tables", "site_trees",
              "diagram_weights", "pls_nodes", "division_tables",
              "terminal_graphs", "routing"]


class _Writer:
    def __init__(self):
        self.arrays = []   # (category, name, np.int64 array)

    def add(self, category, name, arr):
        self.arrays.append((category, name,
                            np.ascontiguousarray(arr, dtype=np.int64)))

    def payload(self, meta: dict, kind: int) -> bytes:
        order = sorted(
            range(len(self.arrays)),
            key=lambda i: (CATEGORIES.index(self.arrays[i][0]),
                           self.arrays[i][1]))
        directory = []
        for i in order:
            cat, name, arr = self.arrays[i]
            directory.append({"name": name, "category": cat,
                              "shape": list(arr.shape)})
        meta = dict(meta)
        meta["directory"] = directory
        blob = json.dumps(meta, sort_keys=True,
                          separators=(",", ":")).encode()
        out = [MAGIC, struct.pack("<QQQ", VERSION, kind, len(blob)), blob]
        for i in order:
            out.append(self.arrays[i][2].tobytes())
        return b"".join(out)


def _read_container(data: bytes):
    if data[:4] != MAGIC:
        raise FormatError("not a PDO1 container")
    version, kind, mlen = struct.unpack_from("<QQQ", data, 4)
    if version != VERSION:
        raise FormatError(f"unsupported container version {version}")
    pos = 4 + 24
    meta = json.loads(data[pos:pos + mlen].decode())
    pos += mlen
    arrays = {}
    for rec in meta["directory"]:
        count = int(np.prod(rec["shape"])) if rec["shape"] else 1
        arr = np.frombuffer(data, dtype="<i8", count=count, offset=pos)
        pos += 8 * count
        arrays[rec["name"]] = arr.reshape(rec["shape"]).copy()
    if pos != len(data):
        raise FormatError("trailing bytes in container")
    return kind, meta, arrays


def _tree_meta(tree: DecompositionTree) -> list:
    out = []
    for nd in tree.nodes:
        if nd.piece is not None:
            nbh = (nd.piece.n, nd.piece.b, len(nd.piece.holes()))
        else:
            nbh = nd.stats_nbh
        out.append({
            "level": nd.level,
            "children": [c.node_id for c in nd.children],
            "separator": nd.separator or [],
            "forced": bool(nd.forced_leaf),
            "n": nbh[0], "b": nbh[1], "holes": nbh[2],
        })
    return out


def _tree_from_meta(meta_nodes: list) -> DecompositionTree:
    nodes = [DecompositionNode(None, rec["level"], node_id=i,
                               separator=rec["separator"] or None,
                               forced_leaf=rec["forced"])
             for i, rec in enumerate(meta_nodes)]
    for nd, rec in zip(nodes, meta_nodes):
        nd.children = tuple(nodes[c] for c in rec["children"])
        nd.stats_nbh = (rec["n"], rec["b"], rec["holes"])
    return DecompositionTree(nodes[0], nodes)


def _dump_pool(w, prefix, pool: HolePool, category_tree="site_trees"):
    w.add(category_tree, f"{prefix}.dist2d", pool.trees.dist2d)
    w.add(category_tree, f"{prefix}.pre2d", pool.trees.pre2d)
    w.add(category_tree, f"{prefix}.last2d", pool.trees.last2d)
    w.add("pls_nodes", f"{prefix}.nodes", pool.nodes)
    w.add("diagram_weights", f"{prefix}.roots", pool.roots)
    w.add("diagram_weights", f"{prefix}.omega", pool.omega)
    owners = sorted(pool.owner_slot, key=pool.owner_slot.get)
    w.add("diagram_weights", f"{prefix}.owners",
          np.asarray(owners, dtype=np.int64))
    vl = sorted(pool.vloc, key=pool.vloc.get)
    w.add("routing", f"{prefix}.vloc", np.asarray(vl, dtype=np.int64))
    return {"b": pool.b, "hole": pool.hole_face}


def _load_pool(arrays, prefix, rec) -> HolePool:
    owners = [int(x) for x in arrays[f"{prefix}.owners"]]
    vl = [int(x) for x in arrays[f"{prefix}.vloc"]]
    trees = TreeArrays(rec["b"], arrays[f"{prefix}.dist2d"],
                       arrays[f"{prefix}.pre2d"], arrays[f"{prefix}.last2d"])
    return HolePool(trees, arrays[f"{prefix}.nodes"],
                    arrays[f"{prefix}.roots"], arrays[f"{prefix}.omega"],
                    {u: k for k, u in enumerate(owners)},
                    {r: i for i, r in enumerate(vl)}, rec["hole"])


def dump_oracle(oracle) -> bytes:
    w = _Writer()
    if isinstance(oracle, SimpleOracle):
        kind = 0
        meta = {"kind": "simple"}
    elif isinstance(oracle, TradeoffOracle):
        kind = 1
        meta = {"kind": "tradeoff", "r": oracle.r}
    else:
        raise TypeError("unknown oracle type")
    meta["n"] = oracle.n
    meta["big"] = oracle.big
    meta["graph"] = write_graph(oracle.graph)
    meta["tree"] = _tree_meta(oracle.tree)
    node_meta = []
    for data in oracle.nodes:
        i = data.node_id
        rec = {}
        to_root = sorted(data.local, key=data.local.get)
        w.add("routing", f"n{i}.to_root", np.asarray(to_root, dtype=np.int64))
        if kind == 0:
            bverts = sorted(data.bt_rows, key=data.bt_rows.get)
            w.add("global_tables", f"n{i}.bverts",
                  np.asarray(bverts, dtype=np.int64))
            w.add("global_tables", f"n{i}.bt_fwd", data.bt_fwd)
            w.add("global_tables", f"n{i}.bt_rev", data.bt_rev)
        if data.label is not None:
            lab = np.asarray([data.label[r] for r in to_root], dtype=np.int64)
            w.add("routing", f"n{i}.label", lab)
            rec["split"] = True
        if getattr(data, "allpairs", None) is not None:
            w.add("terminal_tables", f"n{i}.allpairs", data.allpairs)
            rec["allpairs"] = True
        if getattr(data, "csr", None) is not None:
            for j, part in enumerate(data.csr):
                w.add("terminal_graphs", f"n{i}.csr{j}", part)
            rec["csr"] = True
        pools_meta = []
        for s, pools in enumerate(data.pools):
            side_meta = []
            for h, pool in enumerate(pools):
                side_meta.append(_dump_pool(w, f"n{i}.s{s}.h{h}", pool))
            pools_meta.append(side_meta)
        rec["pools"] = pools_meta
        if getattr(data, "leaf_pools", None):
            rec["leaf_pools"] = [
                _dump_pool(w, f"n{i}.t.h{h}", pool)
                for h, pool in enumerate(data.leaf_pools)]
        for tag, div in _divisions_of(data):
            dm = []
            for j, rp in enumerate(div.pieces):
                pr = f"n{i}.{tag}.p{j}"
                loc = sorted(rp.local, key=rp.local.get)
                w.add("routing", f"{pr}.to_root",
                      np.asarray(loc, dtype=np.int64))
                w.add("division_tables", f"{pr}.bverts",
                      np.asarray(rp.bverts, dtype=np.int64))
                w.add("division_tables", f"{pr}.rev", rp.rev)
                dm.append({"n": len(loc), "b": len(rp.bverts)})
            rec.setdefault("divisions", {})[tag] = dm
        node_meta.append(rec)
    meta["nodes"] = node_meta
    return w.payload(meta, kind)


def _divisions_of(data):
    out = []
    for s, div in enumerate(getattr(data, "divisions", ()) or ()):
        out.append((f"d{s}", div))
    if getattr(data, "division", None) is not None:
        out.append(("dt", data.division))
    return out


def _load_division(arrays, prefix, dm) -> DivisionData:
    pieces = []
    owner = {}
    boundary = set()
    sizes = []
    for j, rec in enumerate(dm):
        pr = f"{prefix}.p{j}"
        to_root = [int(x) for x in arrays[f"{pr}.to_root"]]
        bverts = [int(x) for x in arrays[f"{pr}.bverts"]]
        pieces.append(RPieceData({r: i for i, r in enumerate(to_root)},
                                 bverts, arrays[f"{pr}.rev"]))
        boundary.update(bverts)
        sizes.append((rec["n"], rec["b"]))
        for r in to_root:
            owner.setdefault(r, j)
    return DivisionData(pieces, owner, sorted(boundary), sizes)


def load_oracle(data: bytes):
    kind, meta, arrays = _read_container(data)
    graph = read_graph(meta["graph"])
    tree = _tree_from_meta(meta["tree"])
    nodes = []
    for i, rec in enumerate(meta["nodes"]):
        to_root = [int(x) for x in arrays[f"n{i}.to_root"]]
        local = {r: k for k, r in enumerate(to_root)}
        label = None
        if rec.get("split"):
            lab = arrays[f"n{i}.label"]
            label = {r: int(lab[k]) for k, r in enumerate(to_root)}
        pools = tuple(
            [_load_pool(arrays, f"n{i}.s{s}.h{h}", pm)
             for h, pm in enumerate(side)]
            for s, side in enumerate(rec.get("pools", ())))
        if kind == 0:
            bverts = [int(x) for x in arrays[f"n{i}.bverts"]]
            data_nd = OracleNode(
                i, local, {s: k for k, s in enumerate(bverts)},
                arrays[f"n{i}.bt_fwd"], arrays[f"n{i}.bt_rev"])
            if rec.get("allpairs"):
                data_nd.allpairs = arrays[f"n{i}.allpairs"]
            data_nd.label = label
            data_nd.pools = pools
        else:
            data_nd = TONode(i, local, label=label, pools=pools)
            if rec.get("csr"):
                data_nd.csr = tuple(arrays[f"n{i}.csr{j}"] for j in range(4))
            if "leaf_pools" in rec:
                data_nd.leaf_pools = [
                    _load_pool(arrays, f"n{i}.t.h{h}", pm)
                    for h, pm in enumerate(rec["leaf_pools"])]
            divs = rec.get("divisions", {})
            side_divs = []
            for s in (0, 1):
                if f"d{s}" in divs:
                    side_divs.append(
                        _load_division(arrays, f"n{i}.d{s}", divs[f"d{s}"]))
            data_nd.divisions = tuple(side_divs)
            if "dt" in divs:
                data_nd.division = _load_division(arrays, f"n{i}.dt",
                                                  divs["dt"])
        nodes.append(data_nd)
    if kind == 0:
        return SimpleOracle(graph, tree, nodes, int(meta["big"]))
    oracle = TradeoffOracle(graph, tree, nodes, int(meta["r"]),
                            int(meta["big"]))
    return oracle
