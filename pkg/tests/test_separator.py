import math

import numpy as np
import pytest

from pdoracle.decomposition import (H_MAX, build_decomposition,
                                    build_r_division)
from pdoracle.errors import NotTriangulated
from pdoracle.harness import gen_grid, gen_random_planar
from pdoracle.pieces import Piece, split_by_cycle_darts
from pdoracle.planar import triangulate_all
from pdoracle.separators import cycle_separator, cycle_separator_darts


def sides_weight(piece, tri, darts, weights):
    """Independent balance check: flood-fill face colours, sum vertex weight
    strictly on each side."""
    tg = tri.graph
    cyc_edges = set(d >> 1 for d in darts)
    cyc_verts = set(tg.tail(d) for d in darts)
    color = np.full(tg.num_faces, -1, dtype=np.int8)
    color[tg.dart_face[darts[0]]] = 0
    stack = [int(tg.dart_face[darts[0]])]
    adj = [[] for _ in range(tg.num_faces)]
    for e in range(tg.num_edges):
        if e not in cyc_edges:
            adj[int(tg.dart_face[2 * e])].append(int(tg.dart_face[2 * e + 1]))
            adj[int(tg.dart_face[2 * e + 1])].append(int(tg.dart_face[2 * e]))
    while stack:
        f = stack.pop()
        for f2 in adj[f]:
            if color[f2] < 0:
                color[f2] = color[f]
                stack.append(f2)
    color[color < 0] = 1
    w_side = [0.0, 0.0]
    for v in range(tg.num_vertices):
        if v in cyc_verts:
            continue
        cols = set()
        for d in tg.rotation(v):
            cols.add(int(color[tg.dart_face[d]]))
        assert len(cols) == 1, "off-cycle vertex must see one side only"
        w_side[cols.pop()] += float(weights[v])
    return w_side


def check_contract(piece, weights=None):
    tri = triangulate_all(piece.graph)
    n = piece.n
    if weights is None:
        weights = np.ones(n)
    darts = cycle_separator_darts(tri.graph, weights)
    tg = tri.graph
    verts = [tg.tail(d) for d in darts]
    assert len(set(verts)) == len(verts), "separator must be a simple cycle"
    for j, d in enumerate(darts):
        assert tg.head(d) == tg.tail(darts[(j + 1) % len(darts)])
    wa, wb = sides_weight(piece, tri, darts, weights)
    tot = float(np.sum(weights))
    assert 3 * wa <= 2 * tot + 1e-9
    assert 3 * wb <= 2 * tot + 1e-9
    assert len(darts) ** 2 <= 16 * n
    return darts


def test_triangle_degenerate():
    g = gen_random_planar(3, seed=1)
    piece = Piece.from_graph(g)
    w = np.zeros(3)
    w[0] = 1.0
    tri = triangulate_all(piece.graph)
    darts = cycle_separator_darts(tri.graph, w)
    assert len(darts) >= 2


def test_not_triangulated():
    g = gen_grid(4)
    with pytest.raises(NotTriangulated):
        cycle_separator_darts(g, np.ones(16))


def test_grid_20_contract():
    piece = Piece.from_graph(gen_grid(20))
    darts = check_contract(piece)
    assert len(darts) <= 80


def test_fan_balance():
    # path triangulated into a fan-like shape
    n = 31
    edges = [(i, i + 1, 1) for i in range(n - 1)]
    rotations = [[0]] + [[2 * i, 2 * (i - 1) + 1] for i in range(1, n - 1)] \
        + [[2 * (n - 2) + 1]]
    from pdoracle.planar import build_embedded_graph
    g = build_embedded_graph(edges, rotations)
    check_contract(Piece.from_graph(g))


def test_random_pieces_contract():
    for seed in range(20):
        g = gen_random_planar(30 + 13 * seed, seed=seed)
        check_contract(Piece.from_graph(g))


def test_separator_public_returns_vertices():
    piece = Piece.from_graph(gen_grid(8))
    verts = cycle_separator(piece, np.ones(64))
    assert len(set(verts)) == len(verts)


def test_decomposition_grid():
    tree = build_decomposition(gen_grid(16), 10)
    n_total = 256
    for nd in tree.nodes:
        assert len(nd.piece.holes()) <= H_MAX
        if nd.is_leaf:
            assert nd.piece.n <= 10 or nd.forced_leaf
    assert not any(nd.forced_leaf for nd in tree.nodes)
    # per-level edge partition: children real edges partition parent's
    for nd in tree.nodes:
        if nd.children:
            a, b = nd.children
            ra = set(int(x) for x in a.piece.real_root_edges())
            rb = set(int(x) for x in b.piece.real_root_edges())
            rp = set(int(x) for x in nd.piece.real_root_edges())
            assert ra | rb == rp and not (ra & rb)
    # per-level vertex sum <= n + sum of separator sizes above
    by_level = {}
    for nd in tree.nodes:
        by_level.setdefault(nd.level, []).append(nd)
    sep_total = 0
    for lvl in sorted(by_level):
        total = sum(nd.piece.n for nd in by_level[lvl])
        assert total <= n_total + sep_total
        sep_total += sum(len(nd.separator or []) for nd in by_level[lvl])


def test_decomposition_single_leaf():
    tree = build_decomposition(gen_grid(3), 10)
    assert len(tree.nodes) == 1
    assert tree.root.is_leaf


def test_boundary_decay():
    tree = build_decomposition(gen_grid(16), 10)
    by_level = {}
    for nd in tree.nodes:
        by_level.setdefault(nd.level, []).append(nd.piece.b)
    # boundary sizes stay bounded by C*sqrt(n) at every level
    for lvl, bs in by_level.items():
        assert max(bs) <= 6 * 16  # 6*sqrt(256)


def test_r_division_grid():
    piece = Piece.from_graph(gen_grid(32))
    rdiv = build_r_division(piece, 64)
    for pc in rdiv.pieces:
        assert pc.n <= 2 * 64
        assert pc.b <= 6 * math.sqrt(64)
        assert len(pc.holes()) <= H_MAX
    assert rdiv.boundary_count <= 12 * (1024 / 8 + 0)


def test_r_division_single_piece():
    piece = Piece.from_graph(gen_grid(4))
    rdiv = build_r_division(piece, 16)
    assert len(rdiv.pieces) == 1


def test_r_division_with_inherited_boundary():
    g = gen_grid(16)
    tree = build_decomposition(g, 100)
    nd = next(nd for nd in tree.nodes if nd.piece.b > 0)
    piece = nd.piece
    rdiv = build_r_division(piece, 16)
    bound = 12 * (piece.n / 4 + piece.b)
    assert rdiv.boundary_count <= bound
    for pc in rdiv.pieces:
        assert pc.n <= 32
