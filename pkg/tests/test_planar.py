import numpy as np
import pytest

from pdoracle.errors import (DanglingDart, EulerViolation, FormatError,
                             NegativeCycle, NotSimple)
from pdoracle.harness import gen_grid, gen_random_planar
from pdoracle.pieces import Piece, split_by_cycle
from pdoracle.planar import (INF, build_embedded_graph, read_graph,
                             reweight_nonnegative, triangulate,
                             triangulate_all, triangulate_faces, write_graph)


def cycle4():
    edges = [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]
    rotations = [[0, 7], [2, 1], [4, 3], [6, 5]]
    return build_embedded_graph(edges, rotations)


def k4():
    # triangle 0,1,2 with 3 inside
    edges = [(0, 1, 1), (1, 2, 1), (2, 0, 1), (0, 3, 1), (1, 3, 1), (2, 3, 1)]
    rotations = [
        [0, 6, 5],   # 0: to 1, to 3, to 2
        [2, 8, 1],   # 1: to 2, to 3, to 0
        [4, 10, 3],  # 2: to 0, to 3, to 1
        [7, 9, 11],  # 3: to 0, to 1, to 2
    ]
    return build_embedded_graph(edges, rotations)


def test_cycle4_counts():
    g = cycle4()
    assert (g.num_vertices, g.num_edges, g.num_faces) == (4, 4, 2)


def test_single_edge_counts():
    g = build_embedded_graph([(0, 1, 5)], [[0], [1]])
    assert (g.num_vertices, g.num_edges, g.num_faces) == (2, 1, 1)


def test_k4_counts():
    g = k4()
    assert (g.num_vertices, g.num_edges, g.num_faces) == (4, 6, 4)
    assert all(len(g.face_walk(f)) == 3 for f in range(g.num_faces))


def test_face_degree_sum_is_2e():
    for seed in range(5):
        g = gen_random_planar(40, seed=seed)
        assert int(g.face_sizes().sum()) == 2 * g.num_edges
        assert g.num_vertices - g.num_edges + g.num_faces == 2


def test_bad_rotation_raises():
    edges = [(0, 1, 1), (1, 2, 1)]
    with pytest.raises(DanglingDart):
        build_embedded_graph(edges, [[0], [1, 2], [3, 3]])
    with pytest.raises(DanglingDart):
        build_embedded_graph(edges, [[0], [2, 1], []])


def test_disconnected_raises():
    edges = [(0, 1, 1), (2, 3, 1)]
    with pytest.raises(EulerViolation):
        build_embedded_graph(edges, [[0], [1], [2], [3]])


def test_triangulate_cycle4():
    g = cycle4()
    g2 = triangulate(g)
    assert g2.num_edges == g.num_edges + 2  # both quad faces get a diagonal
    assert all(len(g2.face_walk(f)) == 3 for f in range(g2.num_faces))
    assert (g2.dart_len[2 * g.num_edges:] == INF).all()


def test_triangulate_k4_is_identity():
    g = k4()
    assert triangulate(g).num_edges == g.num_edges


def test_triangulate_hexagon_with_outer_hole():
    edges = [(i, (i + 1) % 6, 1) for i in range(6)]
    rotations = [[2 * i, (2 * ((i - 1) % 6)) + 1] for i in range(6)]
    g = build_embedded_graph(edges, rotations)
    assert g.num_faces == 2
    # mark the face left of dart 1 (the reversed first edge) as a hole
    labels = np.array([0, 0], dtype=np.int64)
    labels[g.dart_face[1]] = -1
    g.face_label = labels
    g2 = triangulate(g)
    assert g2.num_edges - g.num_edges == 3
    sizes = g2.face_sizes()
    for f in range(g2.num_faces):
        if g2.face_label[f] >= 0:
            assert sizes[f] == 3
        else:
            assert sizes[f] == 6


def test_triangulate_all_random():
    for seed in (0, 3):
        g = gen_random_planar(60, seed=seed)
        tri = triangulate_all(g)
        assert all(len(tri.graph.face_walk(f)) == 3
                   for f in range(tri.graph.num_faces))
        # original darts keep ids and lengths
        assert (tri.graph.dart_len[:2 * g.num_edges] == g.dart_len).all()
        assert (tri.edge_host_face[:g.num_edges] == -1).all()
        assert (tri.edge_host_face[g.num_edges:] >= 0).all()


def test_reweight_identity():
    g = gen_grid(3, mode="uniform", seed=5)
    g2, pot = reweight_nonnegative(g)
    assert (pot == pot[0]).all()
    assert (g2.dart_len == g.dart_len).all()


def test_reweight_negative_path():
    # a -> b (-2), b -> c (5); reverse darts infinite
    edges = [(0, 1, -2, INF), (1, 2, 5, INF)]
    g = build_embedded_graph(edges, [[0], [2, 1], [3]])
    g2, pot = reweight_nonnegative(g)
    assert list(pot) == [0, -2, 0]
    assert int(g2.dart_len[0]) == 0
    assert int(g2.dart_len[2]) == 3


def test_reweight_negative_cycle():
    edges = [(0, 1, -2, 1)]
    g = build_embedded_graph(edges, [[0], [1]])
    with pytest.raises(NegativeCycle):
        reweight_nonnegative(g)


def test_reweight_preserves_tree_structure():
    from pdoracle import kernels
    for seed in range(6):
        g = gen_random_planar(80, seed=seed, max_len=30)
        g2, pot = reweight_nonnegative(g)  # no-op weights but full path
        csr1 = kernels.build_csr(g)
        csr2 = kernels.build_csr(g2)
        for src in (0, 5, 17):
            d1, p1, _ = kernels.sssp(csr1, g.num_vertices, src)
            d2, p2, _ = kernels.sssp(csr2, g.num_vertices, src)
            assert (p1 == p2).all()
            fin = d1 < INF
            assert (d2[fin] == d1[fin] + pot[src] - pot[fin]).all()


def test_split_by_cycle_partitions_edges():
    g = gen_grid(5)
    piece = Piece.from_graph(g)
    # middle row of the grid, closed through vertex 12's ring
    cyc = [10, 11, 12, 13, 14, 9]  # not a real cycle; use a square instead
    cyc = [6, 7, 12, 11]
    a, b, cv = split_by_cycle(piece, cyc)
    ra = set(int(x) for x in a.real_root_edges())
    rb = set(int(x) for x in b.real_root_edges())
    assert ra | rb == set(range(g.num_edges))
    assert not (ra & rb)
    shared = set(a.to_root_vertex) & set(b.to_root_vertex)
    assert shared == set(cv)
    for side in (a, b):
        assert side.graph.num_vertices - side.graph.num_edges + \
            side.graph.num_faces == 2
        assert set(cv) <= set(side.to_root_vertex[side.boundary])
        # every boundary vertex touches a hole
        hole_verts = set()
        for f in side.holes():
            for d in side.graph.face_walk(f):
                hole_verts.add(side.graph.tail(d))
        assert set(side.boundary) <= hole_verts


def test_split_triangle_inside():
    g = k4()
    piece = Piece.from_graph(g)
    a, b, cv = split_by_cycle(piece, [0, 1, 2])
    small, big = (a, b) if a.n == 3 else (b, a)
    assert small.n == 3
    assert len(small.real_edges()) == 3
    assert big.n == 4


def test_split_not_simple():
    g = gen_grid(4)
    with pytest.raises(NotSimple):
        split_by_cycle(Piece.from_graph(g), [0, 1, 0, 4])


def test_split_revalidates_random():
    for seed in (1, 2):
        g = gen_random_planar(50, seed=seed)
        piece = Piece.from_graph(g)
        tri = triangulate_all(piece.graph)
        # fundamental cycle style: use separator machinery once available;
        # here take any face-of-tri triangle as a tiny cycle
        f = 0
        walk = tri.graph.face_walk(f)
        from pdoracle.pieces import split_by_cycle_darts
        a, b, cv = split_by_cycle_darts(piece, tri, walk)
        assert len(a.real_root_edges()) + len(b.real_root_edges()) == g.num_edges


def test_graph_file_roundtrip():
    g = gen_grid(4, mode="uniform", seed=9)
    text = write_graph(g)
    g2 = read_graph(text)
    assert write_graph(g2) == text
    with pytest.raises(FormatError):
        read_graph("nope\n")


def test_grid_counts():
    g2 = gen_grid(2)
    assert (g2.num_vertices, g2.num_edges) == (4, 4)
    g3 = gen_grid(3)
    assert (g3.num_vertices, g3.num_edges) == (9, 12)
    assert g3.num_faces == 5


def test_gen_deterministic():
    a = write_graph(gen_grid(4, mode="uniform", max_len=100, seed=7))
    b = write_graph(gen_grid(4, mode="uniform", max_len=100, seed=7))
    assert a == b
    c = write_graph(gen_random_planar(100, seed=3))
    d = write_graph(gen_random_planar(100, seed=3))
    assert c == d
    e = write_graph(gen_random_planar(100, seed=4))
    assert c != e


def test_random_planar_triangle():
    g = gen_random_planar(3, seed=0)
    assert g.num_vertices == 3
    assert g.num_edges >= 2
