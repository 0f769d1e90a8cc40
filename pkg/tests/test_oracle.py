import numpy as np
import pytest

from pdoracle.errors import GraphError
from pdoracle.harness import (BruteOracle, check_equivalence, gen_grid,
                              gen_random_planar)
from pdoracle.kernels import INF
from pdoracle.oracle_simple import build_oracle
from pdoracle.planar import build_embedded_graph


def test_single_edge_graph():
    g = build_embedded_graph([(0, 1, 5, 7)], [[0], [1]])
    o = build_oracle(g)
    assert len(o.tree.nodes) == 1
    assert o.query(0, 1) == 5
    assert o.query(1, 0) == 7
    assert o.query(0, 0) == 0


def test_grid_manhattan_queries():
    k = 16
    o = build_oracle(gen_grid(k))
    import random
    rng = random.Random(3)
    for _ in range(50):
        i, j = rng.randrange(k), rng.randrange(k)
        assert o.query(0, i * k + j) == i + j


def test_exhaustive_small_grids():
    for k in (4, 8):
        g = gen_grid(k, mode="uniform", seed=k)
        o = build_oracle(g)
        rep = check_equivalence(o, BruteOracle(g), "all")
        assert rep["mismatch_count"] == 0
        assert rep["stats"]["step_violations"] == 0


def test_exhaustive_random_graphs():
    for seed in range(6):
        g = gen_random_planar(60 + 35 * seed, seed=seed, max_len=50)
        o = build_oracle(g)
        rep = check_equivalence(o, BruteOracle(g), "all")
        assert rep["mismatch_count"] == 0, rep["mismatches"][:3]
        assert rep["stats"]["step_violations"] == 0


def test_tie_heavy_exhaustive():
    for seed in (11, 12):
        g = gen_random_planar(120, seed=seed, mode="tie-heavy")
        o = build_oracle(g)
        rep = check_equivalence(o, BruteOracle(g), "all")
        assert rep["mismatch_count"] == 0


def test_infinite_across_components():
    # two triangles joined only by an infinite-length edge pair
    edges = [(0, 1, 1), (1, 2, 1), (2, 0, 1),
             (3, 4, 1), (4, 5, 1), (5, 3, 1),
             (2, 3, INF, INF)]
    rotations = [
        [0, 5], [2, 1], [4, 12, 3],
        [6, 13, 11], [8, 7], [10, 9],
    ]
    g = build_embedded_graph(edges, rotations)
    o = build_oracle(g, terminal_size=4)
    assert o.query(0, 4) == INF
    assert o.query(4, 0) == INF
    assert o.query(0, 2) == 1


def test_directedness_respected():
    g = gen_random_planar(80, seed=21, max_len=30)
    o = build_oracle(g)
    b = BruteOracle(g)
    diffs = 0
    for u, v in [(1, 50), (3, 70), (10, 60)]:
        assert o.query(u, v) == b.query(u, v)
        assert o.query(v, u) == b.query(v, u)
        if o.query(u, v) != o.query(v, u):
            diffs += 1
    assert diffs > 0


def test_space_report_grid():
    o = build_oracle(gen_grid(8))
    rep = o.space_report()
    for key in ("global_tables", "site_trees", "pls_nodes", "diagram_weights",
                "routing", "terminal_tables"):
        assert rep[key] > 0, key
    assert rep["total"] == sum(v for k, v in rep.items() if k != "total")


def test_space_report_leaf_only():
    g = gen_grid(3)
    o = build_oracle(g)
    rep = o.space_report()
    assert rep["pls_nodes"] == 0
    assert rep["site_trees"] == 0
    assert rep["terminal_tables"] == 81


def test_deterministic_reports():
    g = gen_random_planar(90, seed=5)
    r1 = build_oracle(g).space_report()
    r2 = build_oracle(g).space_report()
    assert r1 == r2


def test_negative_lengths_rejected():
    g = build_embedded_graph([(0, 1, -2, 5)], [[0], [1]])
    with pytest.raises(GraphError):
        build_oracle(g)
