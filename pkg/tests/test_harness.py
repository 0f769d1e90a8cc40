import json

import numpy as np
import pytest

from pdoracle.harness import (BruteOracle, check_equivalence, corpus_bytes,
                              default_corpus, gen_grid, gen_random_planar)
from pdoracle.kernels import INF
from pdoracle.oracle_simple import build_oracle
from pdoracle.planar import write_graph


def test_grid_counts():
    assert (gen_grid(2).num_vertices, gen_grid(2).num_edges) == (4, 4)
    assert (gen_grid(3).num_vertices, gen_grid(3).num_edges) == (9, 12)


def test_grid_deterministic_bytes():
    a = corpus_bytes({"kind": "grid", "k": 4, "mode": "uniform",
                      "max_len": 100, "seed": 7})
    b = corpus_bytes({"kind": "grid", "k": 4, "mode": "uniform",
                      "max_len": 100, "seed": 7})
    assert a == b


def test_random_planar_validates():
    for n, seed in ((3, 0), (50, 1), (200, 2)):
        g = gen_random_planar(n, seed=seed)
        assert g.num_vertices == n
        assert g.num_vertices - g.num_edges + g.num_faces == 2


def test_random_seeds_differ():
    a = write_graph(gen_random_planar(100, seed=1))
    b = write_graph(gen_random_planar(100, seed=2))
    assert a != b


def test_tie_heavy_mode():
    g = gen_random_planar(60, seed=3, mode="tie-heavy")
    lens = g.dart_len[g.dart_len < INF]
    assert set(int(x) for x in lens) <= {1, 2}


def test_brute_self_consistent():
    g = gen_random_planar(50, seed=4)
    b1, b2 = BruteOracle(g), BruteOracle(g)
    for u in (0, 7, 23):
        assert (b1.dists_from(u) == b2.dists_from(u)).all()


def test_corpus_regeneration():
    entries = default_corpus(count=4)
    for e in entries:
        assert corpus_bytes(e) == corpus_bytes(e)
    assert len({e["name"] for e in entries}) == 4


def test_fault_injection_detected():
    g = gen_grid(6, mode="uniform", seed=5)
    o = build_oracle(g)
    rep = check_equivalence(o, BruteOracle(g), ("sample", 200), seed=1)
    assert rep["mismatch_count"] == 0

    class Corrupt:
        def __init__(self, inner):
            self.inner = inner

        def query(self, u, v, stats=None):
            d = self.inner.query(u, v, stats=stats)
            return d + 1 if (u, v) == (1, 30) else d

    rep = check_equivalence(Corrupt(o), BruteOracle(g), "all")
    assert rep["mismatch_count"] >= 1
