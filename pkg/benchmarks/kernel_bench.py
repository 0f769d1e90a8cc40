#!/usr/bin/env python3
"""Compare the compiled kernels against the pure-Python fallback.

Runs the two hot paths (multi-source Dijkstra during preprocessing, point
location during queries) on identical inputs and reports throughput and the
speedup.  Results must agree bit-for-bit; this also re-checks that.

Usage: python3 benchmarks/kernel_bench.py [--k 32] [--diagrams 50]
"""
import argparse
import time

import numpy as np

from pdoracle import _pykernels
from pdoracle.decomposition import build_decomposition
from pdoracle.harness import gen_grid
from pdoracle.kernels import build_csr, graph_big
from pdoracle.voronoi import (build_dual, build_point_location,
                              compute_voronoi, piece_hole_context)

try:
    from pdoracle import _ckernels
except ImportError:
    _ckernels = None


def bench_dijkstra(impl, csr, n, sources, weights, reps):
    t0 = time.time()
    out = None
    for _ in range(reps):
        out = impl.dijkstra(n, *csr, sources, weights)
    return (time.time() - t0) / reps, out


def bench_locate(impl, pls, om, ctx, reps):
    t0 = time.time()
    acc = 0
    for _ in range(reps):
        for v in range(ctx.graph.num_vertices):
            val, site, steps = impl.pl_locate(
                pls.nodes, pls.root, om, 0, ctx.dist2d, ctx.pre2d,
                ctx.last2d, v)
            acc += site
    per = (time.time() - t0) / (reps * ctx.graph.num_vertices)
    return per, acc


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--k", type=int, default=32)
    ap.add_argument("--reps", type=int, default=5)
    args = ap.parse_args()

    g = gen_grid(args.k, mode="uniform", seed=1)
    n = g.num_vertices
    big = graph_big(g)
    csr = build_csr(g, big=big)
    sources = np.asarray([0], dtype=np.int64)
    weights = np.asarray([0], dtype=np.int64)

    print(f"graph: {args.k}x{args.k} grid, n={n}")
    t_py, out_py = bench_dijkstra(_pykernels, csr, n, sources, weights,
                                  args.reps)
    print(f"dijkstra python  : {t_py * 1e3:9.2f} ms")
    if _ckernels is not None:
        t_c, out_c = bench_dijkstra(_ckernels, csr, n, sources, weights,
                                    args.reps)
        assert all((np.asarray(a) == np.asarray(b)).all()
                   for a, b in zip(out_py, out_c)), "kernel outputs differ"
        print(f"dijkstra compiled: {t_c * 1e3:9.2f} ms   "
              f"(speedup {t_py / t_c:.1f}x, outputs identical)")

    tree = build_decomposition(g, 16)
    piece = tree.root.children[0].piece
    ctx = piece_hole_context(piece, piece.holes()[0], big=big)
    om = np.zeros(ctx.b, dtype=np.int64)
    asg = compute_voronoi(ctx, om)
    pls = build_point_location(ctx, build_dual(ctx, asg), asg)
    print(f"diagram: piece n={ctx.graph.num_vertices}, b={ctx.b}")
    t_py, acc_py = bench_locate(_pykernels, pls, om, ctx, args.reps)
    print(f"locate python    : {t_py * 1e6:9.2f} us/query")
    if _ckernels is not None:
        t_c, acc_c = bench_locate(_ckernels, pls, om, ctx, args.reps)
        assert acc_py == acc_c
        print(f"locate compiled  : {t_c * 1e6:9.2f} us/query   "
              f"(speedup {t_py / t_c:.1f}x, outputs identical)")
    if _ckernels is None:
        print("compiled kernels unavailable; showing fallback only")


if __name__ == "__main__":
    main()
