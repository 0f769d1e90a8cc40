"""Command-line front end: gen, build, query, verify, bench, stats, plot."""
from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
import time

import numpy as np

from . import harness
from .decomposition import build_decomposition, decompose, node_stats
from .errors import FormatError, GraphError
from .harness import BruteOracle, check_equivalence
from .kernels import IMPL, graph_big
from .oracle_simple import build_oracle
from .oracle_tradeoff import build_tradeoff_oracle
from .pieces import Piece
from .planar import read_graph, write_graph
from .serialize import dump_oracle, load_oracle
from .voronoi import build_dual, compute_voronoi, dual_to_json, \
    piece_hole_context

log = logging.getLogger("pdoracle")


def _setup_logging():
    level = os.environ.get("PDO_LOG", "off").lower()
    levels = {"off": logging.CRITICAL + 10, "info": logging.INFO,
              "debug": logging.DEBUG}
    logging.basicConfig(level=levels.get(level, logging.INFO),
                        format="%(levelname)s %(name)s: %(message)s")


def _load_graph(path):
    with open(path) as fh:
        return read_graph(fh.read())


def _load_oracle(path):
    with open(path, "rb") as fh:
        return load_oracle(fh.read())


def cmd_gen(args):
    if args.kind == "grid":
        if args.k is None:
            raise SystemExit("gen --kind grid requires --k")
        g = harness.gen_grid(args.k, mode=args.lengths, max_len=args.max_len,
                             seed=args.seed)
    else:
        if args.n is None:
            raise SystemExit("gen --kind random requires --n")
        g = harness.gen_random_planar(args.n, seed=args.seed,
                                      max_len=args.max_len,
                                      mode=args.lengths)
    with open(args.out, "w") as fh:
        fh.write(write_graph(g))
    print(f"wrote {args.out}: V={g.num_vertices} E={g.num_edges}")
    return 0


def cmd_build(args):
    g = _load_graph(args.infile)
    t0 = time.time()
    if args.oracle == "simple":
        o = build_oracle(g, terminal_size=args.terminal_size)
    else:
        if args.r is None:
            raise _Usage("build --oracle tradeoff requires --r")
        o = build_tradeoff_oracle(g, args.r)
    blob = dump_oracle(o)
    with open(args.out, "wb") as fh:
        fh.write(blob)
    print(f"built {args.oracle} oracle: n={o.n} diagrams={o.diagram_count} "
          f"bytes={len(blob)} time={time.time() - t0:.2f}s kernels={IMPL}")
    return 0


def cmd_query(args):
    o = _load_oracle(args.oracle)
    d = o.query(args.u, args.v)
    print("inf" if d >= (1 << 62) else d)
    return 0


def _pairs_spec(text):
    if text == "all":
        return "all", 0
    parts = text.split(":")
    if parts[0] != "sample" or len(parts) != 3:
        raise _Usage("--pairs must be all or sample:m:seed")
    return ("sample", int(parts[1])), int(parts[2])


def cmd_verify(args):
    o = _load_oracle(args.oracle)
    g = _load_graph(args.graph)
    if g.num_vertices != o.n:
        raise SystemExit("oracle and graph disagree on vertex count")
    pairs, seed = _pairs_spec(args.pairs)
    brute = BruteOracle(g)
    if args.threads > 1:
        rep = _verify_parallel(o, brute, pairs, seed, args.threads)
    else:
        rep = check_equivalence(o, brute, pairs, seed=seed)
    out = {
        "mismatches": rep["mismatch_count"],
        "queries": rep["stats"]["queries"],
        "pl_calls": rep["stats"]["pl_calls"],
        "pl_steps_max": rep["stats"]["pl_steps_max"],
        "step_violations": rep["stats"]["step_violations"],
    }
    if args.json:
        print(json.dumps(out, sort_keys=True))
    else:
        for k in ("queries", "pl_calls", "pl_steps_max", "step_violations"):
            print(f"{k}: {out[k]}")
        print(f"mismatches: {out['mismatches']}")
        for u, v, got, want in rep["mismatches"][:10]:
            print(f"  {u} -> {v}: got {got} want {want}")
    return 1 if rep["mismatch_count"] else 0


def _verify_parallel(oracle, brute, pairs, seed, threads):
    from concurrent.futures import ThreadPoolExecutor
    all_pairs = list(harness.iter_pairs(brute.n, pairs, seed))
    for u, _ in all_pairs:
        brute.dists_from(u)  # fill the cache before fanning out

    def work(chunk):
        rep = {"mism": [], "q": 0, "calls": 0, "smax": 0, "viol": 0}
        for u, v in chunk:
            qs = {}
            got = oracle.query(u, v, stats=qs)
            want = brute.query(u, v)
            rep["q"] += 1
            rep["calls"] += qs.get("pl_calls", 0)
            rep["smax"] = max(rep["smax"], qs.get("pl_steps_max", 0))
            rep["viol"] += qs.get("step_violations", 0)
            if got != want:
                rep["mism"].append((u, v, got, want))
        return rep

    size = max(1, len(all_pairs) // threads)
    chunks = [all_pairs[i:i + size] for i in range(0, len(all_pairs), size)]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        parts = list(ex.map(work, chunks))
    mism = [m for p in parts for m in p["mism"]]
    return {"mismatch_count": len(mism), "mismatches": mism[:50],
            "stats": {"queries": sum(p["q"] for p in parts),
                      "pl_calls": sum(p["calls"] for p in parts),
                      "pl_steps_max": max(p["smax"] for p in parts),
                      "step_violations": sum(p["viol"] for p in parts)}}


def cmd_bench(args):
    o = _load_oracle(args.oracle)
    g = _load_graph(args.graph)
    rng = random.Random(args.seed)
    qs = [(rng.randrange(g.num_vertices), rng.randrange(g.num_vertices))
          for _ in range(args.queries)]
    t0 = time.time()
    calls = 0
    smax = 0
    nodes_seen = 0
    for u, v in qs:
        st = {}
        o.query(u, v, stats=st)
        calls += st.get("pl_calls", 0)
        smax = max(smax, st.get("pl_steps_max", 0))
        nodes_seen += st.get("nodes_visited", 0)
    dt = time.time() - t0
    out = {"queries": len(qs), "total_s": round(dt, 4),
           "us_per_query": round(1e6 * dt / max(1, len(qs)), 2),
           "pl_calls_per_query": round(calls / max(1, len(qs)), 3),
           "pl_steps_max": smax,
           "nodes_per_query": round(nodes_seen / max(1, len(qs)), 2),
           "kernels": IMPL}
    if args.json:
        print(json.dumps(out, sort_keys=True))
    else:
        for k, val in out.items():
            print(f"{k}: {val}")
    return 0


def cmd_stats(args):
    o = _load_oracle(args.oracle)
    rep = o.space_report()
    if args.json:
        print(json.dumps({"nodes": o.stats_lines(), "space": rep},
                         sort_keys=True))
    else:
        for line in o.stats_lines():
            print(json.dumps(line, sort_keys=True))
        print(json.dumps({"space": rep}, sort_keys=True))
    return 0


def cmd_plot(args):
    o = _load_oracle(args.oracle)
    try:
        owner_txt, hole_txt = args.diagram.split(":")
        owner, hole_idx = int(owner_txt), int(hole_txt)
    except ValueError:
        raise _Usage("--diagram must be <owner-vertex>:<pool-index>")
    data = o.nodes[args.piece]
    pool_lists = list(getattr(data, "pools", ()) or ())
    flat = []
    for s, pools in enumerate(pool_lists):
        for pool in pools:
            if owner in pool.owner_slot:
                flat.append((s, pool))
    for pool in getattr(data, "leaf_pools", []) or []:
        if owner in pool.owner_slot:
            flat.append((-1, pool))
    if hole_idx >= len(flat):
        raise SystemExit(f"no diagram {args.diagram} at piece {args.piece}")
    side, pool = flat[hole_idx]
    # replay the deterministic decomposition to recover the piece, then
    # rebuild this one diagram and dump it
    tree = _replay_tree(o)
    nd = tree.nodes[args.piece]
    piece = nd.piece if side < 0 else nd.children[side].piece
    ctx = piece_hole_context(piece, pool.hole_face, big=o.big)
    slot = pool.owner_slot[owner]
    om = pool.omega[slot * pool.b:(slot + 1) * pool.b]
    asg = compute_voronoi(ctx, om)
    dual = build_dual(ctx, asg)
    blob = dual_to_json(ctx, dual)
    blob["owner"] = owner
    blob["piece"] = args.piece
    with open(args.out, "w") as fh:
        json.dump(blob, fh, sort_keys=True, indent=1)
    print(f"wrote {args.out}")
    return 0


def _replay_tree(o):
    if isinstance(o.graph, type(None)):
        raise SystemExit("oracle container lacks the graph")
    if o.tree.nodes[0].piece is not None:
        return o.tree
    if hasattr(o, "r"):
        terminal = max(o.r, 8)
        return decompose(Piece.from_graph(o.graph),
                         lambda p: p.n <= terminal)
    return build_decomposition(o.graph, 16)


class _Usage(Exception):
    pass


def make_parser():
    ap = argparse.ArgumentParser(prog="pdoracle",
                                 description="Exact planar distance oracles")
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate a graph file")
    g.add_argument("--kind", choices=["grid", "random"], required=True)
    g.add_argument("--k", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--lengths", choices=["unit", "uniform", "tie-heavy"],
                   default="unit")
    g.add_argument("--max-len", type=int, default=100)
    g.add_argument("--out", required=True)
    g.set_defaults(fn=cmd_gen)

    b = sub.add_parser("build", help="build an oracle container")
    b.add_argument("--in", dest="infile", required=True)
    b.add_argument("--oracle", choices=["simple", "tradeoff"],
                   required=True)
    b.add_argument("--r", type=int)
    b.add_argument("--terminal-size", type=int, default=16)
    b.add_argument("--threads", type=int, default=1)
    b.add_argument("--out", required=True)
    b.set_defaults(fn=cmd_build)

    q = sub.add_parser("query", help="one distance query")
    q.add_argument("--oracle", required=True)
    q.add_argument("--u", type=int, required=True)
    q.add_argument("--v", type=int, required=True)
    q.set_defaults(fn=cmd_query)

    v = sub.add_parser("verify", help="compare against brute force")
    v.add_argument("--oracle", required=True)
    v.add_argument("--graph", required=True)
    v.add_argument("--pairs", default="all")
    v.add_argument("--threads", type=int, default=1)
    v.add_argument("--json", action="store_true")
    v.set_defaults(fn=cmd_verify)

    be = sub.add_parser("bench", help="query timing and step statistics")
    be.add_argument("--oracle", required=True)
    be.add_argument("--graph", required=True)
    be.add_argument("--queries", type=int, default=1000)
    be.add_argument("--seed", type=int, default=0)
    be.add_argument("--json", action="store_true")
    be.set_defaults(fn=cmd_bench)

    st = sub.add_parser("stats", help="decomposition and space report")
    st.add_argument("--oracle", required=True)
    st.add_argument("--json", action="store_true")
    st.set_defaults(fn=cmd_stats)

    p = sub.add_parser("plot", help="dump one Voronoi diagram as JSON")
    p.add_argument("--oracle", required=True)
    p.add_argument("--piece", type=int, required=True)
    p.add_argument("--diagram", required=True,
                   help="<owner-vertex>:<pool-index>")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_plot)
    return ap


def main(argv=None):
    _setup_logging()
    ap = make_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except _Usage as exc:
        ap.exit(2, f"usage error: {exc}\n")
    except (FormatError, GraphError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
