"""Graph generators, brute-force reference oracles, and equivalence checks.

Everything is deterministic under an explicit seed; regenerating a corpus
entry yields byte-identical graph files.
"""
from __future__ import annotations

import heapq
import json
import random

import numpy as np

from .planar import INF, PlanarGraph, build_embedded_graph, write_graph


def gen_grid(k: int, mode: str = "unit", max_len: int = 100,
             seed: int = 0) -> PlanarGraph:
    """k x k grid with the canonical clockwise rotation system.

    ``mode``: "unit" (all darts 1), "uniform" (independent random ints in
    [1, max_len] per dart), or "tie-heavy" (lengths in {1, 2}).
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    rng = random.Random(seed)
    vid = lambda i, j: i * k + j
    edges = []
    right = {}
    up = {}
    for i in range(k):
        for j in range(k):
            if j + 1 < k:
                right[(i, j)] = len(edges)
                edges.append((vid(i, j), vid(i, j + 1)))
            if i + 1 < k:
                up[(i, j)] = len(edges)
                edges.append((vid(i, j), vid(i + 1, j)))

    def draw():
        if mode == "unit":
            return 1
        if mode == "tie-heavy":
            return rng.randint(1, 2)
        return rng.randint(1, max_len)

    full = [(t, h, draw(), draw()) for t, h in edges]
    rotations = []
    for i in range(k):
        for j in range(k):
            rot = []
            if (i, j) in right:          # east
                rot.append(2 * right[(i, j)])
            if (i - 1, j) in up:         # south
                rot.append(2 * up[(i - 1, j)] + 1)
            if (i, j - 1) in right:      # west
                rot.append(2 * right[(i, j - 1)] + 1)
            if (i, j) in up:             # north
                rot.append(2 * up[(i, j)])
            rotations.append(rot)
    return build_embedded_graph(full, rotations)


class _Rot:
    """Mutable rotation system used while growing/pruning a triangulation."""

    def __init__(self):
        self.edge_tail = []
        self.edge_head = []
        self.rot_next = []
        self.rot_prev = []
        self.vertex_dart = []

    def new_vertex(self):
        self.vertex_dart.append(-1)
        return len(self.vertex_dart) - 1

    def _append_dart(self):
        self.rot_next.append(-1)
        self.rot_prev.append(-1)

    def add_first_edge(self, a, b):
        e = len(self.edge_tail)
        self.edge_tail.append(a)
        self.edge_head.append(b)
        self._append_dart()
        self._append_dart()
        for d, v in ((2 * e, a), (2 * e + 1, b)):
            if self.vertex_dart[v] < 0:
                self.vertex_dart[v] = d
                self.rot_next[d] = d
                self.rot_prev[d] = d
            else:
                first = self.vertex_dart[v]
                last = self.rot_prev[first]
                self.rot_next[last] = d
                self.rot_prev[d] = last
                self.rot_next[d] = first
                self.rot_prev[first] = d
        return e

    def add_edge_at(self, a, b, before_a, before_b):
        """New edge a-b; dart a->b right before before_a in a's rotation."""
        e = len(self.edge_tail)
        self.edge_tail.append(a)
        self.edge_head.append(b)
        for dn, target in ((2 * e, before_a), (2 * e + 1, before_b)):
            self._append_dart()
            p = self.rot_prev[target]
            self.rot_next[p] = dn
            self.rot_prev[dn] = p
            self.rot_next[dn] = target
            self.rot_prev[target] = dn
        return e

    def remove_edge(self, e):
        for d in (2 * e, 2 * e + 1):
            v = self.edge_tail[e] if d == 2 * e else self.edge_head[e]
            nxt, prv = self.rot_next[d], self.rot_prev[d]
            if nxt == d:
                self.vertex_dart[v] = -1
            else:
                self.rot_next[prv] = nxt
                self.rot_prev[nxt] = prv
                if self.vertex_dart[v] == d:
                    self.vertex_dart[v] = nxt


def gen_random_planar(n: int, seed: int = 0, max_len: int = 100,
                      mode: str = "uniform") -> PlanarGraph:
    """Random connected planar embedded graph.

    Grows a random triangulation by inserting each new vertex inside a
    random face, then deletes a random subset of edges subject to keeping
    the graph connected.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    rng = random.Random(seed)
    r = _Rot()
    for _ in range(3):
        r.new_vertex()
    e01 = r.add_first_edge(0, 1)
    e12 = r.add_first_edge(1, 2)
    # close the triangle so that the face walk (0->1, 1->2, 2->0) exists
    e20 = r.add_edge_at(2, 0, 2 * e12 + 1, 2 * e01)
    faces = [(2 * e01, 2 * e12, 2 * e20), (2 * e01 + 1, 2 * e20 + 1, 2 * e12 + 1)]
    for _ in range(n - 3):
        fi = rng.randrange(len(faces))
        d0, d1, d2 = faces[fi]

        def tail(d):
            return r.edge_tail[d >> 1] if (d & 1) == 0 else r.edge_head[d >> 1]

        a, b, c = tail(d0), tail(d1), tail(d2)
        v = r.new_vertex()
        # spokes in order a, c, b so v's clockwise rotation is (a, c, b)
        evas = _insert_spoke(r, v, a, d0)
        evcs = _insert_spoke(r, v, c, d2)
        evbs = _insert_spoke(r, v, b, d1)
        faces[fi] = (d0, 2 * evbs + 1, 2 * evas)
        faces.append((d1, 2 * evcs + 1, 2 * evbs))
        faces.append((d2, 2 * evas + 1, 2 * evcs))
    ne = len(r.edge_tail)
    target = (n - 1) + int(round(rng.uniform(0.35, 0.9) * (ne - (n - 1))))
    order = list(range(ne))
    rng.shuffle(order)
    alive = [True] * ne
    cur = ne
    for e in order:
        if cur <= target:
            break
        alive[e] = False
        if _connected(r, alive, n):
            r.remove_edge(e)
            cur -= 1
        else:
            alive[e] = True

    def draw():
        if mode == "unit":
            return 1
        if mode == "tie-heavy":
            return rng.randint(1, 2)
        return rng.randint(1, max_len)

    keep = [e for e in range(ne) if alive[e]]
    edges = [(r.edge_tail[e], r.edge_head[e], draw(), draw()) for e in keep]
    renum = {e: i for i, e in enumerate(keep)}
    rotations = []
    for v in range(n):
        rot = []
        d0 = r.vertex_dart[v]
        if d0 >= 0:
            d = d0
            while True:
                rot.append(2 * renum[d >> 1] + (d & 1))
                d = r.rot_next[d]
                if d == d0:
                    break
        rotations.append(rot)
    return build_embedded_graph(edges, rotations)


def _insert_spoke(r, v, corner_vertex, walk_dart):
    """Edge v->corner inside a face; corner dart goes right before walk_dart."""
    first = r.vertex_dart[v]
    if first < 0:
        e = len(r.edge_tail)
        r.edge_tail.append(v)
        r.edge_head.append(corner_vertex)
        r._append_dart()
        r._append_dart()
        d0, d1 = 2 * e, 2 * e + 1
        r.vertex_dart[v] = d0
        r.rot_next[d0] = d0
        r.rot_prev[d0] = d0
        p = r.rot_prev[walk_dart]
        r.rot_next[p] = d1
        r.rot_prev[d1] = p
        r.rot_next[d1] = walk_dart
        r.rot_prev[walk_dart] = d1
        return e
    return r.add_edge_at(v, corner_vertex, first, walk_dart)


def _connected(r, alive, n):
    adj = [[] for _ in range(n)]
    cnt = 0
    for e, ok in enumerate(alive):
        if ok:
            adj[r.edge_tail[e]].append(r.edge_head[e])
            adj[r.edge_head[e]].append(r.edge_tail[e])
            cnt += 1
    if cnt < n - 1:
        return False
    seen = [False] * n
    seen[0] = True
    stack = [0]
    k = 1
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if not seen[w]:
                seen[w] = True
                k += 1
                stack.append(w)
    return k == n


class BruteOracle:
    """Plain textbook Dijkstra over the dart lists; no planar machinery."""

    def __init__(self, g: PlanarGraph):
        self.g = g
        self.n = g.num_vertices
        self._adj = [[] for _ in range(self.n)]
        tails, heads = g.dart_tails(), g.dart_heads()
        for d in range(2 * g.num_edges):
            L = int(g.dart_len[d])
            if L < INF:
                self._adj[tails[d]].append((int(heads[d]), L))
        self._cache = {}

    def dists_from(self, u: int) -> np.ndarray:
        if u not in self._cache:
            dist = np.full(self.n, INF, dtype=np.int64)
            dist[u] = 0
            heap = [(0, u)]
            done = [False] * self.n
            while heap:
                d, x = heapq.heappop(heap)
                if done[x]:
                    continue
                done[x] = True
                for w, L in self._adj[x]:
                    nd = d + L
                    if nd < dist[w]:
                        dist[w] = nd
                        heapq.heappush(heap, (nd, w))
            self._cache[u] = dist
        return self._cache[u]

    def query(self, u: int, v: int) -> int:
        return int(self.dists_from(u)[v])


def iter_pairs(n: int, pairs, seed: int = 0):
    """Yield query pairs: ``pairs`` is "all" or ("sample", m)."""
    if pairs == "all":
        for u in range(n):
            for v in range(n):
                yield u, v
    else:
        _, m = pairs
        rng = random.Random(seed)
        for _ in range(m):
            yield rng.randrange(n), rng.randrange(n)


def check_equivalence(oracle, brute: BruteOracle, pairs="all", seed: int = 0):
    """Compare an oracle against brute force; returns a report dict."""
    mismatches = []
    stats = {"queries": 0, "pl_calls": 0, "pl_steps_max": 0,
             "step_violations": 0}
    for u, v in iter_pairs(brute.n, pairs, seed):
        qs = {}
        got = oracle.query(u, v, stats=qs)
        want = brute.query(u, v)
        stats["queries"] += 1
        stats["pl_calls"] += qs.get("pl_calls", 0)
        stats["pl_steps_max"] = max(stats["pl_steps_max"], qs.get("pl_steps_max", 0))
        stats["step_violations"] += qs.get("step_violations", 0)
        if got != want:
            if len(mismatches) < 50:
                mismatches.append((u, v, got, want))
    return {"mismatches": mismatches,
            "mismatch_count": len(mismatches),
            "stats": stats}


# -- corpus ------------------------------------------------------------


def corpus_entry_graph(entry: dict) -> PlanarGraph:
    kind = entry["kind"]
    if kind == "grid":
        return gen_grid(entry["k"], mode=entry.get("mode", "unit"),
                        max_len=entry.get("max_len", 100),
                        seed=entry.get("seed", 0))
    if kind == "random":
        return gen_random_planar(entry["n"], seed=entry.get("seed", 0),
                                 max_len=entry.get("max_len", 100),
                                 mode=entry.get("mode", "uniform"))
    raise ValueError(f"unknown generator kind {kind!r}")


def corpus_bytes(entry: dict) -> bytes:
    return write_graph(corpus_entry_graph(entry)).encode()


def load_corpus(path: str) -> list:
    with open(path) as fh:
        return json.load(fh)


def default_corpus(count: int = 30, n_lo: int = 50, n_hi: int = 400,
                   seed: int = 1) -> list:
    """The standing random-graph corpus used by the acceptance tests."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(n_lo, n_hi)
        mode = "tie-heavy" if i % 5 == 4 else "uniform"
        out.append({"name": f"rand-{i:02d}", "kind": "random", "n": n,
                    "seed": 1000 + i, "max_len": 100, "mode": mode})
    return out
