"""Pure-Python kernels: Dijkstra variants and point-location descent.

Same contracts as the compiled twin in ``_ckernels.pyx``; results must be
bit-identical.  All arrays are int64; INF is the saturating infinity.

Tie-breaking is canonical and heap-order independent:

* distances compare as ``(dist, cell)`` lexicographically, where ``cell`` is
  the index of the originating source (0 for single-source runs);
* among incoming darts tight in ``(dist, cell)``, the parent is the one
  minimising ``(tail vertex, dart id)``.
"""
from __future__ import annotations

import heapq

import numpy as np

INF = (1 << 63) - 1
# values this large are already logically infinite; collapsing them early
# keeps repeated additions away from signed overflow
SAT = 1 << 61

IMPL = "python"


def _ladd(a: int, b: int) -> int:
    if a >= SAT or b >= SAT:
        return INF
    s = a + b
    return INF if s >= SAT else s


def dijkstra(n, indptr, heads, lens, darts, sources, weights):
    """Multi-source Dijkstra over a dart CSR.

    Returns (dist, parent_dart, cell); ``cell[v]`` is the winning source
    index, ``n_sources`` for vertices no source reaches at all.
    """
    nsrc = len(sources)
    dist = np.full(n, INF, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    cell = np.full(n, nsrc, dtype=np.int64)
    ptail = np.full(n, n, dtype=np.int64)
    settled = np.zeros(n, dtype=bool)
    heap = []
    for i in range(nsrc):
        s = int(sources[i])
        w = int(weights[i])
        if w < dist[s] or (w == dist[s] and i < cell[s]):
            dist[s] = w
            cell[s] = i
            parent[s] = -1
            ptail[s] = -1
            heapq.heappush(heap, (w, i, s))
    while heap:
        d, c, u = heapq.heappop(heap)
        if settled[u] or d != dist[u] or c != cell[u]:
            continue
        settled[u] = True
        for k in range(indptr[u], indptr[u + 1]):
            v = int(heads[k])
            nd = _ladd(d, int(lens[k]))
            if nd < dist[v] or (nd == dist[v] and c < cell[v]):
                dist[v] = nd
                cell[v] = c
                parent[v] = int(darts[k])
                ptail[v] = u
                heapq.heappush(heap, (nd, c, v))
            elif nd == dist[v] and c == cell[v] and (
                    u < ptail[v] or (u == ptail[v] and int(darts[k]) < parent[v])):
                parent[v] = int(darts[k])
                ptail[v] = u
    return dist, parent, cell


# Point-location node records: rows of width NODE_W =
# [kind, child0, child1, child2, n_entries, (site, y, anchor, role) * 3].
# Branch slots are derived: at a real centroid with winning entry j, right
# descends slot j and left slot (j-1) mod 3; at a hole copy, role 0 marks
# the edge toward the previous copy (left slot 0, right slot 1) and role 1
# the edge toward the next copy (left slot 1, right slot 2).
NODE_W = 17
K_REAL = 0
K_COPY = 1
K_LEAF = 2
K_SINGLE = 3
_ENT = 5


def pl_locate(nodes, root, omega, off, dist2d, pre2d, last2d, v):
    """Locate vertex v; returns (value, site, steps).

    ``omega[off + site]`` is the additive weight of a site; values combine as
    ``omega + tree distance``.  The traversal keeps a running minimum over
    every explicitly compared site, which makes the answer exact even when a
    branch is missing from the current subtree.
    """
    best_val = INF
    best_site = (1 << 62)
    node = int(root)
    steps = 0
    while node >= 0:
        steps += 1
        kind = int(nodes[node, 0])
        m = int(nodes[node, 4])
        bj = -1
        bv = INF
        bs = (1 << 62)
        for j in range(m):
            base = _ENT + 4 * j
            site = int(nodes[node, base])
            val = _ladd(int(omega[off + site]), int(dist2d[site, v]))
            if val < bv or (val == bv and site < bs):
                bv, bs, bj = val, site, j
            if val < best_val or (val == best_val and site < best_site):
                best_val, best_site = val, site
        if kind == K_LEAF or kind == K_SINGLE:
            break
        base = _ENT + 4 * bj
        site = int(nodes[node, base])
        y = int(nodes[node, base + 1])
        anchor = int(nodes[node, base + 2])
        pv = int(pre2d[site, v])
        py = int(pre2d[site, y])
        if pv <= py <= int(last2d[site, v]):
            # v lies on the root-to-y path: its cell is this site
            best_val = _ladd(int(omega[off + site]), int(dist2d[site, v]))
            best_site = site
            break
        right = pv > anchor
        if kind == K_REAL:
            slot = bj if right else (bj + 2) % 3
        else:
            role = int(nodes[node, base + 3])
            slot = (1 + role) if right else role
        node = int(nodes[node, 1 + slot])
    return best_val, best_site, steps


def pl_locate_many(nodes, roots, omega, offs, bases, dist2d, pre2d, last2d, v):
    """Minimum of ``bases[k] + locate(slot k, v)`` over all slots.

    Returns (best_total, best_slot, best_site, calls, max_steps).
    """
    best = INF
    best_slot = -1
    best_site = -1
    max_steps = 0
    calls = 0
    for k in range(len(roots)):
        base = int(bases[k])
        if base >= INF:
            continue
        val, site, steps = pl_locate(nodes, int(roots[k]), omega, int(offs[k]),
                                     dist2d, pre2d, last2d, v)
        calls += 1
        if steps > max_steps:
            max_steps = steps
        total = _ladd(base, val)
        if total < best:
            best = total
            best_slot = k
            best_site = site
    return best, best_slot, best_site, calls, max_steps
