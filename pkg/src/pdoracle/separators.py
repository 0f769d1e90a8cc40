"""Balanced simple-cycle separators on triangulated pieces.

The separator is a fundamental cycle of a BFS tree rooted at vertex 0.  For
every non-tree edge the cycle length and the weight strictly inside are
computed exactly: the dual spanning tree formed by the non-tree edges gives,
for each candidate, the set of enclosed faces as one subtree, and assigning
each vertex to a representative face turns enclosed weight into a subtree
sum plus a correction walked along the cycle.

Candidates are scanned in edge-id order; the first one that is balanced
(both open sides at most 2/3 of the weight) and short (length^2 <= 16 n)
wins.  Small pieces are scanned exhaustively and the most balanced short
cycle wins, which helps the decomposition make progress near its terminal
size.  If no candidate is balanced (possible for skewed weight functions,
e.g. all weight on one vertex) the most balanced one is returned.
"""
from __future__ import annotations

import numpy as np

from .errors import NotTriangulated
from .pieces import Piece
from .planar import PlanarGraph, triangulate_all

_EXHAUSTIVE_N = 256


def cycle_separator_darts(tg: PlanarGraph, weights, edge_penalty=None) -> list[int]:
    n = tg.num_vertices
    w = np.asarray(weights, dtype=np.float64)
    if len(w) != n or w.sum() <= 0:
        raise ValueError("need positive total weight over the piece vertices")
    # bigon faces (a closure edge parallel to a real edge) survive
    # triangulation; they enclose no vertices and are harmless here
    sizes = tg.face_sizes()
    if (sizes > 3).any():
        raise NotTriangulated("separator needs a triangulated piece")
    if edge_penalty is None:
        edge_penalty = np.zeros(tg.num_edges, dtype=bool)
    else:
        edge_penalty = np.asarray(edge_penalty, dtype=bool)

    tails, heads = tg.dart_tails(), tg.dart_heads()
    # penalised darts (hole-crossing diagonals) go last in the scan order so
    # the BFS tree avoids them where possible, keeping holes uncut
    dart_pen = edge_penalty[np.arange(2 * tg.num_edges) >> 1]
    order = np.lexsort((np.arange(2 * tg.num_edges), dart_pen, tails))
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, tails + 1, 1)
    np.cumsum(indptr, out=indptr)
    nbr_head = heads[order]
    nbr_dart = order

    parent_dart = np.full(n, -1, dtype=np.int64)
    depth = np.zeros(n, dtype=np.int64)
    bfs = np.empty(n, dtype=np.int64)
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    bfs[0] = 0
    qh, qt = 0, 1
    while qh < qt:
        u = int(bfs[qh])
        qh += 1
        for k in range(int(indptr[u]), int(indptr[u + 1])):
            v = int(nbr_head[k])
            if not seen[v]:
                seen[v] = True
                parent_dart[v] = nbr_dart[k]
                depth[v] = depth[u] + 1
                bfs[qt] = v
                qt += 1
    tree_edge = np.zeros(tg.num_edges, dtype=bool)
    tree_edge[parent_dart[parent_dart >= 0] >> 1] = True

    pw = np.zeros(n, dtype=np.float64)
    for u in bfs:
        p = parent_dart[u]
        pw[u] = w[u] + (pw[tails[p]] if p >= 0 else 0.0)

    log = max(1, int(np.ceil(np.log2(max(2, int(depth.max()) + 1)))) + 1)
    up = np.empty((log, n), dtype=np.int64)
    par = np.where(parent_dart >= 0, tails[np.maximum(parent_dart, 0)], 0)
    up[0] = par
    for k in range(1, log):
        up[k] = up[k - 1][up[k - 1]]

    nontree = np.flatnonzero(~tree_edge)
    u_arr = tg.edge_tail[nontree]
    v_arr = tg.edge_head[nontree]
    lca = _lca_batch(u_arr.copy(), v_arr.copy(), depth, up)
    clen = depth[u_arr] + depth[v_arr] - 2 * depth[lca] + 1
    wcyc = pw[u_arr] + pw[v_arr] - 2 * pw[lca] + w[lca]

    rep = tg.dart_face[tg.vertex_dart]
    tau = np.zeros((tg.num_faces, 2), dtype=np.float64)
    np.add.at(tau[:, 0], rep, w)
    np.add.at(tau[:, 1], rep, 1.0)
    tin, tout, sub, via = _cotree(tg, tree_edge, tau)

    # per candidate: the enclosed faces are the cotree subtree hanging below
    # the candidate's dual edge, i.e. below whichever endpoint face points
    # back through it
    fa = tg.dart_face[2 * nontree]
    fb = tg.dart_face[2 * nontree + 1]
    child = np.where(via[fa] == nontree, fa, fb)
    tsub = sub[child, 0]
    tsub_n = sub[child, 1]
    lo, hi = tin[child], tout[child]

    w_tot = float(w.sum())
    feasible = (3.0 * (tsub - wcyc) <= 2.0 * w_tot + 1e-9) & \
        (3.0 * (w_tot - wcyc - tsub) <= 2.0 * w_tot + 1e-9)
    rep_tin = tin[rep]

    def exact(i):
        """Walk the cycle: weight/vertex counts strictly inside, penalty use."""
        corr_w = 0.0
        corr_n = 0
        cuts = 1 if edge_penalty[nontree[i]] else 0
        l = int(lca[i])
        for start in (int(u_arr[i]), int(v_arr[i])):
            x = start
            while x != l:
                d = int(parent_dart[x])
                if edge_penalty[d >> 1]:
                    cuts += 1
                if lo[i] <= rep_tin[x] < hi[i]:
                    corr_w += w[x]
                    corr_n += 1
                x = int(tails[d])
        if lo[i] <= rep_tin[l] < hi[i]:
            corr_w += w[l]
            corr_n += 1
        win = float(tsub[i]) - corr_w
        wout = w_tot - float(wcyc[i]) - win
        nin = int(tsub_n[i]) - corr_n
        nout = n - int(clen[i]) - nin
        return win, wout, nin, nout, cuts

    # candidate tiers: balanced w.r.t. the weights, short, clean of
    # hole-crossing diagonals, and making vertex-count progress; within a
    # tier the smaller larger-child wins, then the shorter cycle
    exhaustive = n <= _EXHAUSTIVE_N
    tiers = [None, None, None, None, None]
    for i in range(len(nontree)):
        if not exhaustive and not feasible[i]:
            continue
        win, wout, nin, nout, cuts = exact(i)
        ms = max(win, wout)
        cl = int(clen[i])
        balanced = 3.0 * ms <= 2.0 * w_tot
        short = cl * cl <= 16 * n
        child_max = max(nin, nout) + cl
        progress = child_max < n
        if balanced and short and progress and cuts == 0:
            key = (child_max, cl, int(nontree[i]))
            if not exhaustive:
                return _cycle_darts(i, nontree, u_arr, v_arr, lca,
                                    parent_dart, tails)
            tier = 0
        elif balanced and short and progress:
            key = (cuts, child_max, cl, int(nontree[i]))
            tier = 1
        elif balanced and progress:
            key = (cuts, child_max, cl, int(nontree[i]))
            tier = 2
        elif progress:
            key = (ms, child_max, cl, int(nontree[i]))
            tier = 3
        else:
            key = (ms, cl, int(nontree[i]))
            tier = 4
        if tiers[tier] is None or key < tiers[tier][0]:
            tiers[tier] = (key, i)
    pick = next(t for t in tiers if t is not None)
    i = pick[1]
    return _cycle_darts(i, nontree, u_arr, v_arr, lca, parent_dart, tails)


def _cotree(tg, tree_edge, tau):
    """DFS over the dual restricted to non-tree edges.

    Returns (tin, tout, subtree tau sums, via) where ``via[f]`` is the
    non-tree edge connecting face f to its cotree parent.
    """
    nf = tg.num_faces
    adj = [[] for _ in range(nf)]
    for e in np.flatnonzero(~tree_edge):
        fa, fb = int(tg.dart_face[2 * e]), int(tg.dart_face[2 * e + 1])
        adj[fa].append((int(e), fb))
        adj[fb].append((int(e), fa))
    tin = np.full(nf, -1, dtype=np.int64)
    tout = np.full(nf, -1, dtype=np.int64)
    via = np.full(nf, -1, dtype=np.int64)
    sub = tau.astype(np.float64).copy()
    t = 0
    stack = [(0, -1, False)]
    order = []
    while stack:
        f, pe, done = stack.pop()
        if done:
            tout[f] = t
            order.append(f)
            continue
        if tin[f] >= 0:
            continue
        tin[f] = t
        t += 1
        via[f] = pe
        stack.append((f, pe, True))
        for e, f2 in reversed(adj[f]):
            if tin[f2] < 0:
                stack.append((f2, e, False))
    for f in order:
        for e, f2 in adj[f]:
            if via[f2] == e and tin[f2] > tin[f]:
                sub[f] += sub[f2]
    return tin, tout, sub, via


def _lca_batch(u, v, depth, up):
    du, dv = depth[u], depth[v]
    swap = du < dv
    u[swap], v[swap] = v[swap], u[swap].copy()
    delta = np.abs(du - dv)
    for k in range(up.shape[0]):
        m = (delta >> k) & 1 == 1
        u[m] = up[k][u[m]]
    eq = u == v
    for k in range(up.shape[0] - 1, -1, -1):
        m = (~eq) & (up[k][u] != up[k][v])
        u[m] = up[k][u[m]]
        v[m] = up[k][v[m]]
    out = np.where(eq, u, up[0][u])
    return out


def _cycle_vertices(u, v, l, parent_dart, tails):
    out = []
    x = u
    while x != l:
        out.append(x)
        x = int(tails[parent_dart[x]])
    out.append(l)
    x = v
    while x != l:
        out.append(x)
        x = int(tails[parent_dart[x]])
    return out


def _cycle_darts(i, nontree, u_arr, v_arr, lca, parent_dart, tails):
    e = int(nontree[i])
    a, b, l = int(u_arr[i]), int(v_arr[i]), int(lca[i])
    up_darts = []  # b -> l
    x = b
    while x != l:
        d = int(parent_dart[x])
        up_darts.append(d ^ 1)
        x = int(tails[d])
    down = []  # l -> a
    x = a
    while x != l:
        d = int(parent_dart[x])
        down.append(d)
        x = int(tails[d])
    down.reverse()
    return up_darts + down + [2 * e]


def cycle_separator(piece: Piece, weights) -> list[int]:
    """Vertex list of a balanced separator cycle in the piece triangulation."""
    tri = triangulate_all(piece.graph)
    darts = cycle_separator_darts(tri.graph, weights)
    return [tri.graph.tail(d) for d in darts]
