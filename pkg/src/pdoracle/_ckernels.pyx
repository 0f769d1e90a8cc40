# cython: language_level=3
"""Compiled kernels: must stay bit-identical to _pykernels.py."""

import numpy as np

cimport cython
from libc.stdlib cimport free, malloc

ctypedef long long i64

cdef i64 INF_C = (<i64>1 << 63) - 1
cdef i64 SAT_C = <i64>1 << 61

INF = INF_C
IMPL = "compiled"

NODE_W = 17
K_REAL = 0
K_COPY = 1
K_LEAF = 2
K_SINGLE = 3

cdef inline i64 ladd(i64 a, i64 b) nogil:
    cdef i64 s
    if a >= SAT_C or b >= SAT_C:
        return INF_C
    s = a + b
    if s >= SAT_C:
        return INF_C
    return s


cdef struct Heap:
    i64 *d
    i64 *c
    i64 *v
    Py_ssize_t size
    Py_ssize_t cap


cdef inline bint h_less(Heap *h, Py_ssize_t i, Py_ssize_t j) nogil:
    if h.d[i] != h.d[j]:
        return h.d[i] < h.d[j]
    if h.c[i] != h.c[j]:
        return h.c[i] < h.c[j]
    return h.v[i] < h.v[j]


cdef inline void h_swap(Heap *h, Py_ssize_t i, Py_ssize_t j) nogil:
    cdef i64 t
    t = h.d[i]; h.d[i] = h.d[j]; h.d[j] = t
    t = h.c[i]; h.c[i] = h.c[j]; h.c[j] = t
    t = h.v[i]; h.v[i] = h.v[j]; h.v[j] = t


cdef int h_push(Heap *h, i64 d, i64 c, i64 v) nogil:
    cdef Py_ssize_t i, p
    cdef i64 *nd
    if h.size == h.cap:
        h.cap = h.cap * 2 if h.cap else 64
        nd = <i64 *>malloc(3 * h.cap * sizeof(i64))
        if nd == NULL:
            return -1
        for i in range(h.size):
            nd[i] = h.d[i]
            nd[h.cap + i] = h.c[i]
            nd[2 * h.cap + i] = h.v[i]
        free(h.d)
        h.d = nd
        h.c = nd + h.cap
        h.v = nd + 2 * h.cap
    i = h.size
    h.d[i] = d; h.c[i] = c; h.v[i] = v
    h.size += 1
    while i > 0:
        p = (i - 1) >> 1
        if h_less(h, i, p):
            h_swap(h, i, p)
            i = p
        else:
            break
    return 0


cdef void h_pop(Heap *h) nogil:
    cdef Py_ssize_t i = 0, l, r, m
    h.size -= 1
    if h.size == 0:
        return
    h.d[0] = h.d[h.size]; h.c[0] = h.c[h.size]; h.v[0] = h.v[h.size]
    while True:
        l = 2 * i + 1
        r = l + 1
        m = i
        if l < h.size and h_less(h, l, m):
            m = l
        if r < h.size and h_less(h, r, m):
            m = r
        if m == i:
            break
        h_swap(h, i, m)
        i = m


@cython.boundscheck(False)
@cython.wraparound(False)
def dijkstra(Py_ssize_t n, const i64[:] indptr, const i64[:] heads,
             const i64[:] lens, const i64[:] darts, const i64[:] sources,
             const i64[:] weights):
    cdef Py_ssize_t nsrc = sources.shape[0]
    dist_a = np.full(n, INF_C, dtype=np.int64)
    parent_a = np.full(n, -1, dtype=np.int64)
    cell_a = np.full(n, nsrc, dtype=np.int64)
    ptail_a = np.full(n, n, dtype=np.int64)
    settled_a = np.zeros(n, dtype=np.int8)
    cdef i64[:] dist = dist_a
    cdef i64[:] parent = parent_a
    cdef i64[:] cell = cell_a
    cdef i64[:] ptail = ptail_a
    cdef signed char[:] settled = settled_a
    cdef Heap h
    h.d = NULL; h.c = NULL; h.v = NULL; h.size = 0; h.cap = 0
    cdef Py_ssize_t i, k
    cdef i64 s, w, d, c, u, v, nd, dt
    with nogil:
        for i in range(nsrc):
            s = sources[i]
            w = weights[i]
            if w < dist[s] or (w == dist[s] and <i64>i < cell[s]):
                dist[s] = w
                cell[s] = i
                parent[s] = -1
                ptail[s] = -1
                h_push(&h, w, i, s)
        while h.size > 0:
            d = h.d[0]; c = h.c[0]; u = h.v[0]
            h_pop(&h)
            if settled[u] or d != dist[u] or c != cell[u]:
                continue
            settled[u] = 1
            for k in range(indptr[u], indptr[u + 1]):
                v = heads[k]
                nd = ladd(d, lens[k])
                dt = darts[k]
                if nd < dist[v] or (nd == dist[v] and c < cell[v]):
                    dist[v] = nd
                    cell[v] = c
                    parent[v] = dt
                    ptail[v] = u
                    h_push(&h, nd, c, v)
                elif nd == dist[v] and c == cell[v] and (
                        u < ptail[v] or (u == ptail[v] and dt < parent[v])):
                    parent[v] = dt
                    ptail[v] = u
    free(h.d)
    return dist_a, parent_a, cell_a


@cython.boundscheck(False)
@cython.wraparound(False)
cdef void _locate(const i64[:, :] nodes, i64 root, const i64[:] omega,
                  i64 off, const i64[:, :] dist2d, const i64[:, :] pre2d,
                  const i64[:, :] last2d, Py_ssize_t v,
                  i64 *out_val, i64 *out_site, i64 *out_steps) nogil:
    cdef i64 best_val = INF_C
    cdef i64 best_site = <i64>1 << 62
    cdef i64 node = root
    cdef i64 steps = 0
    cdef i64 kind, m, bj, bv, bs, site, val, y, anchor, pv, py, slot, role
    cdef Py_ssize_t j, base
    while node >= 0:
        steps += 1
        kind = nodes[node, 0]
        m = nodes[node, 4]
        bj = -1
        bv = INF_C
        bs = <i64>1 << 62
        for j in range(m):
            base = 5 + 4 * j
            site = nodes[node, base]
            val = ladd(omega[off + site], dist2d[site, v])
            if val < bv or (val == bv and site < bs):
                bv = val; bs = site; bj = j
            if val < best_val or (val == best_val and site < best_site):
                best_val = val; best_site = site
        if kind == 2 or kind == 3:
            break
        base = 5 + 4 * bj
        site = nodes[node, base]
        y = nodes[node, base + 1]
        anchor = nodes[node, base + 2]
        pv = pre2d[site, v]
        py = pre2d[site, y]
        if pv <= py and py <= last2d[site, v]:
            best_val = ladd(omega[off + site], dist2d[site, v])
            best_site = site
            break
        if kind == 0:
            if pv > anchor:
                slot = bj
            else:
                slot = (bj + 2) % 3
        else:
            role = nodes[node, base + 3]
            if pv > anchor:
                slot = 1 + role
            else:
                slot = role
        node = nodes[node, 1 + slot]
    out_val[0] = best_val
    out_site[0] = best_site
    out_steps[0] = steps


def pl_locate(const i64[:, :] nodes, i64 root, const i64[:] omega, i64 off,
              const i64[:, :] dist2d, const i64[:, :] pre2d,
              const i64[:, :] last2d, Py_ssize_t v):
    cdef i64 val, site, steps
    _locate(nodes, root, omega, off, dist2d, pre2d, last2d, v,
            &val, &site, &steps)
    return val, site, steps


@cython.boundscheck(False)
@cython.wraparound(False)
def pl_locate_many(const i64[:, :] nodes, const i64[:] roots,
                   const i64[:] omega, const i64[:] offs, const i64[:] bases,
                   const i64[:, :] dist2d, const i64[:, :] pre2d,
                   const i64[:, :] last2d, Py_ssize_t v):
    cdef i64 best = INF_C
    cdef i64 best_slot = -1
    cdef i64 best_site = -1
    cdef i64 max_steps = 0
    cdef i64 calls = 0
    cdef Py_ssize_t k
    cdef i64 val, site, steps, total
    with nogil:
        for k in range(roots.shape[0]):
            if bases[k] >= INF_C:
                continue
            _locate(nodes, roots[k], omega, offs[k], dist2d, pre2d, last2d, v,
                    &val, &site, &steps)
            calls += 1
            if steps > max_steps:
                max_steps = steps
            total = ladd(bases[k], val)
            if total < best:
                best = total
                best_slot = k
                best_site = site
    return best, best_slot, best_site, calls, max_steps
