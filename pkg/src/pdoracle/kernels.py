"""Kernel selection: compiled extension with a pure-Python fallback.

Set ``PDO_PURE=1`` to force the Python implementation (used by tests and the
kernel benchmark to compare both).
"""
from __future__ import annotations

import os

import numpy as np

from . import _pykernels

if os.environ.get("PDO_PURE") == "1":
    impl = _pykernels
else:
    try:
        from . import _ckernels as impl  # type: ignore[attr-defined]
        if not hasattr(impl, "dijkstra"):
            impl = _pykernels
    except ImportError:
        impl = _pykernels

INF = _pykernels.INF
NODE_W = _pykernels.NODE_W
K_REAL = _pykernels.K_REAL
K_COPY = _pykernels.K_COPY
K_LEAF = _pykernels.K_LEAF
K_SINGLE = _pykernels.K_SINGLE

dijkstra = impl.dijkstra
pl_locate = impl.pl_locate
pl_locate_many = impl.pl_locate_many

IMPL = impl.IMPL


def graph_big(graph) -> int:
    """A finite length dominating every real path in the graph.

    Internally infinite darts carry this value instead of the saturating
    sentinel, so shortest paths through them still have strict lengths (the
    geometry of the diagrams needs a real metric).  Any distance >= big is
    logically infinite.
    """
    lens = graph.dart_len
    return int(lens[lens < INF].sum()) + 1


def finite_or_inf(value: int, big: int) -> int:
    return INF if value >= big else int(value)


def build_csr(graph, reverse=False, big=None):
    """Dart CSR for kernel consumption.

    Forward: arcs are darts grouped by tail, sorted by dart id.  Reverse:
    arcs are darts grouped by head (an arc ``head -> tail`` with the dart's
    length), for distances *to* a root.  ``big`` substitutes infinite darts.
    """
    n = graph.num_vertices
    tails = graph.dart_tails()
    heads = graph.dart_heads()
    group = heads if reverse else tails
    target = tails if reverse else heads
    order = np.argsort(group, kind="stable")
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, group + 1, 1)
    np.cumsum(indptr, out=indptr)
    lens = graph.dart_len[order].astype(np.int64)
    if big is not None:
        lens = np.where(lens >= INF, big, lens)
    return (indptr, target[order].astype(np.int64), lens,
            order.astype(np.int64))


def sssp(graph_csr, n, source, weight=0):
    indptr, heads, lens, darts = graph_csr
    return dijkstra(n, indptr, heads, lens, darts,
                    np.asarray([source], dtype=np.int64),
                    np.asarray([weight], dtype=np.int64))


def multi_sssp(graph_csr, n, sources, weights):
    indptr, heads, lens, darts = graph_csr
    return dijkstra(n, indptr, heads, lens, darts,
                    np.asarray(sources, dtype=np.int64),
                    np.asarray(weights, dtype=np.int64))
