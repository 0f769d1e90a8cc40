"""Combinatorial planar embedded multigraphs.

A graph is stored as a dart structure: undirected embedding edge ``i``
contributes dart ``2*i`` (tail -> head) and dart ``2*i + 1`` (head -> tail).
Each dart carries its own length, so the two directions of an edge are
independent.  The embedding is a rotation system: ``rot_next[d]`` is the next
dart around ``tail(d)`` in clockwise order.

Faces are the orbits of ``d -> rot_next[twin(d)]``.  With clockwise
rotations this rule puts every face on the left of its darts; bounded faces
are walked counterclockwise in the drawing the rotations came from.  All
left/right conventions in the package derive from this rule.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DanglingDart, EulerViolation, FormatError, NegativeCycle

# Length values are int64 with a saturating infinity sentinel.
INF = (1 << 63) - 1
_MAX_FINITE = 1 << 56  # inputs above this are rejected to keep sums exact


def ladd(a: int, b: int) -> int:
    """Length addition: infinity absorbs, finite sums saturate."""
    if a >= INF or b >= INF:
        return INF
    s = a + b
    return INF if s >= INF else s


def parse_len(tok: str) -> int:
    if tok == "inf":
        return INF
    try:
        v = int(tok)
    except ValueError as exc:
        raise FormatError(f"bad length {tok!r}") from exc
    if v >= _MAX_FINITE or v <= -_MAX_FINITE:
        raise FormatError(f"length {tok} out of range")
    return v


def fmt_len(v: int) -> str:
    return "inf" if v >= INF else str(v)


class PlanarGraph:
    """Immutable embedded multigraph (no self-loops).

    Attributes are plain numpy int64 arrays; ``face_label[f]`` is ``-1`` for
    holes and a caller-defined nonnegative id otherwise.
    """

    __slots__ = (
        "num_vertices",
        "num_edges",
        "edge_tail",
        "edge_head",
        "dart_len",
        "rot_next",
        "rot_prev",
        "vertex_dart",
        "dart_face",
        "face_dart",
        "face_label",
        "num_faces",
    )

    def __init__(self, num_vertices, edge_tail, edge_head, dart_len, rot_next,
                 vertex_dart, face_label=None, expect_connected=True):
        self.num_vertices = int(num_vertices)
        self.edge_tail = np.asarray(edge_tail, dtype=np.int64)
        self.edge_head = np.asarray(edge_head, dtype=np.int64)
        self.num_edges = len(self.edge_tail)
        self.dart_len = np.asarray(dart_len, dtype=np.int64)
        self.rot_next = np.asarray(rot_next, dtype=np.int64)
        self.vertex_dart = np.asarray(vertex_dart, dtype=np.int64)
        rp = np.empty_like(self.rot_next)
        if len(rp):
            rp[self.rot_next] = np.arange(len(rp), dtype=np.int64)
        self.rot_prev = rp
        self._trace_faces()
        if face_label is None:
            face_label = np.arange(self.num_faces, dtype=np.int64)
        self.face_label = np.asarray(face_label, dtype=np.int64)
        if len(self.face_label) != self.num_faces:
            raise EulerViolation("face label count mismatch")
        if expect_connected:
            euler = self.num_vertices - self.num_edges + self.num_faces
            if euler != 2:
                raise EulerViolation(
                    f"V-E+F = {self.num_vertices}-{self.num_edges}+{self.num_faces} != 2")

    # -- dart helpers ---------------------------------------------------

    def tail(self, d: int) -> int:
        e = d >> 1
        return int(self.edge_tail[e] if (d & 1) == 0 else self.edge_head[e])

    def head(self, d: int) -> int:
        return self.tail(d ^ 1)

    def next_in_face(self, d: int) -> int:
        return int(self.rot_next[d ^ 1])

    def prev_in_face(self, d: int) -> int:
        return int(self.rot_prev[d]) ^ 1

    def rotation(self, v: int) -> list[int]:
        """Darts leaving v in clockwise order, starting at vertex_dart[v]."""
        first = int(self.vertex_dart[v])
        if first < 0:
            return []
        out = [first]
        d = int(self.rot_next[first])
        while d != first:
            out.append(d)
            d = int(self.rot_next[d])
        return out

    def face_walk(self, f: int) -> list[int]:
        first = int(self.face_dart[f])
        out = [first]
        d = self.next_in_face(first)
        while d != first:
            out.append(d)
            d = self.next_in_face(d)
        return out

    def dart_tails(self) -> np.ndarray:
        t = np.empty(2 * self.num_edges, dtype=np.int64)
        t[0::2] = self.edge_tail
        t[1::2] = self.edge_head
        return t

    def dart_heads(self) -> np.ndarray:
        h = np.empty(2 * self.num_edges, dtype=np.int64)
        h[0::2] = self.edge_head
        h[1::2] = self.edge_tail
        return h

    def face_sizes(self) -> np.ndarray:
        return np.bincount(self.dart_face, minlength=self.num_faces)

    def holes(self) -> list[int]:
        return [int(f) for f in np.flatnonzero(self.face_label < 0)]

    # -- construction internals -----------------------------------------

    def _trace_faces(self):
        nd = 2 * self.num_edges
        dart_face = np.full(nd, -1, dtype=np.int64)
        face_dart = []
        nf = self.rot_next
        for d0 in range(nd):
            if dart_face[d0] >= 0:
                continue
            fid = len(face_dart)
            face_dart.append(d0)
            d = d0
            while True:
                dart_face[d] = fid
                d = int(nf[d ^ 1])
                if d == d0:
                    break
        if nd == 0:
            # a single isolated vertex still bounds one face
            face_dart = [-1] if self.num_vertices else []
        self.dart_face = dart_face
        self.face_dart = np.asarray(face_dart, dtype=np.int64)
        self.num_faces = len(face_dart)

    def is_connected(self) -> bool:
        if self.num_vertices <= 1:
            return True
        seen = np.zeros(self.num_vertices, dtype=bool)
        stack = [0]
        seen[0] = True
        tails = self.dart_tails()
        heads = self.dart_heads()
        adj = [[] for _ in range(self.num_vertices)]
        for d in range(2 * self.num_edges):
            adj[tails[d]].append(int(heads[d]))
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        return bool(seen.all())


def build_embedded_graph(edges: Sequence[tuple], rotations: Sequence[Iterable[int]],
                         face_label=None) -> PlanarGraph:
    """Build and validate a graph from an edge list and clockwise rotations.

    ``edges[i]`` is ``(tail, head, length)`` or ``(tail, head, len_uv,
    len_vu)``; edge ``i`` owns darts ``2*i`` and ``2*i + 1``.
    """
    n_edges = len(edges)
    edge_tail = np.empty(n_edges, dtype=np.int64)
    edge_head = np.empty(n_edges, dtype=np.int64)
    dart_len = np.empty(2 * n_edges, dtype=np.int64)
    num_vertices = len(rotations)
    for i, e in enumerate(edges):
        if len(e) == 3:
            t, h, luv = e
            lvu = luv
        else:
            t, h, luv, lvu = e
        if t == h:
            raise EulerViolation(f"self-loop at vertex {t}")
        if not (0 <= t < num_vertices and 0 <= h < num_vertices):
            raise DanglingDart(f"edge {i} endpoint out of range")
        edge_tail[i] = t
        edge_head[i] = h
        dart_len[2 * i] = luv
        dart_len[2 * i + 1] = lvu
    rot_next = np.full(2 * n_edges, -1, dtype=np.int64)
    vertex_dart = np.full(num_vertices, -1, dtype=np.int64)
    seen = np.zeros(2 * n_edges, dtype=bool)
    for v, rot in enumerate(rotations):
        rot = list(rot)
        if not rot:
            continue
        vertex_dart[v] = rot[0]
        for j, d in enumerate(rot):
            if not (0 <= d < 2 * n_edges) or seen[d]:
                raise DanglingDart(f"dart {d} repeated or out of range")
            t = edge_tail[d >> 1] if (d & 1) == 0 else edge_head[d >> 1]
            if t != v:
                raise DanglingDart(f"dart {d} listed at vertex {v}, tail is {t}")
            seen[d] = True
            rot_next[d] = rot[(j + 1) % len(rot)]
    if n_edges and not seen.all():
        missing = int(np.flatnonzero(~seen)[0])
        raise DanglingDart(f"dart {missing} missing from rotations")
    g = PlanarGraph(num_vertices, edge_tail, edge_head, dart_len, rot_next,
                    vertex_dart, face_label=face_label)
    if not g.is_connected():
        raise EulerViolation("graph is not connected")
    return g


# -- triangulation -----------------------------------------------------


@dataclass
class Triangulation:
    """A graph with all non-skipped faces reduced to 3-dart walks.

    Darts of the input keep their ids.  ``edge_host_face[i]`` is the face of
    the input graph that added edge ``i`` subdivides (-1 for input edges),
    and ``face_map[f]`` is the new id of skipped input face ``f``.
    """

    graph: PlanarGraph
    edge_host_face: np.ndarray
    face_map: dict


def triangulate_faces(g: PlanarGraph, skip_faces: Iterable[int]) -> Triangulation:
    skip = set(int(f) for f in skip_faces)
    tails = list(g.dart_tails())
    edge_tail = list(g.edge_tail)
    edge_head = list(g.edge_head)
    dart_len = list(g.dart_len)
    rot_next = list(g.rot_next)
    rot_prev = list(g.rot_prev)
    host = [-1] * g.num_edges

    def add_edge(a, c, before_a_dart, before_c_dart, face):
        """New INF edge a->c; dart a->c goes right before before_a_dart in
        a's rotation, twin right before before_c_dart in c's rotation."""
        e = len(edge_tail)
        d0, d1 = 2 * e, 2 * e + 1
        edge_tail.append(a)
        edge_head.append(c)
        dart_len.extend((INF, INF))
        host.append(face)
        tails.extend((a, c))
        for dn, target in ((d0, before_a_dart), (d1, before_c_dart)):
            p = rot_prev[target]
            rot_next.append(0)
            rot_prev.append(0)
            rot_next[p] = dn
            rot_prev[dn] = p
            rot_next[dn] = target
            rot_prev[target] = dn
        return d0, d1

    for f in range(g.num_faces):
        if f in skip:
            continue
        walk = g.face_walk(f)
        k = len(walk)
        if k <= 3:
            continue
        verts = [tails[d] for d in walk]
        cursor, fails = 0, 0
        while k > 3:
            i = cursor % k
            a = verts[(i - 1) % k]
            c = verts[(i + 1) % k]
            if a != c:
                d_prev = walk[(i - 1) % k]
                d_cur = walk[i]
                nd0, nd1 = add_edge(a, c, d_prev, walk[(i + 1) % k], f)
                # the triangle (d_prev, d_cur, nd1) is cut off; nd0 replaces
                # the pair in the remaining walk
                j = (i - 1) % k
                if j < i:
                    walk[j:i + 1] = [nd0]
                    verts[j:i + 1] = [a]
                else:  # i == 0, j == k-1
                    del walk[j]
                    del verts[j]
                    walk[0] = nd0
                    verts[0] = a
                k -= 1
                cursor = max(j - 1, 0)
                fails = 0
            else:
                cursor += 1
                fails += 1
                if fails > k:
                    raise EulerViolation(f"cannot triangulate walk of face {f}")

    g2 = PlanarGraph(g.num_vertices, edge_tail, edge_head, dart_len, rot_next,
                     g.vertex_dart, face_label=_inherit_labels(g, rot_next, host),
                     expect_connected=False)
    face_map = {}
    for f in skip:
        d0 = int(g.face_dart[f])
        if d0 >= 0:
            face_map[f] = int(g2.dart_face[d0])
    return Triangulation(g2, np.asarray(host, dtype=np.int64), face_map)


def _inherit_labels(g, rot_next, host):
    # labels for the re-traced faces: an intact face keeps its label, a new
    # triangle inherits the label of the face it subdivides
    nd = len(rot_next)
    dart_face = np.full(nd, -1, dtype=np.int64)
    labels = []
    for d0 in range(nd):
        if dart_face[d0] >= 0:
            continue
        fid = len(labels)
        d = d0
        walk = []
        while True:
            dart_face[d] = fid
            walk.append(d)
            d = rot_next[d ^ 1]
            if d == d0:
                break
        lab = None
        for d in walk:
            if d < 2 * g.num_edges:
                cand = int(g.face_label[g.dart_face[d]])
            else:
                cand = int(g.face_label[host[d >> 1]])
            lab = cand if lab is None else lab
        labels.append(lab if lab is not None else -1)
    return np.asarray(labels, dtype=np.int64)


def triangulate(g: PlanarGraph) -> PlanarGraph:
    """Triangulate every non-hole face with infinite-length edge pairs."""
    return triangulate_faces(g, g.holes()).graph


def triangulate_all(g: PlanarGraph) -> Triangulation:
    """Triangulate every face (holes included); used before separator search."""
    return triangulate_faces(g, ())


def triangulate_except(g: PlanarGraph, keep_face: int) -> Triangulation:
    """Triangulate everything but ``keep_face`` (other holes included)."""
    return triangulate_faces(g, (keep_face,))


# -- reweighting -------------------------------------------------------


def reweight_nonnegative(g: PlanarGraph):
    """Shift dart lengths by shortest-path potentials so all are >= 0.

    Potentials are distances from a virtual source with a zero-length arc to
    every vertex (infinite darts are not traversed).  Returns the reweighted
    graph and the potential array; for all u, v:
    ``new_dist(u, v) = old_dist(u, v) + pot(u) - pot(v)``.
    """
    n = g.num_vertices
    pot = np.zeros(n, dtype=np.int64)
    tails = g.dart_tails()
    heads = g.dart_heads()
    finite = g.dart_len < INF
    ft, fh = tails[finite], heads[finite]
    fl = g.dart_len[finite]
    for it in range(n):
        cand = pot[ft] + fl
        better = cand < pot[fh]
        if not better.any():
            break
        np.minimum.at(pot, fh[better], cand[better])
    else:
        if n and ((pot[ft] + fl) < pot[fh]).any():
            raise NegativeCycle("negative-length cycle detected")
    new_len = g.dart_len.copy()
    new_len[finite] = fl + pot[ft] - pot[fh]
    if (new_len[finite] < 0).any():
        raise NegativeCycle("reweighting failed to clear negatives")
    g2 = PlanarGraph(n, g.edge_tail, g.edge_head, new_len, g.rot_next,
                     g.vertex_dart, face_label=g.face_label,
                     expect_connected=False)
    return g2, pot


# -- text format -------------------------------------------------------


def write_graph(g: PlanarGraph) -> str:
    lines = [f"pg {g.num_vertices} {g.num_edges}"]
    for i in range(g.num_edges):
        lines.append(
            f"edge {g.edge_tail[i]} {g.edge_head[i]} "
            f"{fmt_len(int(g.dart_len[2 * i]))} {fmt_len(int(g.dart_len[2 * i + 1]))}")
    for v in range(g.num_vertices):
        lines.append("rot " + " ".join(["%d" % v] + [str(d) for d in g.rotation(v)]))
    return "\n".join(lines) + "\n"


def read_graph(text: str) -> PlanarGraph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("pg "):
        raise FormatError("missing pg header")
    try:
        _, vs, es = lines[0].split()
        num_v, num_e = int(vs), int(es)
    except ValueError as exc:
        raise FormatError("bad pg header") from exc
    if len(lines) != 1 + num_e + num_v:
        raise FormatError("wrong line count")
    edges = []
    for ln in lines[1:1 + num_e]:
        parts = ln.split()
        if len(parts) != 5 or parts[0] != "edge":
            raise FormatError(f"bad edge line: {ln!r}")
        edges.append((int(parts[1]), int(parts[2]),
                      parse_len(parts[3]), parse_len(parts[4])))
    rotations = [[] for _ in range(num_v)]
    for ln in lines[1 + num_e:]:
        parts = ln.split()
        if len(parts) < 2 or parts[0] != "rot":
            raise FormatError(f"bad rot line: {ln!r}")
        v = int(parts[1])
        if not (0 <= v < num_v):
            raise FormatError(f"rot vertex {v} out of range")
        rotations[v] = [int(x) for x in parts[2:]]
    return build_embedded_graph(edges, rotations)
