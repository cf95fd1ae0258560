"""Undirected simple graphs: construction, generators, composition, traversal.

Vertices are dense 0-based integers. A :class:`Graph` is immutable; every
operation that "modifies" a graph returns a new one.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import EdgeListParseError, InvalidParameterError

__all__ = [
    "Graph",
    "NeighborhoodShell",
    "FAMILIES",
    "complete",
    "complete_bipartite",
    "cycle",
    "path",
    "star",
    "build_family",
    "barabasi_albert",
    "add_pendant",
    "add_edges",
    "disjoint_union",
    "bridge_compose",
    "bfs_distances",
    "shell",
    "bipartition",
    "is_bipartite",
    "is_connected",
    "parse_edge_list",
    "serialize_edge_list",
]


def _norm_edge(u, v):
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices ``0..n-1``.

    ``edges`` holds each edge once as ``(u, v)`` with ``u < v``. Use
    :meth:`from_edges` to build one from arbitrary pairs.
    """

    n: int
    edges: frozenset

    def __post_init__(self):
        if self.n < 0:
            raise InvalidParameterError(f"vertex count must be nonnegative, got {self.n}")
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise InvalidParameterError(f"edge ({u}, {v}) is not a normalized pair in [0, {self.n})")

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Graph":
        seen = set()
        for u, v in pairs:
            u, v = int(u), int(v)
            if u == v:
                raise InvalidParameterError(f"self-loop at vertex {u}")
            e = _norm_edge(u, v)
            if e in seen:
                raise InvalidParameterError(f"duplicate edge {e}")
            seen.add(e)
        return cls(int(n), frozenset(seen))

    @cached_property
    def _adj(self) -> tuple[tuple[int, ...], ...]:
        nbrs = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(a)) for a in nbrs)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self._adj[i]

    def degree(self, i: int) -> int:
        return len(self._adj[i])

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self._adj], dtype=np.int64)

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in self.edges

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def adjacency_matrix(self) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            A[u, v] = A[v, u] = 1
        return A

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edge_count})"


@dataclass(frozen=True)
class NeighborhoodShell:
    """Vertices at exactly ``distance`` hops from ``center``."""

    center: int
    distance: int
    members: frozenset

    def __len__(self):
        return len(self.members)


# ---------------------------------------------------------------------------
# families

def complete(n: int) -> Graph:
    if n < 1:
        raise InvalidParameterError(f"complete graph needs n >= 1, got {n}")
    return Graph(n, frozenset((u, v) for u in range(n) for v in range(u + 1, n)))


def complete_bipartite(n: int, m: int) -> Graph:
    """K_{n,m} with parts ``[0, n)`` and ``[n, n+m)``."""
    if n < 1 or m < 1:
        raise InvalidParameterError(f"complete bipartite graph needs n, m >= 1, got ({n}, {m})")
    return Graph(n + m, frozenset((u, n + v) for u in range(n) for v in range(m)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise InvalidParameterError(f"cycle needs n >= 3, got {n}")
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def path(n: int) -> Graph:
    if n < 1:
        raise InvalidParameterError(f"path needs n >= 1, got {n}")
    return Graph(n, frozenset((i, i + 1) for i in range(n - 1)))


def star(n: int) -> Graph:
    """Star on ``n`` vertices: center 0 joined to leaves ``1..n-1``."""
    if n < 1:
        raise InvalidParameterError(f"star needs n >= 1, got {n}")
    return Graph(n, frozenset((0, i) for i in range(1, n)))


FAMILIES = ("complete", "complete_bipartite", "cycle", "path", "star")


def build_family(family: str, n: int, m: int | None = None) -> Graph:
    """Build one of the five analytic families by name."""
    family = family.replace("-", "_")
    if family == "complete_bipartite":
        if m is None:
            raise InvalidParameterError("complete_bipartite needs a second part size m")
        return complete_bipartite(n, m)
    builders = {"complete": complete, "cycle": cycle, "path": path, "star": star}
    if family not in builders:
        raise InvalidParameterError(f"unknown family {family!r}; expected one of {FAMILIES}")
    return builders[family](n)


# ---------------------------------------------------------------------------
# generators and composition

def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def barabasi_albert(n: int, m_attach: int = 5, rng=0) -> Graph:
    """Preferential-attachment graph.

    Starts from a clique on ``m_attach + 1`` vertices; every later vertex
    joins ``m_attach`` distinct existing vertices drawn without replacement
    with probability proportional to their current degree.

    Parameters
    ----------
    n : int
        Number of vertices.
    m_attach : int
        Edges added per new vertex; also the minimum degree.
    rng : int or numpy.random.Generator
        Seed or generator. The same integer seed always yields the same graph.
    """
    if m_attach < 1 or m_attach >= n:
        raise InvalidParameterError(f"need 1 <= m_attach < n, got m_attach={m_attach}, n={n}")
    gen = _as_generator(rng)
    seed_size = m_attach + 1
    edges = {(u, v) for u in range(seed_size) for v in range(u + 1, seed_size)}
    deg = np.zeros(n, dtype=np.float64)
    deg[:seed_size] = m_attach
    for new in range(seed_size, n):
        weights = deg[:new] / deg[:new].sum()
        targets = gen.choice(new, size=m_attach, replace=False, p=weights)
        for t in targets:
            edges.add((int(t), new))
        deg[targets] += 1
        deg[new] = m_attach
    return Graph(n, frozenset(edges))


def add_pendant(g: Graph, target: int) -> Graph:
    """Attach a new degree-1 vertex (id ``g.n``) to ``target``."""
    if not 0 <= target < g.n:
        raise InvalidParameterError(f"target {target} out of range for n={g.n}")
    return Graph(g.n + 1, g.edges | {(target, g.n)})


def add_edges(g: Graph, pairs: Iterable[tuple[int, int]], extra_vertices: int = 0) -> Graph:
    """Return ``g`` with ``extra_vertices`` new vertices and the given edges added."""
    n = g.n + extra_vertices
    new = set(g.edges)
    for u, v in pairs:
        if u == v:
            raise InvalidParameterError(f"self-loop at vertex {u}")
        e = _norm_edge(int(u), int(v))
        if e in new:
            raise InvalidParameterError(f"edge {e} already present")
        new.add(e)
    return Graph(n, frozenset(new))


def disjoint_union(*graphs: Graph) -> Graph:
    """Union with block relabelling: each graph is offset by the sizes before it."""
    offset, edges = 0, set()
    for g in graphs:
        edges.update((u + offset, v + offset) for u, v in g.edges)
        offset += g.n
    return Graph(offset, frozenset(edges))


def bridge_compose(g1: Graph, path_len: int, g2: Graph, anchor1: int, anchor2: int) -> Graph:
    """Join ``g1`` and ``g2`` through a path of ``path_len`` new vertices.

    Layout is ``g1`` ids first, then the path, then ``g2``. One edge links
    ``anchor1`` to the first path vertex and one links the last path vertex
    to ``anchor2``.
    """
    if path_len < 1:
        raise InvalidParameterError(f"path_len must be >= 1, got {path_len}")
    if not 0 <= anchor1 < g1.n:
        raise InvalidParameterError(f"anchor1 {anchor1} out of range for n={g1.n}")
    if not 0 <= anchor2 < g2.n:
        raise InvalidParameterError(f"anchor2 {anchor2} out of range for n={g2.n}")
    union = disjoint_union(g1, path(path_len), g2)
    first = g1.n
    last = g1.n + path_len - 1
    return add_edges(union, [(anchor1, first), (last, g1.n + path_len + anchor2)])


# ---------------------------------------------------------------------------
# traversal

def bfs_distances(g: Graph, source: int) -> list[int]:
    """Hop distances from ``source``; unreachable vertices get -1."""
    dist = [-1] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def shell(g: Graph, i: int, k: int) -> NeighborhoodShell:
    """Vertices at shortest-path distance exactly ``k`` from ``i``."""
    if not 0 <= i < g.n:
        raise InvalidParameterError(f"vertex {i} out of range for n={g.n}")
    if k < 1:
        raise InvalidParameterError(f"shell distance must be >= 1, got {k}")
    dist = bfs_distances(g, i)
    return NeighborhoodShell(i, k, frozenset(j for j, d in enumerate(dist) if d == k))


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    return min(bfs_distances(g, 0)) >= 0


def bipartition(g: Graph) -> tuple[int, ...] | None:
    """Return a +1/-1 coloring with every edge bichromatic, or None if an odd cycle exists."""
    color = [0] * g.n
    for root in range(g.n):
        if color[root]:
            continue
        color[root] = 1
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in g.neighbors(u):
                if color[w] == 0:
                    color[w] = -color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return None
    return tuple(color)


def is_bipartite(g: Graph) -> bool:
    return bipartition(g) is not None


# ---------------------------------------------------------------------------
# edge-list text format

def parse_edge_list(text: str) -> Graph:
    """Parse ``u v`` lines, with optional ``n <count>`` header and ``#`` comments."""
    n_header = None
    edges = set()
    max_id = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "n":
            if len(parts) != 2 or not parts[1].isdigit():
                raise EdgeListParseError(lineno, f"bad header {raw!r}")
            if n_header is not None:
                raise EdgeListParseError(lineno, "repeated 'n' header")
            n_header, header_line = int(parts[1]), lineno
            continue
        if len(parts) != 2 or not (parts[0].isdigit() and parts[1].isdigit()):
            raise EdgeListParseError(lineno, f"expected two nonnegative integers, got {raw!r}")
        u, v = int(parts[0]), int(parts[1])
        if u == v:
            raise EdgeListParseError(lineno, f"self-loop at vertex {u}")
        e = _norm_edge(u, v)
        if e in edges:
            raise EdgeListParseError(lineno, f"duplicate edge {u} {v}")
        edges.add(e)
        max_id = max(max_id, e[1])
        if n_header is not None and max_id >= n_header:
            raise EdgeListParseError(lineno, f"vertex {max_id} exceeds declared n={n_header}")
    if n_header is None:
        return Graph(max_id + 1, frozenset(edges))
    if max_id >= n_header:
        raise EdgeListParseError(header_line, f"vertex {max_id} exceeds declared n={n_header}")
    n = n_header
    return Graph(n, frozenset(edges))


def serialize_edge_list(g: Graph) -> str:
    """Canonical text: sorted ``u v`` lines; an ``n`` header only when ids alone can't recover n."""
    lines = [f"{u} {v}" for u, v in g.sorted_edges()]
    implied = max((v for _, v in g.edges), default=-1) + 1
    if implied != g.n:
        lines.insert(0, f"n {g.n}")
    return "\n".join(lines)
