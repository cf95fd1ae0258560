"""Node centralities and the neighbourhood rigidity measures r and r~.

The rigidity of node ``i`` adds to its degree the average degree of the
vertices at distance 1, 2 and 3, weighted by p, p**2 and p**3. An empty
shell contributes nothing. ``r~`` further adds ``clustering * p_tilde * degree``.
"""
from __future__ import annotations

import csv
import io
import json
from collections import deque
from dataclasses import asdict, dataclass

import numpy as np

from .errors import InvalidParameterError
from .graph import Graph, bfs_distances
from .spectral import SpectralDecomposition, smallest_eigenpair

__all__ = [
    "RigidityParams",
    "clustering",
    "closeness",
    "closeness_with_flag",
    "betweenness",
    "betweenness_all",
    "rigidity",
    "rigidity_tilde",
    "NodeRow",
    "RigidityReport",
    "compare_with_eigenvector",
]


@dataclass(frozen=True)
class RigidityParams:
    p: float = 0.5
    p_tilde: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise InvalidParameterError(f"p must lie in [0, 1], got {self.p}")
        if self.p_tilde < 0:
            raise InvalidParameterError(f"p_tilde must be nonnegative, got {self.p_tilde}")


def _check_node(g: Graph, i: int):
    if not 0 <= i < g.n:
        raise InvalidParameterError(f"vertex {i} out of range for n={g.n}")


def clustering(g: Graph, i: int) -> float:
    """Fraction of neighbour pairs of ``i`` that are adjacent; 0 when deg(i) <= 1."""
    _check_node(g, i)
    nbrs = g.neighbors(i)
    d = len(nbrs)
    if d <= 1:
        return 0.0
    links = sum(1 for a in range(d) for b in range(a + 1, d) if g.has_edge(nbrs[a], nbrs[b]))
    return 2.0 * links / (d * (d - 1))


def closeness_with_flag(g: Graph, i: int) -> tuple[float, bool]:
    """Closeness of ``i`` and whether the graph had to be restricted to i's component.

    Uses (k - 1) / sum of distances over the k vertices reachable from ``i``;
    on a connected graph k = n.
    """
    _check_node(g, i)
    reach = [d for d in bfs_distances(g, i) if d >= 0]
    restricted = len(reach) < g.n
    total = sum(reach)
    if total == 0:
        return 0.0, restricted
    return (len(reach) - 1) / total, restricted


def closeness(g: Graph, i: int) -> float:
    return closeness_with_flag(g, i)[0]


def betweenness_all(g: Graph, normalized: bool = False) -> np.ndarray:
    """Shortest-path betweenness of every node (Brandes accumulation).

    Unnormalized values count each unordered pair {s, t} once. With
    ``normalized=True`` they are divided by (n-1)(n-2)/2.
    """
    n = g.n
    bc = np.zeros(n)
    for s in range(n):
        stack = []
        preds = [[] for _ in range(n)]
        sigma = np.zeros(n)
        dist = np.full(n, -1)
        sigma[s], dist[s] = 1.0, 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in g.neighbors(v):
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = np.zeros(n)
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
    bc /= 2.0  # each pair was seen from both endpoints
    if normalized and n > 2:
        bc /= (n - 1) * (n - 2) / 2.0
    return bc


def betweenness(g: Graph, i: int, normalized: bool = False) -> float:
    _check_node(g, i)
    return float(betweenness_all(g, normalized)[i])


def _shell_terms(g: Graph, i: int) -> list[float]:
    dist = bfs_distances(g, i)
    degs = g.degrees
    terms = []
    for k in (1, 2, 3):
        members = [j for j, d in enumerate(dist) if d == k]
        terms.append(float(np.mean(degs[members])) if members else 0.0)
    return terms


def rigidity(g: Graph, i: int, params: RigidityParams = RigidityParams()) -> float:
    """deg(i) + p*avgdeg(shell 1) + p^2*avgdeg(shell 2) + p^3*avgdeg(shell 3)."""
    _check_node(g, i)
    s1, s2, s3 = _shell_terms(g, i)
    p = params.p
    return g.degree(i) + p * s1 + p**2 * s2 + p**3 * s3


def rigidity_tilde(g: Graph, i: int, params: RigidityParams = RigidityParams()) -> float:
    return rigidity(g, i, params) + clustering(g, i) * params.p_tilde * g.degree(i)


@dataclass(frozen=True)
class NodeRow:
    node: int
    degree: int
    clustering: float
    closeness: float
    betweenness: float
    r: float
    r_tilde: float
    ev_component: float


REPORT_COLUMNS = ("node", "degree", "clustering", "closeness", "betweenness", "r", "r_tilde", "ev_component")


@dataclass(frozen=True)
class RigidityReport:
    rows: tuple
    params: RigidityParams
    disconnected: bool = False

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])

    def sorted_by(self, name: str, reverse: bool = False, key=None) -> list[NodeRow]:
        key = key or (lambda v: v)
        return sorted(self.rows, key=lambda r: key(getattr(r, name)), reverse=reverse)

    def to_records(self) -> list[dict]:
        return [_fmt_record(asdict(r)) for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=REPORT_COLUMNS, lineterminator="\n")
        w.writeheader()
        for rec in self.to_records():
            w.writerow({k: (f"{v:.12g}" if isinstance(v, float) else v) for k, v in rec.items()})
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(self.to_records())


def _fmt_record(rec: dict) -> dict:
    return {k: (float(f"{v:.12g}") if isinstance(v, float) else v) for k, v in rec.items()}


def compare_with_eigenvector(g: Graph, dec: SpectralDecomposition,
                             params: RigidityParams = RigidityParams(),
                             normalized_betweenness: bool = False) -> RigidityReport:
    """Per-node centralities next to the node's entry in the q_n eigenvector."""
    if dec.n != g.n:
        raise InvalidParameterError(f"decomposition has size {dec.n}, graph has {g.n} vertices")
    _, vec = smallest_eigenpair(dec)
    bc = betweenness_all(g, normalized_betweenness)
    rows, disconnected = [], False
    for i in range(g.n):
        close, flag = closeness_with_flag(g, i)
        disconnected |= flag
        r = rigidity(g, i, params)
        rows.append(NodeRow(
            node=i,
            degree=g.degree(i),
            clustering=clustering(g, i),
            closeness=close,
            betweenness=float(bc[i]),
            r=r,
            r_tilde=r + clustering(g, i) * params.p_tilde * g.degree(i),
            ev_component=float(vec[i]),
        ))
    return RigidityReport(tuple(rows), params, disconnected)
