"""Scripted scenarios on constructed graphs.

Each runner builds a graph, takes the eigenvector of its smallest
Q-eigenvalue (the principal mode of the flow), reports named entries of
interest and a per-node rigidity table, and runs a short exact simulation at
the midpoint of the principal instability window when one exists.

Every result is a pure function of the runner's arguments.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateWindowError, InvalidParameterError
from .graph import (
    Graph,
    add_edges,
    add_pendant,
    barabasi_albert,
    bridge_compose,
    complete,
    star,
)
from .dynamics import PotentialParams, principal_window, simulate
from .metrics import RigidityParams, RigidityReport, clustering, compare_with_eigenvector
from .spectral import SpectralDecomposition, decompose_graph, smallest_eigenpair

__all__ = [
    "ScenarioResult",
    "scenario_pendant_complete",
    "scenario_scale_free_additions",
    "scenario_bridge",
    "scenario_star",
    "scenario_clustered_hubs",
    "SCENARIOS",
    "run_scenario",
]

SIG = 12


def _round(x):
    return float(f"{x:.{SIG}g}")


@dataclass
class ScenarioResult:
    scenario: str
    params: dict
    graph: dict
    q_min: float
    eigenvector: np.ndarray
    named: dict
    report: RigidityReport
    trajectory: dict | None = None
    checks: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "params": self.params,
            "graph": self.graph,
            "q_min": _round(self.q_min),
            "eigenvector": [_round(v) for v in self.eigenvector],
            "named": {k: (_round(v) if isinstance(v, float) else v) for k, v in self.named.items()},
            "checks": self.checks,
            "trajectory": self.trajectory,
            "report": self.report.to_records(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        return self.report.to_csv()


def _graph_summary(g: Graph) -> dict:
    degs = g.degrees
    return {
        "n": g.n,
        "edges": g.edge_count,
        "min_degree": int(degs.min()) if g.n else 0,
        "max_degree": int(degs.max()) if g.n else 0,
    }


def _trajectory_summary(g: Graph, dec: SpectralDecomposition, b: float = 1.0, seed: int = 0):
    try:
        lo, hi = principal_window(dec, b)
    except DegenerateWindowError as exc:
        return {"skipped": str(exc)}
    params = PotentialParams(0.5 * (lo + hi), b)
    gap = hi - lo  # lambda_1 - lambda_2 at the midpoint
    t_max = min(40.0 / gap, 1e4)
    traj = simulate(g, params, t_max=t_max, dt=t_max / 200, dec=dec, seed=seed)
    return {
        "a": _round(params.a),
        "b": _round(params.b),
        "window": [_round(lo), _round(hi)],
        "t_max": _round(float(traj.t[-1])),
        "initial_dist_E1": _round(float(traj.dist_to_E1[0])),
        "final_dist_E1": _round(float(traj.dist_to_E1[-1])),
        "truncated": traj.truncated,
    }


def _finish(name, params, g, nodes, rigidity, checks=None, seed=0, extra=None) -> ScenarioResult:
    """Decompose ``g`` and assemble the result; ``nodes`` maps labels to vertex ids."""
    dec = decompose_graph(g)
    q_min, vec = smallest_eigenpair(dec)
    named = {k: float(vec[v]) for k, v in nodes.items()}
    named.update({f"{k}_id": int(v) for k, v in nodes.items()})
    named.update(extra or {})
    return ScenarioResult(
        scenario=name,
        params=params,
        graph=_graph_summary(g),
        q_min=q_min,
        eigenvector=vec.copy(),
        named=named,
        report=compare_with_eigenvector(g, dec, rigidity),
        trajectory=_trajectory_summary(g, dec, seed=seed),
        checks=checks(vec) if checks else {},
    )


def _hub(g: Graph) -> int:
    return min(range(g.n), key=lambda i: (-g.degree(i), i))


def _lowest(g: Graph) -> int:
    return min(range(g.n), key=lambda i: (g.degree(i), i))


def scenario_pendant_complete(n: int = 100, rigidity: RigidityParams = RigidityParams()) -> ScenarioResult:
    """K_n with one pendant vertex (id n) hanging off vertex 0."""
    if n < 3:
        raise InvalidParameterError(f"need n >= 3, got {n}")
    g = add_pendant(complete(n), 0)

    def checks(v):
        a = np.abs(v)
        return {"pendant_is_argmax": int(np.argmax(a)) == n}

    named = {"pendant": n, "attachment": 0, "typical": 1}
    return _finish("pendant-complete", {"n": n}, g, named, rigidity, checks)


def scenario_scale_free_additions(n: int = 100, m_attach: int = 5, seed: int = 0, mode: str = "to_hub",
                                  rigidity: RigidityParams = RigidityParams()) -> ScenarioResult:
    """Preferential-attachment graph plus one or two pendants.

    ``to_hub`` hangs a pendant off the highest-degree vertex, ``to_leaf`` off
    the lowest-degree one, ``to_both`` does both (hub pendant gets id n, leaf
    pendant id n+1). Ties go to the lowest id.
    """
    if mode not in ("to_hub", "to_leaf", "to_both"):
        raise InvalidParameterError(f"unknown mode {mode!r}")
    base = barabasi_albert(n, m_attach, seed)
    hub, leaf = _hub(base), _lowest(base)
    named = {"hub": hub, "leaf": leaf}
    if mode == "to_hub":
        g = add_pendant(base, hub)
        named["pendant_hub"] = n
    elif mode == "to_leaf":
        g = add_pendant(base, leaf)
        named["pendant_leaf"] = n
    else:
        g = add_pendant(add_pendant(base, hub), leaf)
        named["pendant_hub"] = n
        named["pendant_leaf"] = n + 1
    ids = dict(named)

    def checks(v):
        a = np.abs(v)
        out = {"argmax_node": int(np.argmax(a))}
        if mode == "to_both":
            out["winner_takes_all"] = bool(a[ids["pendant_hub"]] < 0.1 * a[ids["pendant_leaf"]])
        return out

    return _finish("scale-free-additions", {"n": n, "m_attach": m_attach, "seed": seed, "mode": mode},
                   g, named, rigidity, checks, seed=seed)


def scenario_bridge(sf_n: int = 70, path_n: int = 20, clique_n: int = 10, m_attach: int = 5, seed: int = 0,
                    rigidity: RigidityParams = RigidityParams()) -> ScenarioResult:
    """Scale-free block -- path -- clique.

    The path starts at the scale-free block's highest-degree vertex and ends at
    clique vertex 0. Ids: block [0, sf_n), path [sf_n, sf_n+path_n), clique after.
    """
    if path_n < 3 or clique_n < 2 or sf_n <= m_attach:
        raise InvalidParameterError("bridge sizes below minimum")
    sf = barabasi_albert(sf_n, m_attach, seed)
    anchor = _hub(sf)
    g = bridge_compose(sf, path_n, complete(clique_n), anchor, 0)
    path_ids = np.arange(sf_n, sf_n + path_n)

    def checks(v):
        a = np.abs(v)
        seg = v[path_ids]
        peak = int(np.argmax(np.abs(seg)))
        return {
            "sf_max_abs": _round(float(a[:sf_n].max())),
            "clique_max_abs": _round(float(a[sf_n + path_n:].max())),
            "path_alternates": bool(np.all(seg[:-1] * seg[1:] < 0)),
            "path_peak_position": peak,
            "peak_in_middle_third": bool(path_n / 3 <= peak < 2 * path_n / 3),
            "argmax_node": int(np.argmax(a)),
        }

    named = {"anchor_sf": anchor, "anchor_clique": sf_n + path_n, "path_first": sf_n,
             "path_center": sf_n + path_n // 2, "path_last": sf_n + path_n - 1}
    params = {"sf_n": sf_n, "path_n": path_n, "clique_n": clique_n, "m_attach": m_attach, "seed": seed}
    return _finish("bridge", params, g, named, rigidity, checks, seed=seed)


def scenario_star(n: int = 50, modified: bool = False,
                  rigidity: RigidityParams = RigidityParams()) -> ScenarioResult:
    """S_n, optionally with the single leaf-leaf edge 1-2 added."""
    if n < 4:
        raise InvalidParameterError(f"need n >= 4, got {n}")
    g = star(n)
    if modified:
        g = add_edges(g, [(1, 2)])
    named = {"center": 0, "leaf_free": 3}
    if modified:
        named["leaf_linked"] = 1

    def checks(v):
        out = {"center_opposes_free_leaves": bool(np.all(v[0] * v[3:] < 0))}
        if modified:
            a = np.abs(v)
            out["free_gt_center_gt_linked"] = bool(a[3] > a[0] > a[1])
        return out

    name = "modified-star" if modified else "star"
    return _finish(name, {"n": n, "modified": modified}, g, named, rigidity, checks)


def _adjacent_hubs(g: Graph, k: int) -> list[int] | None:
    hubs = sorted(range(g.n), key=lambda i: (-g.degree(i), i))[:k]
    if all(g.has_edge(a, b) for x, a in enumerate(hubs) for b in hubs[x + 1:]):
        return hubs
    return None


def scenario_clustered_hubs(n: int = 100, m_attach: int = 5, seed: int = 0, k_hubs: int = 4,
                            max_retries: int = 50,
                            rigidity: RigidityParams = RigidityParams()) -> ScenarioResult:
    """Add vertex ``n`` joined to the ``k_hubs`` highest-degree vertices.

    The four top hubs must be pairwise adjacent; seeds ``seed, seed+1, ...``
    are tried until one qualifies, so all k share the same base graph.
    """
    if not 1 <= k_hubs <= 4:
        raise InvalidParameterError(f"k_hubs must be in 1..4, got {k_hubs}")
    for attempt in range(max_retries):
        base = barabasi_albert(n, m_attach, seed + attempt)
        hubs = _adjacent_hubs(base, 4)
        if hubs is not None:
            break
    else:
        raise InvalidParameterError(
            f"no seed in [{seed}, {seed + max_retries}) gives four pairwise-adjacent hubs; try another --seed")
    g = add_edges(base, [(h, n) for h in hubs[:k_hubs]], extra_vertices=1)

    def checks(v):
        a = np.abs(v)
        return {"new_node_is_argmax": int(np.argmax(a)) == n, "argmax_node": int(np.argmax(a))}

    nodes = {"new_node": n}
    nodes.update({f"hub_{j}": h for j, h in enumerate(hubs[:k_hubs])})
    params = {"n": n, "m_attach": m_attach, "seed": seed, "seed_used": seed + attempt, "k_hubs": k_hubs}
    return _finish("clustered-hubs", params, g, nodes, rigidity, checks, seed=seed,
                   extra={"new_node_clustering": clustering(g, n)})


SCENARIOS = {
    "pendant-complete": scenario_pendant_complete,
    "scale-free-additions": scenario_scale_free_additions,
    "bridge": scenario_bridge,
    "star": scenario_star,
    "clustered-hubs": scenario_clustered_hubs,
}


def run_scenario(name: str, **kwargs) -> ScenarioResult:
    if name == "modified-star":
        return scenario_star(modified=True, **kwargs)
    if name not in SCENARIOS:
        raise InvalidParameterError(f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)} or modified-star")
    return SCENARIOS[name](**kwargs)
