"""Command-line front end.

Exit status: 0 on success, 1 on usage or input errors, 2 on numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .dynamics import PotentialParams, principal_window, simulate, stability_diagram
from .errors import EdgeListParseError, InvalidParameterError, NumericalFailureError
from .experiments import run_scenario
from .graph import barabasi_albert, build_family, parse_edge_list, serialize_edge_list
from .metrics import RigidityParams, compare_with_eigenvector
from .spectral import decompose_graph, verify_closed_form

SCENARIO_IDS = ("pendant-complete", "scale-free-additions", "bridge", "star", "modified-star", "clustered-hubs")
GRAPH_FAMILIES = ("complete", "complete-bipartite", "cycle", "path", "star", "barabasi-albert")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _round(obj):
    if isinstance(obj, (float, np.floating)):
        return float(f"{float(obj):.12g}")
    if isinstance(obj, np.ndarray):
        return _round(obj.tolist())
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _dump_json(obj) -> str:
    return json.dumps(_round(obj), indent=2) + "\n"


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--seed", type=int, default=0, help="random seed (graphs, initial states)")
    g.add_argument("--out", type=Path, help="write output here instead of stdout")
    g.add_argument("--format", choices=("json", "csv"), help="output format")
    g.add_argument("--family", choices=GRAPH_FAMILIES, help="build the graph from a family")
    g.add_argument("--graph", type=Path, help="read the graph from an edge-list file")
    g.add_argument("--n", type=int, help="graph size (first part size for complete-bipartite)")
    g.add_argument("--m", type=int, help="second part size for complete-bipartite")
    g.add_argument("--m-attach", type=int, default=5, help="edges per new vertex for barabasi-albert")
    g.add_argument("--a", type=float, help="potential parameter a (default: principal-window midpoint)")
    g.add_argument("--b", type=float, default=1.0, help="potential parameter b > 0")
    g.add_argument("--p", type=float, default=0.5, help="rigidity neighbour weight")
    g.add_argument("--ptilde", type=float, default=0.5, help="rigidity clustering weight")
    g.add_argument("--t-max", type=float, default=10.0)
    g.add_argument("--dt", type=float, default=0.01)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="signless", description="Signless-Laplacian gradient dynamics on graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("generate", parents=[common], help="emit a graph as an edge list")
    sp = sub.add_parser("spectrum", parents=[common], help="Q-eigenvalues and eigenvectors")
    sp.add_argument("--method", choices=("lapack", "jacobi"), default="lapack")
    sp.add_argument("--verify", action="store_true", help="also compare with the closed form (families only)")
    sd = sub.add_parser("stability-diagram", parents=[common], help="zero-crossing lines a = -2bq")
    sd.add_argument("--b-min", type=float, default=0.0)
    sd.add_argument("--b-max", type=float, default=1.0)
    sd.add_argument("--samples", type=int, default=51)
    sm = sub.add_parser("simulate", parents=[common], help="integrate the gradient flow")
    sm.add_argument("--method", choices=("exact_modal", "rk4"), default="exact_modal")
    sub.add_parser("metrics", parents=[common], help="per-node centrality and rigidity table")
    sc = sub.add_parser("scenario", parents=[common], help="run a scripted scenario")
    sc.add_argument("id", choices=SCENARIO_IDS)
    sc.add_argument("--mode", choices=("to_hub", "to_leaf", "to_both"), default="to_hub")
    sc.add_argument("--k", type=int, default=4, help="hubs joined to the new node (clustered-hubs)")
    sc.add_argument("--sf-n", type=int, default=70)
    sc.add_argument("--path-n", type=int, default=20)
    sc.add_argument("--clique-n", type=int, default=10)
    return parser


def _load_graph(args):
    if args.graph is not None:
        if args.family is not None:
            raise UsageError("give either --family or --graph, not both")
        try:
            text = args.graph.read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read {args.graph}: {exc}") from exc
        return parse_edge_list(text)
    if args.family is None:
        raise UsageError("a graph is required: use --family or --graph")
    if args.n is None:
        raise UsageError("--family needs --n")
    if args.family == "barabasi-albert":
        return barabasi_albert(args.n, args.m_attach, args.seed)
    return build_family(args.family, args.n, args.m)


def _cmd_generate(args) -> str:
    g = _load_graph(args)
    if args.format == "json":
        return _dump_json({"n": g.n, "edges": g.sorted_edges()})
    if args.format == "csv":
        return "u,v\n" + "".join(f"{u},{v}\n" for u, v in g.sorted_edges())
    return serialize_edge_list(g) + "\n"


def _cmd_spectrum(args) -> str:
    g = _load_graph(args)
    dec = decompose_graph(g, method=args.method)
    if args.format == "csv":
        return "index,eigenvalue\n" + "".join(f"{i},{q:.12g}\n" for i, q in enumerate(dec.eigenvalues))
    out = dec.to_dict()
    if args.verify:
        if args.family in (None, "barabasi-albert"):
            raise UsageError("--verify needs one of the analytic families")
        rep = verify_closed_form(args.family, args.n, args.m)
        out["closed_form"] = {"max_eigenvalue_deviation": rep.max_eigenvalue_deviation,
                              "max_subspace_angle": rep.max_subspace_angle}
    return _dump_json(out)


def _cmd_stability_diagram(args) -> str:
    dec = decompose_graph(_load_graph(args))
    data = stability_diagram(dec, (args.b_min, args.b_max), args.samples)
    if args.format == "csv":
        if args.out is not None:
            poly = args.out.with_name(args.out.stem + "_polyline.csv")
            poly.write_text(data.polyline_csv(), encoding="utf-8")
            return data.lines_csv()
        return data.lines_csv() + "\n" + data.polyline_csv()
    return _dump_json({
        "lines": [{"q": q, "slope": s} for q, s in zip(data.q, data.slopes)],
        "b": data.b,
        "a": data.a,
    })


def _cmd_simulate(args) -> str:
    g = _load_graph(args)
    dec = decompose_graph(g)
    if args.a is None:
        lo, hi = principal_window(dec, args.b)
        params = PotentialParams(0.5 * (lo + hi), args.b)
    else:
        params = PotentialParams(args.a, args.b)
    traj = simulate(g, params, t_max=args.t_max, dt=args.dt, method=args.method, dec=dec, seed=args.seed)
    if args.format == "csv":
        return traj.to_csv()
    return _dump_json({
        "method": traj.method,
        "a": params.a,
        "b": params.b,
        "truncated": traj.truncated,
        "t": traj.t,
        "dist_E1": traj.dist_to_E1,
        "final_state": traj.final_state,
        "final_dist_E1": traj.dist_to_E1[-1],
    })


def _cmd_metrics(args) -> str:
    g = _load_graph(args)
    report = compare_with_eigenvector(g, decompose_graph(g), RigidityParams(args.p, args.ptilde))
    return report.to_csv() if args.format == "csv" else report.to_json() + "\n"


def _cmd_scenario(args) -> str:
    rigidity = RigidityParams(args.p, args.ptilde)
    kwargs = {"rigidity": rigidity}
    sid = args.id
    if sid == "pendant-complete":
        kwargs["n"] = args.n if args.n is not None else 100
    elif sid == "scale-free-additions":
        kwargs.update(n=args.n or 100, m_attach=args.m_attach, seed=args.seed, mode=args.mode)
    elif sid == "bridge":
        kwargs.update(sf_n=args.sf_n, path_n=args.path_n, clique_n=args.clique_n,
                      m_attach=args.m_attach, seed=args.seed)
    elif sid in ("star", "modified-star"):
        kwargs["n"] = args.n if args.n is not None else 50
    else:
        kwargs.update(n=args.n or 100, m_attach=args.m_attach, seed=args.seed, k_hubs=args.k)
    result = run_scenario(sid, **kwargs)
    return result.to_csv() if args.format == "csv" else result.to_json() + "\n"


COMMANDS = {
    "generate": _cmd_generate,
    "spectrum": _cmd_spectrum,
    "stability-diagram": _cmd_stability_diagram,
    "simulate": _cmd_simulate,
    "metrics": _cmd_metrics,
    "scenario": _cmd_scenario,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        text = COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except (InvalidParameterError, EdgeListParseError) as exc:
        print(f"signless: error: {exc}", file=sys.stderr)
        return 1
    except NumericalFailureError as exc:
        print(f"signless: numerical failure: {exc}", file=sys.stderr)
        return 2
    if args.out is not None:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
