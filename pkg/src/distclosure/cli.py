"""Command-line front end.

Subcommands wrap the library one-to-one for batch pipelines: convert, close,
semimetric, distortion, asymmetry, diffuse, lambda-opt and demorgan.  Options
can be preloaded from a TOML config file; explicit flags win.  Exit codes:
0 success, 2 input or parse error, 3 closure cutoff without convergence,
4 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import analysis, closure, io_formats
from .algebra import demorgan_deviation, dombi_generator, get_bundle
from .errors import DistclosureError, NumericError, ParseError
from .graphs import (DistanceGraph, IsomorphismMap, ProximityGraph,
                     from_correlation, to_distance, to_proximity)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CUTOFF = 3
EXIT_NUMERIC = 4


def _load_graph(args):
    if args.space == "timeseries":
        data, labels = io_formats.read_timeseries_csv(args.input)
        return from_correlation(data, labels=labels,
                                absolute=getattr(args, "abs_correlation", False))
    return io_formats.read_graph(args.input, fmt=args.format, space=args.space)


def _add_input_opts(p):
    p.add_argument("--input", required=True, help="input graph file")
    p.add_argument("--format", default="auto", choices=["auto", "edgelist", "csv"])
    p.add_argument("--space", default=None,
                   choices=["proximity", "distance", "timeseries"],
                   help="space of a CSV input (edge lists are self-describing); "
                        "timeseries builds a correlation proximity graph")
    p.add_argument("--abs-correlation", action="store_true",
                   help="use correlation magnitudes instead of clamping negatives")


def _close_graph(graph, method, max_iter, epsilon, backend):
    bundle = get_bundle(method)
    if isinstance(graph, ProximityGraph):
        if bundle.name == "ultrametric":
            return closure.transitive_closure_alg2(graph, bundle, max_iter, epsilon)
        if bundle.name == "diffusion":
            return closure.transitive_closure_alg2(graph, bundle, max_iter, epsilon)
        lam = 1.0 if bundle.name == "metric" else float(bundle.name.split(":")[1])
        return closure.generalized_metric_closure(graph, lam, backend=backend,
                                                  method_name=bundle.name)
    if bundle.name == "metric":
        return closure.metric_closure(graph, backend=backend, max_iter=max_iter)
    return closure.distance_closure(graph, bundle, max_iter, epsilon)


def cmd_convert(args):
    g = _load_graph(args)
    iso = IsomorphismMap(dombi_generator(args.lam))
    target = args.to
    if target is None:
        target = "distance" if isinstance(g, ProximityGraph) else "proximity"
    if target == "distance" and isinstance(g, ProximityGraph):
        out = to_distance(g, iso)
    elif target == "proximity" and isinstance(g, DistanceGraph):
        out = to_proximity(g, iso)
    else:
        out = g
    io_formats.write_graph(out, args.output, fmt=args.out_format)
    return EXIT_OK


def cmd_close(args):
    g = _load_graph(args)
    rep = _close_graph(g, args.method, args.max_iter, args.epsilon, args.backend)
    if args.output:
        io_formats.write_graph(rep.closed, args.output, fmt=args.out_format)
    if args.report:
        io_formats.write_report_json(rep, args.report)
    print(f"method={rep.method} kappa={rep.kappa} converged={rep.converged} "
          f"distortion={rep.distortion:.12g}")
    return EXIT_OK if rep.converged else EXIT_CUTOFF


def _as_distance(g):
    return g if isinstance(g, DistanceGraph) else to_distance(g)


def _as_proximity(g):
    return g if isinstance(g, ProximityGraph) else to_proximity(g)


def cmd_semimetric(args):
    rep = analysis.semimetric_edges(_as_distance(_load_graph(args)))
    doc = {
        "schema": 1,
        "count": rep.count,
        "fraction": rep.fraction,
        "edges": [vars(e) for e in rep.edges],
        "indirect_only": [list(t) for t in rep.indirect_only],
    }
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
    print(f"semi-metric edges: {rep.count} ({rep.fraction:.4f} of finite edges)")
    for e in rep.edges:
        print(f"  {e.source}\t{e.target}\td={e.distance:.6g}\t"
              f"dmc={e.closed_distance:.6g}\tratio={e.ratio:.6g}")
    return EXIT_OK


def cmd_distortion(args):
    g = _as_proximity(_load_graph(args))
    if args.closed:
        closed = _as_proximity(io_formats.read_graph(args.closed, fmt=args.format,
                                                     space=args.space))
        value = analysis.distortion(g, closed)
    elif args.method:
        rep = _close_graph(g, args.method, None, None, "auto")
        value = rep.distortion
    else:
        raise ParseError("distortion needs --closed or --method")
    print(f"{value:.12g}")
    return EXIT_OK


def cmd_asymmetry(args):
    print(f"{analysis.asymmetry(_as_distance(_load_graph(args))):.12g}")
    return EXIT_OK


def cmd_diffuse(args):
    d = _as_distance(_load_graph(args))
    if args.scheme == "power-of-two":
        seq = closure.diffusion_power(d, args.n, scheme="power-of-two")
        for g, e in zip(seq.powers, seq.exponents):
            print(f"n={e}\tasymmetry={analysis.asymmetry(g):.12g}")
        return EXIT_OK
    trace = analysis.diffusion_trace(d, args.n, on_distance=args.on_distance)
    if args.hierarchy:
        io_formats.write_hierarchy(trace, args.hierarchy)
    if args.asymmetry_out:
        with open(args.asymmetry_out, "w", encoding="utf-8") as fh:
            fh.write("n,asymmetry\n")
            for k, a in enumerate(trace.asymmetry, start=1):
                fh.write(f"{k},{a:.12g}\n")
    for k in range(args.n):
        print(f"n={k + 1}\tcommunities={trace.community_counts[k]}\t"
              f"asymmetry={trace.asymmetry[k]:.12g}")
    if trace.dissolve_n:
        print(f"all-singleton partition first reached at n={trace.dissolve_n}")
    return EXIT_OK


def cmd_lambda_opt(args):
    target = args.target if args.target is not None else args.cv
    study = analysis.lambda_study(args.mu, args.cv, target)
    print(json.dumps({
        "mu": study.mu, "cv_d": study.cv_d, "cv_p_target": study.cv_p_target,
        "lambda_opt": study.lambda_opt, "cv_p_opt": study.cv_p_opt,
    }))
    return EXIT_OK


def cmd_demorgan(args):
    print(f"{demorgan_deviation(args.lam, grid=args.grid):.12g}")
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(
        prog="distclosure",
        description="Generalized transitive and distance closures of weighted graphs",
    )
    ap.add_argument("--config", default=None, help="TOML config file; flags win")
    ap.add_argument("--threads", type=int, default=0,
                    help="0 = auto; outputs are identical at every setting")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="convert between proximity and distance space")
    _add_input_opts(p)
    p.add_argument("--output", required=True)
    p.add_argument("--out-format", default="auto", choices=["auto", "edgelist", "csv"])
    p.add_argument("--to", default=None, choices=["proximity", "distance"])
    p.add_argument("--lambda", dest="lam", type=float, default=1.0,
                   help="generator parameter")
    p.set_defaults(fn=cmd_convert)

    p = sub.add_parser("close", help="compute a closure")
    _add_input_opts(p)
    p.add_argument("--method", required=True,
                   help="metric | ultrametric | diffusion | dombi:<lambda>")
    p.add_argument("--output", default=None, help="closed graph file")
    p.add_argument("--out-format", default="auto", choices=["auto", "edgelist", "csv"])
    p.add_argument("--report", default=None, help="closure report JSON file")
    p.add_argument("--max-iter", type=int, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--backend", default="auto", choices=["auto", "dijkstra", "minplus"])
    p.set_defaults(fn=cmd_close)

    p = sub.add_parser("semimetric", help="report semi-metric edges")
    _add_input_opts(p)
    p.add_argument("--output", default=None, help="JSON report file")
    p.set_defaults(fn=cmd_semimetric)

    p = sub.add_parser("distortion", help="total entrywise change of a closure")
    _add_input_opts(p)
    p.add_argument("--closed", default=None, help="closed graph file to compare")
    p.add_argument("--method", default=None, help="closure method to apply")
    p.set_defaults(fn=cmd_distortion)

    p = sub.add_parser("asymmetry", help="upper-vs-lower triangle asymmetry")
    _add_input_opts(p)
    p.set_defaults(fn=cmd_asymmetry)

    p = sub.add_parser("diffuse", help="n-diffusion study: asymmetry and communities")
    _add_input_opts(p)
    p.add_argument("--n", type=int, required=True, help="largest power")
    p.add_argument("--scheme", default="left-fold",
                   choices=["left-fold", "power-of-two"])
    p.add_argument("--hierarchy", default=None, help="community hierarchy output file")
    p.add_argument("--asymmetry-out", default=None, help="asymmetry curve CSV")
    p.add_argument("--on-distance", action="store_true",
                   help="cluster on inverted distances instead of proximity weights")
    p.set_defaults(fn=cmd_diffuse)

    p = sub.add_parser("lambda-opt", help="generator parameter from variability")
    p.add_argument("--mu", type=float, required=True, help="mean shortest path")
    p.add_argument("--cv", type=float, required=True,
                   help="distance-space coefficient of variability")
    p.add_argument("--target", type=float, default=None,
                   help="proximity-space target (default: same as --cv)")
    p.set_defaults(fn=cmd_lambda_opt)

    p = sub.add_parser("demorgan", help="total De Morgan deviation of a Dombi pair")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--grid", type=int, default=None,
                   help="fixed-grid points per axis (>= 64); default adaptive")
    p.set_defaults(fn=cmd_demorgan)

    ap.subcommands = dict(sub.choices)
    return ap


def _apply_config(ap, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    with open(known.config, "rb") as fh:
        cfg = tomllib.load(fh)
    flat = {k.replace("-", "_"): v for k, v in cfg.items() if not isinstance(v, dict)}
    ap.set_defaults(**flat)
    for name, sp in ap.subcommands.items():
        section = cfg.get(name, {})
        defaults = {**flat, **{k.replace("-", "_"): v for k, v in section.items()}}
        sp.set_defaults(**defaults)
        for action in sp._actions:
            if action.dest in defaults:
                action.required = False


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        _apply_config(ap, argv)
        args = ap.parse_args(argv)
        return args.fn(args)
    except (ParseError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error[input]: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericError as exc:
        print(f"error[numeric]: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DistclosureError as exc:
        print(f"error[input]: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
