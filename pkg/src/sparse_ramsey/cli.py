"""Command-line front end.

Exit codes: 0 pass, 1 property failed, 2 usage or input error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import bounds, embedding, experiments, ramsey
from .coloring import TwoColoring
from .graph import read_graph, to_edgelist
from .random_graphs import RandomGraphSpec, _jsonable, closure_F, cool_ordering, sample_gnp
from .sparseness import degeneracy_ordering, measure_certificate, peel_ordering

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def _int_list(text):
    if not text:
        return []
    return [int(x) for x in text.replace(",", " ").split()]


def _seeds(args):
    if args.seeds:
        if ":" in args.seeds:
            lo, hi = args.seeds.split(":")
            return list(range(int(lo), int(hi)))
        return _int_list(args.seeds)
    return [args.seed]


def _emit(args, doc):
    text = doc if isinstance(doc, str) else json.dumps(_jsonable(doc), sort_keys=True)
    if getattr(args, "out", None):
        experiments.write_atomic(args.out, text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _read_ordering(path_or_list, n):
    try:
        with open(path_or_list) as fh:
            text = fh.read()
        if text.lstrip().startswith("{") or text.lstrip().startswith("["):
            doc = json.loads(text)
            return doc["ordering"] if isinstance(doc, dict) else doc
        return _int_list(text)
    except FileNotFoundError:
        return _int_list(path_or_list)


# ---------------------------------------------------------------------------
# subcommands


def cmd_sample(args):
    if args.p is None and args.d is None:
        raise UsageError("give --p or --d")
    if args.p is not None:
        spec = RandomGraphSpec(args.n, args.p, args.seed, args.bipartite)
    else:
        spec = RandomGraphSpec.from_d(args.n, args.d, args.seed, args.bipartite)
    _emit(args, to_edgelist(sample_gnp(spec)))
    return EXIT_PASS


def cmd_order(args):
    G = read_graph(args.graph)
    if args.method == "degeneracy":
        ordering, _ = degeneracy_ordering(G)
        cert = measure_certificate(G, ordering)
    elif args.method == "peel":
        out = peel_ordering(G, args.s, args.r)
        if not out:
            _emit(args, {"failure": True, "residual": sorted(out.residual), "removed": list(out.removed)})
            return EXIT_FAIL
        cert = measure_certificate(G, out)
    else:
        _, cert = cool_ordering(G, args.d or 1)
    _emit(args, cert.to_dict())
    return EXIT_PASS


def cmd_measure(args):
    G = read_graph(args.graph)
    order = _read_ordering(args.ordering, G.n) if args.ordering else list(range(G.n))
    _emit(args, measure_certificate(G, order).to_dict())
    return EXIT_PASS


def cmd_closure(args):
    G = read_graph(args.graph)
    res = closure_F(G, _int_list(args.set))
    _emit(args, {"closure": sorted(res.closure), "added": list(res.added),
                 "growth_ratio": None if res.growth_ratio is None else float(res.growth_ratio)})
    return EXIT_PASS


def cmd_verify(args):
    if args.id not in experiments.EXPERIMENTS:
        print(json.dumps({"error": f"unknown verify id {args.id!r}",
                          "available": list(experiments.EXPERIMENTS)}), file=sys.stderr)
        return EXIT_USAGE
    params = {k: getattr(args, k) for k in ("n", "d", "p", "q", "t", "trials", "n_max", "exhaustive")
              if getattr(args, k) not in (None, False)}
    if args.size_cap is not None:
        params["size_cap"] = args.size_cap
    config = experiments.ExperimentConfig(args.id, params, _seeds(args), args.threshold, args.out, args.format)
    report = experiments.batch_run(config)
    if not args.out:
        print(report.to_csv() if args.format == "csv" else report.to_json())
    if report.passed is None:
        return EXIT_PASS
    return EXIT_PASS if report.passed else EXIT_FAIL


def _read_parts(path):
    with open(path) as fh:
        return json.load(fh)


def cmd_embed(args):
    H = read_graph(args.pattern)
    G = read_graph(args.host)
    parts = _read_parts(args.parts)
    if args.method == "grr":
        res = embedding.grr_greedy_embed(H, G, parts, Fraction(args.epsilon))
    elif args.method == "goodset":
        if args.x is None or args.d is None:
            raise UsageError("goodset needs --x and --d")
        res = embedding.goodset_greedy_embed(H, G, parts, args.x, args.d)
    else:
        if args.d is None:
            raise UsageError("multipartite needs --d")
        res = embedding.multipartite_greedy_embed(H, G, parts, args.d)
    if not res:
        _emit(args, {"failure": True, "step": res.step, "vertex": res.vertex, "reason": res.reason,
                     "detail": res.detail})
        return EXIT_FAIL
    problems = embedding.validate_embedding(H, G, res.mapping, [set(p) for p in parts], res.info["coloring"])
    if problems:
        raise RuntimeError(f"embedding failed validation: {problems}")
    _emit(args, res.to_json())
    return EXIT_PASS


def cmd_drc(args):
    G = read_graph(args.graph)
    res = embedding.dependent_random_choice(G, embedding.DrcParams(args.t, args.x, args.trials), args.seed)
    _emit(args, res.to_dict())
    return EXIT_PASS


def cmd_nested(args):
    if args.coloring:
        with open(args.coloring) as fh:
            col = TwoColoring.from_json(fh.read())
    else:
        col = TwoColoring.random(args.n, args.seed)
    res = embedding.nested_subsets(col, args.q, args.t, args.y, args.seed, args.trials)
    _emit(args, res.to_dict())
    return EXIT_PASS


def cmd_ramsey(args):
    H = read_graph(args.pattern_file) if args.pattern_file else ramsey.pattern(args.pattern)
    res = ramsey.ramsey_exact(H, args.n_max)
    if args.witness:
        w = res.lower_witness if isinstance(res, ramsey.RamseyResult) else res.witness
        if w is not None:
            experiments.write_atomic(args.witness, w.to_json() + "\n")
    if isinstance(res, ramsey.RamseyResult):
        print(res.value)
        if args.out:
            experiments.write_atomic(args.out, res.to_json() + "\n")
        return EXIT_PASS
    print(f"unknown (no value up to N={res.N_max})")
    if args.out:
        experiments.write_atomic(args.out, res.to_json() + "\n")
    return EXIT_FAIL


def cmd_bound(args):
    if args.kind == "grr":
        value = bounds.ramsey_bound_grr(args.d, args.delta, args.q, args.n)
    elif args.kind == "general":
        c = Fraction(args.c) if args.c is not None else None
        value = bounds.ramsey_bound_general(
            bounds.BoundParams(args.d, args.delta, args.q, args.n, Fraction(args.small_delta), c))
    else:
        c = Fraction(args.c) if args.c is not None else None
        value = bounds.ramsey_bound_main(args.d, args.delta, args.q, args.n, c)
    print(value)
    return EXIT_PASS


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sparse-ramsey", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample G(n, p) or G(n, n, p) as an edge list")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float)
    p.add_argument("--d", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bipartite", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("order", help="build an ordering and print its certificate")
    p.add_argument("graph")
    p.add_argument("--method", choices=["degeneracy", "peel", "cool"], default="degeneracy")
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--d", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("measure", help="certificate of a given ordering")
    p.add_argument("graph")
    p.add_argument("--ordering", help="file or comma-separated list; identity if omitted")
    p.add_argument("--out")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("closure", help="closure F(S) of a vertex set")
    p.add_argument("graph")
    p.add_argument("--set", required=True, help="comma-separated vertices")
    p.add_argument("--out")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("verify", help="run a named experiment over seeds")
    p.add_argument("id", help="one of: " + ", ".join(experiments.EXPERIMENTS))
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--q", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--seeds", help="comma list or lo:hi range")
    p.add_argument("--trials", type=int)
    p.add_argument("--threshold", type=float)
    p.add_argument("--size-cap", type=int)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--n-max", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("embed", help="greedy embedding of a pattern into a partitioned host")
    p.add_argument("pattern")
    p.add_argument("host")
    p.add_argument("--parts", required=True, help="JSON file with a list of vertex lists")
    p.add_argument("--method", choices=["grr", "goodset", "multipartite"], default="grr")
    p.add_argument("--epsilon", default="1/4")
    p.add_argument("--x", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("drc", help="dependent random choice on a bipartite graph")
    p.add_argument("graph")
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--x", type=int, default=1)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_drc)

    p = sub.add_parser("nested", help="nested subsets in a 2-colouring of K_N")
    p.add_argument("--n", type=int, default=64, help="N for a random colouring")
    p.add_argument("--coloring", help="JSON colouring file instead of a random one")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--y", type=int, default=4)
    p.add_argument("--trials", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_nested)

    p = sub.add_parser("ramsey", help="exact Ramsey number of a small pattern")
    p.add_argument("--pattern", default="k3", help="one of: " + ", ".join(sorted(ramsey.PATTERNS)))
    p.add_argument("--pattern-file")
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--witness", help="where to write the lower-bound colouring")
    p.add_argument("--out")
    p.set_defaults(func=cmd_ramsey)

    p = sub.add_parser("bound", help="explicit Ramsey upper bounds")
    p.add_argument("kind", choices=["grr", "general", "main"])
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--delta", type=int, required=True, help="left-set count of the pattern")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--small-delta", default="1", help="trade-off parameter in (0, 1] for 'general'")
    p.add_argument("--c", help="constant c in the exponent of 2 (default 25; Delta's exponent uses 4)")
    p.set_defaults(func=cmd_bound)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(json.dumps({"error": str(exc), "type": type(exc).__name__}), file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover - defect path
        print(json.dumps({"error": str(exc), "type": type(exc).__name__, "internal": True}), file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
