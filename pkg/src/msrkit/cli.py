"""Command-line entry point: ``msrkit solve|reduce|verify|fuzz|stats|gen``.

Exit codes: 0 success, 1 parse or usage error, 2 infeasible / invalid /
mismatch, 3 size cap or timeout, 4 source screened as a trivial no-instance.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path
from typing import Optional, Sequence

from .errors import (
    GraphError,
    InstanceError,
    MsrError,
    SizeCapError,
    SolverTimeout,
    TrivialNoInstance,
)
from .graph import format_graph_text, parse_graph_text
from .harness import (
    XorShift64Star,
    fuzz_equivalence,
    random_bipartite_graph,
    random_graph,
    random_instance,
    random_mcc,
)
from .instances import (
    dump_clustering,
    dump_instance,
    format_ds_text,
    format_mcc_text,
    load_clustering,
    load_instance,
    parse_ds_text,
    parse_mcc_text,
)
from .params import structural_profile
from .reductions import (
    DsInstance,
    Role,
    augment_complete,
    augment_complete_bipartite,
    reduce_ds_to_exact,
    reduce_mcc_allowed_fvs,
    reduce_mcc_allowed_kdelta,
    reduce_mcc_vertex_cover,
    reduce_mcc_weighted_bipartite,
    REDUCTIONS,
)
from .solvers import DEFAULT_TIMEOUT, Clustering, Variant, solve, verify_clustering

EXIT_OK, EXIT_PARSE, EXIT_NO, EXIT_CAP, EXIT_TRIVIAL = 0, 1, 2, 3, 4


class _Fail(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _Fail(EXIT_PARSE, f"cannot read {path}: {exc.strerror}") from None


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# -------------------------------------------------- subcommands

def cmd_solve(args) -> int:
    inst = load_instance(_read(args.instance))
    try:
        rep = solve(inst, args.algo, prune_radii=not args.no_prune, timeout=args.timeout)
    except SolverTimeout as exc:
        raise _Fail(EXIT_CAP, f"timeout: {exc}") from None
    if rep is None:
        print("infeasible")
        return EXIT_NO
    print(f"cost {rep.optimal_cost}; {rep.clustering}")
    print(f"algorithm {rep.algorithm}")
    print(f"nodes {rep.nodes_explored}")
    if not args.no_timing:
        print(f"elapsed {rep.elapsed:.3f}s")
    if args.output:
        _write(args.output, dump_clustering(rep.clustering))
    return EXIT_OK


def _reduce(args):
    text = _read(args.source)
    red = args.reduction
    if red in ("thm3c", "thm3cb"):
        inst = load_instance(text)
        out = augment_complete(inst) if red == "thm3c" else augment_complete_bipartite(inst)
        return out, [Role("original", (v,)) for v in range(out.n)]
    if red == "thm4":
        out = reduce_ds_to_exact(parse_ds_text(text))
        return out, [Role("original", (v,)) for v in range(out.n)]
    mcc = parse_mcc_text(text)
    if red == "thm1":
        art = reduce_mcc_weighted_bipartite(mcc)
    elif red == "thm2":
        art = reduce_mcc_vertex_cover(mcc, guard=not args.no_guard)
    elif red == "thm5":
        art = reduce_mcc_allowed_kdelta(mcc)
    else:
        art = reduce_mcc_allowed_fvs(mcc, guard=not args.no_guard)
    return art.instance, art.roles


def cmd_reduce(args) -> int:
    try:
        inst, roles = _reduce(args)
    except TrivialNoInstance as exc:
        print(f"trivial no-instance: {exc}")
        return EXIT_TRIVIAL
    Path(args.output).write_text(dump_instance(inst))
    Path(args.output + ".roles").write_text("".join(f"{p} {r}\n" for p, r in enumerate(roles)))
    line = f"{inst.n} points, k={inst.k}, Δ={inst.delta}"
    if inst.variant is not Variant.STANDARD:
        line += f", variant={inst.variant.value}"
    print(line)
    return EXIT_OK


_PAIR = re.compile(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")


def _clustering_arg(arg: str) -> Clustering:
    if os.path.exists(arg):
        return load_clustering(_read(arg))
    pairs = _PAIR.findall(arg)
    if not pairs:
        try:
            return load_clustering(arg)
        except InstanceError:
            raise _Fail(EXIT_PARSE, f"cannot read a clustering from {arg!r}") from None
    return Clustering(tuple((int(c), int(r)) for c, r in pairs))


def cmd_verify(args) -> int:
    inst = load_instance(_read(args.instance))
    verdict = verify_clustering(inst, _clustering_arg(args.clustering))
    if verdict.valid:
        print("valid")
        return EXIT_OK
    print(f"invalid: {verdict.reason}" + (f" ({verdict.detail})" if verdict.detail else ""))
    return EXIT_NO


def _bounds(items: Sequence[str]) -> dict:
    out = {}
    for item in items or ():
        key, sep, val = item.partition("=")
        if not sep:
            raise _Fail(EXIT_PARSE, f"bound {item!r} is not key=value")
        try:
            out[key] = json.loads(val)
        except json.JSONDecodeError:
            out[key] = val
    return out


def cmd_fuzz(args) -> int:
    bounds = _bounds(args.bounds)
    if args.no_guard:
        bounds["guard"] = False
    if args.timeout is not None:
        bounds["timeout"] = args.timeout
    report = fuzz_equivalence(args.reduction, args.trials, bounds, args.seed,
                              exhaustive=args.exhaustive, threads=args.threads,
                              artifact_dir=args.artifacts)
    sys.stdout.write(report.to_text())
    return EXIT_OK if report.clean else EXIT_NO


def cmd_stats(args) -> int:
    g = parse_graph_text(_read(args.graph))
    prof = structural_profile(g)
    print(prof.report())
    if args.verbose:
        print("per_vertex " + " ".join(map(str, prof.per_vertex_neighborhood_counts)))
    return EXIT_OK


def cmd_gen(args) -> int:
    kind, seed = args.kind, args.seed
    if kind == "instance":
        text = dump_instance(random_instance(seed, args.n, args.max_weight))
    elif kind == "graph":
        text = format_graph_text(random_graph(seed, args.n, args.edge_prob, args.max_weight))
    elif kind == "mcc":
        p = args.edge_prob if args.edge_prob_given else None
        text = format_mcc_text(random_mcc(seed, args.k, args.class_size, p))
    else:
        rng = XorShift64Star(seed)
        g = random_bipartite_graph(rng.next_u64(), max(2, args.n), args.edge_prob)
        text = format_ds_text(DsInstance(g, args.k))
    _write(args.output, text)
    return EXIT_OK


# -------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="msrkit", description="Exact Min-Sum-Radii toolkit.")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                   help="worker processes for fuzzing (default: all cores)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve an instance file to optimality")
    s.add_argument("instance")
    s.add_argument("--algo", choices=["auto", "dp", "bb", "enum"], default="auto")
    s.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT)
    s.add_argument("--no-prune", action="store_true", help="keep radii above the budget")
    s.add_argument("--no-timing", action="store_true", help="omit the elapsed line")
    s.add_argument("-o", "--output", help="write the clustering as JSON")
    s.set_defaults(func=cmd_solve)

    r = sub.add_parser("reduce", help="build a reduced instance from a source file")
    r.add_argument("source")
    r.add_argument("--reduction", choices=REDUCTIONS, required=True)
    r.add_argument("-o", "--output", required=True,
                   help="instance path; roles go to <output>.roles")
    r.add_argument("--no-guard", action="store_true",
                   help="omit the per-class guard vertices of the anchor gadget")
    r.set_defaults(func=cmd_reduce)

    v = sub.add_parser("verify", help="check a clustering against an instance")
    v.add_argument("instance")
    v.add_argument("clustering", help="JSON file, or inline pairs such as '(1,1) (3,2)'")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("fuzz", help="compare source and reduced answers")
    f.add_argument("--reduction", choices=REDUCTIONS, required=True)
    f.add_argument("--trials", type=int, default=100)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--bounds", action="append", metavar="KEY=VALUE",
                   help="override a size bound, value as JSON (repeatable)")
    f.add_argument("--exhaustive", action="store_true")
    f.add_argument("--no-guard", action="store_true")
    f.add_argument("--timeout", type=float, default=None)
    f.add_argument("--artifacts", default="msrkit-mismatches",
                   help="directory for mismatching instances")
    f.set_defaults(func=cmd_fuzz)

    st = sub.add_parser("stats", help="structural parameters of a graph file")
    st.add_argument("graph")
    st.add_argument("-v", "--verbose", action="store_true")
    st.set_defaults(func=cmd_stats)

    g = sub.add_parser("gen", help="generate a seeded random file")
    g.add_argument("kind", choices=["instance", "graph", "mcc", "ds"])
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--n", type=int, default=8, help="vertex count (upper bound for 'instance')")
    g.add_argument("--max-weight", type=int, default=1)
    g.add_argument("--edge-prob", type=float, default=None)
    g.add_argument("--k", type=int, default=2)
    g.add_argument("--class-size", type=int, default=3)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "kind", None) is not None:
        args.edge_prob_given = args.edge_prob is not None
        if args.edge_prob is None:
            args.edge_prob = 0.5
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (SizeCapError, SolverTimeout) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InstanceError, GraphError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except MsrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
