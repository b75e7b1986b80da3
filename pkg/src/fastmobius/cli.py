"""Command-line front end: ``fastmobius {transform,combine,verify,mobius-fn,bench}``.

Errors go to stderr as ``fastmobius: error[<code>]: <message>`` and set a
nonzero exit status; see :mod:`fastmobius.errors` for the codes.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import cost, evidence, graph, transforms
from .counters import OpCounter
from .errors import FormatError, MobiusError, UnsupportedConversion
from .setfun import WARN_N, Kind, SetFunction, check_capacity, load_setfunction, save_setfunction

PROG = "fastmobius"

KIND_NAMES = {"mass": Kind.MASS, "bel": Kind.BELIEF, "q": Kind.COMMONALITY, "pl": Kind.PLAUSIBILITY}

CONVERSIONS = {
    ("mass", "bel"): transforms.TransformKind.MASS_TO_BEL,
    ("bel", "mass"): transforms.TransformKind.BEL_TO_MASS,
    ("mass", "q"): transforms.TransformKind.MASS_TO_Q,
    ("q", "mass"): transforms.TransformKind.Q_TO_MASS,
    ("q", "pl"): transforms.TransformKind.Q_TO_PL,
}


def _warn(msg: str) -> None:
    print(f"{PROG}: warning: {msg}", file=sys.stderr)


def _load(path: str, expect: str | None = None) -> SetFunction:
    f = load_setfunction(path)
    check_capacity(f.n)
    if f.n > WARN_N:
        _warn(f"frame size {f.n} needs a {f.frame.size}-entry vector")
    if expect is not None and f.kind not in (Kind.RAW, KIND_NAMES[expect]):
        raise FormatError(f"{path}: key 'kind': file holds {f.kind.value}, but --from is {expect}")
    return f


def _print_counts(counter: OpCounter, out) -> None:
    print(f"additions: {counter.additions}", file=out)
    print(f"multiplications: {counter.multiplications}", file=out)
    for s in counter.per_stage:
        tag = f"[{s.section}] " if s.section else ""
        print(f"  {tag}{s.label}: +{s.additions} x{s.multiplications}", file=out)


def cmd_transform(args, out) -> int:
    pair = (args.src, args.dst)
    f = _load(args.infile, args.src)
    counter = OpCounter()
    if args.src == args.dst:
        result = f.with_values(f.values, KIND_NAMES[args.dst])
    elif pair in CONVERSIONS:
        kind = CONVERSIONS[pair]
        if kind is transforms.TransformKind.MASS_TO_BEL and args.include_empty:
            kind = transforms.TransformKind.MASS_TO_BEL_FULL
        if args.algo == "fast":
            result = transforms.fast_transform(kind, f, counter)
        else:
            result = transforms.naive_transform(kind, f, counter)
    else:
        supported = ", ".join(f"{a}->{b}" for a, b in CONVERSIONS)
        raise UnsupportedConversion(f"{args.src}->{args.dst} is not supported; supported: {supported} (and X->X)")
    save_setfunction(result, args.outfile, dense=args.dense)
    if args.count:
        _print_counts(counter, out)
    return 0


def _mass_to_pl(m: SetFunction, algo: str, counter: OpCounter) -> SetFunction:
    if algo == "fast":
        q = transforms.fmt_mass_to_q(m, counter)
        return transforms.q_to_pl(q, counter)
    return transforms.naive_plausibility(m, counter)


def cmd_combine(args, out) -> int:
    m1, m2 = _load(args.in1, "mass"), _load(args.in2, "mass")
    counter = OpCounter()
    if args.to == "pl" and not args.normalize:
        conflict = evidence.dempster(m1, m2, args.algo, strict=args.strict).conflict
        result = evidence.combine_to_plausibility(m1, m2, args.algo, counter)
    else:
        r = evidence.dempster(m1, m2, args.algo, strict=args.strict, counter=counter)
        conflict = r.conflict
        if args.normalize:
            r = evidence.normalize(r)
        result = r.combined if args.to == "mass" else _mass_to_pl(r.combined, args.algo, counter)
    save_setfunction(result, args.outfile, dense=args.dense)
    print(f"conflict: {conflict:.12g}", file=out)
    if args.count:
        _print_counts(counter, out)
    return 0


def cmd_verify(args, out) -> int:
    if args.hasse is not None:
        check_capacity(args.hasse)
        alg = transforms.hasse_sequence(args.hasse, args.relation, args.exclude_empty)
    elif args.malgorithm is not None:
        alg = graph.load_malgorithm(args.malgorithm)
    else:
        raise FormatError("one of --malgorithm or --hasse is required")
    if args.dump:
        graph.save_malgorithm(alg, args.dump)
    report = graph.verify_decomposition(alg)
    if report.valid:
        print("valid", file=out)
    else:
        s, t = report.witness
        print(f"invalid witness=({s},{t}) paths={report.paths}", file=out)
    print(f"cost: {cost.cost_of_malgorithm(alg)}", file=out)
    return 0


def cmd_mobius_fn(args, out) -> int:
    poset = graph.load_graph(args.poset)
    if not isinstance(poset, graph.Graph):
        raise FormatError(f"{args.poset}: expected a plain graph, not weighted")
    mu = graph.mobius_function(poset, args.method)
    for (s, t), w in sorted(mu.entries().items()):
        print(f"{poset.source.label(s)} {poset.target.label(t)} {w}", file=out)
    if args.outfile:
        Path(args.outfile).write_text(json.dumps(graph.graph_to_json(mu)) + "\n")
    return 0


def cmd_bench(args, out) -> int:
    config = cost.BenchConfig(
        n_min=args.n_min, n_max=args.n_max, trials=args.trials, workload=args.workload,
        naive_max_n=args.naive_max_n, seed=args.seed,
    )
    reports = cost.run_benchmark(config)
    if args.workload == "transform":
        rows = cost.comparison_rows(reports)
        columns = cost.COST_COLUMNS + ["naive_seconds", "fast_seconds"]
    else:
        rows = cost.pipeline_comparison_rows(reports)
        columns = cost.PIPELINE_COLUMNS + ["slow_additions", "fast_additions", "naive_seconds", "fast_seconds"]
    print(cost.to_text(rows, columns), end="", file=out)
    bad = [r for r in reports if r.matches_analytic is False]
    for r in bad:
        _warn(f"n={r.n} {r.arm}: measured {(r.additions, r.multiplications)} != analytic {r.analytic}")
    if args.outfile:
        cost.write_csv(rows, args.outfile, columns)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog=PROG, description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("transform", help="convert between mass, belief, commonality and plausibility")
    t.add_argument("--from", dest="src", choices=["mass", "bel", "q"], required=True)
    t.add_argument("--to", dest="dst", choices=["mass", "bel", "q", "pl"], required=True)
    t.add_argument("--algo", choices=["fast", "naive"], default="fast")
    t.add_argument("--in", dest="infile", required=True)
    t.add_argument("--out", dest="outfile", required=True)
    t.add_argument("--include-empty", action="store_true", help="mass->bel: also sum m(∅)")
    t.add_argument("--count", action="store_true", help="print operation counts")
    t.add_argument("--dense", action="store_true", help="write the dense layout")
    t.set_defaults(func=cmd_transform)

    c = sub.add_parser("combine", help="Dempster's rule of combination")
    c.add_argument("--in1", required=True)
    c.add_argument("--in2", required=True)
    c.add_argument("--algo", choices=["fast", "naive"], default="fast")
    c.add_argument("--normalize", action="store_true")
    c.add_argument("--strict", action="store_true", help="reject inputs that are not valid bbas")
    c.add_argument("--to", choices=["mass", "pl"], default="mass")
    c.add_argument("--out", dest="outfile", required=True)
    c.add_argument("--count", action="store_true")
    c.add_argument("--dense", action="store_true")
    c.set_defaults(func=cmd_combine)

    v = sub.add_parser("verify", help="check that a graph sequence computes its composite's transform")
    v.add_argument("--malgorithm")
    v.add_argument("--hasse", type=int, metavar="N", help="generate the Hasse sequence for n elements")
    v.add_argument("--relation", choices=["subset", "superset"], default="subset")
    v.add_argument("--exclude-empty", action="store_true")
    v.add_argument("--dump", metavar="FILE", help="write the checked sequence as JSON")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("mobius-fn", help="Möbius function of a partial order")
    m.add_argument("--poset", required=True)
    m.add_argument("--method", choices=["recursive", "chains"], default="recursive")
    m.add_argument("--out", dest="outfile")
    m.set_defaults(func=cmd_mobius_fn)

    b = sub.add_parser("bench", help="operation counts and timings, naive vs fast")
    b.add_argument("--n-min", type=int, default=5)
    b.add_argument("--n-max", type=int, default=10)
    b.add_argument("--trials", type=int, default=3)
    b.add_argument("--workload", choices=["transform", "pipeline"], default="transform")
    b.add_argument("--naive-max-n", type=int, default=15)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", dest="outfile", help="CSV output path")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except MobiusError as exc:
        print(f"{PROG}: error[{exc.code}]: {exc}", file=sys.stderr)
        return exc.exit_status
    except OSError as exc:
        print(f"{PROG}: error[io]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
