"""Command-line entry point: gen, eval, simulate, serve.

Exit codes: 0 success, 2 usage errors, 1 runtime errors.  Results go to
stdout, diagnostics to stderr; set EOLO_LOG=debug|info|warning|error to
adjust logging.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import __version__
from .ingestion import (
    GeneratorConfig,
    generate_instance,
    load_instance,
    load_order,
    load_truth,
    results_to_jsonl,
    save_instance,
    save_results,
    save_truth,
    truth_clusters,
)
from .model import EoloError
from .simulator import run_batch, trace_to_jsonl
from .strategies import (
    CANONICAL_FORMS,
    StrategySpec,
    evaluate_strategies,
    make_order,
    parse_strategy,
)

log = logging.getLogger("eolo")

INDEPENDENCE_WARNING = (
    "warning: the independence estimator ignores label correlations "
    "introduced by transitive deduction and is known to misestimate "
    "expected cost; use --method exact or mc for decisions")


class UsageError(EoloError):
    """Bad flag combinations detected after argparse."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eolo",
        description="Transitivity-aware pair labeling: expected-cost "
                    "analysis, order strategies, and labeling sessions.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for anything randomized")
    parser.add_argument("--format", choices=("json", "table"), default="table",
                        help="result format on stdout")
    parser.add_argument("--quiet", action="store_true",
                        help="suppress informational output on stderr")
    # the global flags are also accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("json", "table"),
                        default=argparse.SUPPRESS)
    common.add_argument("--quiet", action="store_true",
                        default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", parents=[common],
                         help="generate a synthetic instance + truth")
    gen.add_argument("--records", type=int, required=True)
    gen.add_argument("--out", required=True, help="instance file to write")
    gen.add_argument("--truth-out", help="truth partition file to write")
    pairset = gen.add_mutually_exclusive_group()
    pairset.add_argument("--complete", action="store_true", default=True,
                         help="use every record pair (default)")
    pairset.add_argument("--pair-fraction", type=float, default=None,
                         help="keep each pair independently with this probability")
    gen.add_argument("--p-match", type=float, default=0.9,
                     help="mean probability for within-cluster pairs")
    gen.add_argument("--p-nonmatch", type=float, default=0.1,
                     help="mean probability for cross-cluster pairs")
    gen.add_argument("--jitter", type=float, default=0.05,
                     help="uniform half-width added to the means")
    gen.add_argument("--new-cluster-prob", type=float, default=0.5,
                     help="chance each record opens a new truth cluster")
    gen.set_defaults(func=cmd_gen)

    ev = sub.add_parser("eval", parents=[common], help="compare strategies on an instance")
    ev.add_argument("--instance", required=True)
    ev.add_argument("--strategies", required=True,
                    help=f"comma-separated; canonical forms: {CANONICAL_FORMS}")
    ev.add_argument("--method", choices=("exact", "mc", "independence"),
                    default="exact")
    ev.add_argument("--samples", type=int, default=100_000,
                    help="sample count for --method mc")
    ev.add_argument("--out", help="also write rows as JSON lines to this file")
    ev.set_defaults(func=cmd_eval)

    sim = sub.add_parser("simulate", parents=[common], help="replay a batch session against a truth")
    sim.add_argument("--instance", required=True)
    sim.add_argument("--truth", required=True)
    sim.add_argument("--strategy", required=True)
    sim.add_argument("--trace-out", help="write the JSON-lines trace here")
    sim.set_defaults(func=cmd_simulate)

    srv = sub.add_parser("serve", parents=[common], help="run the HTTP session service")
    srv.add_argument("--port", type=int, required=True)
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--static-dir", help="serve the web UI from this directory")
    srv.add_argument("--persist-dir",
                     help="save sessions here on shutdown, reload on startup")
    srv.set_defaults(func=cmd_serve)
    return parser


def _resolve_strategy(text: str) -> StrategySpec:
    try:
        spec = parse_strategy(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if spec.kind == "explicit" and spec.path is not None:
        order = load_order(spec.path)
        return StrategySpec(kind="explicit", order=tuple(order), path=spec.path)
    return spec


def cmd_gen(args: argparse.Namespace) -> int:
    cfg = GeneratorConfig(
        n_records=args.records,
        seed=args.seed,
        new_cluster_prob=args.new_cluster_prob,
        p_match_mean=args.p_match,
        p_nonmatch_mean=args.p_nonmatch,
        jitter=args.jitter,
        pair_fraction=args.pair_fraction,
    )
    inst, world = generate_instance(cfg)
    save_instance(args.out, inst)
    if args.truth_out:
        save_truth(args.truth_out, truth_clusters(inst, world))
    if not args.quiet:
        print(f"wrote {len(inst.records)} records, {inst.m} pairs to {args.out}",
              file=sys.stderr)
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    log.debug("loaded %s: %d records, %d pairs",
              args.instance, len(inst.records), inst.m)
    specs = [_resolve_strategy(s) for s in args.strategies.split(",") if s]
    if not specs:
        raise UsageError(f"no strategies given; canonical forms: {CANONICAL_FORMS}")
    method = {"exact": "exact", "mc": "monte_carlo",
              "independence": "independence"}[args.method]
    if method == "independence":
        print(INDEPENDENCE_WARNING, file=sys.stderr)
    rows = evaluate_strategies(inst, specs, method=method,
                               samples=args.samples, seed=args.seed)
    if args.format == "json":
        sys.stdout.write(results_to_jsonl(rows))
    else:
        _print_table(rows)
    if args.out:
        save_results(args.out, rows)
    return 0


def _print_table(rows) -> None:
    header = f"{'strategy':<16} {'expected_asked':>14} {'expected_deduced':>16}  order"
    print(header)
    print("-" * len(header))
    for row in rows:
        report = row.report
        extra = f" +-{report.stderr:.4f}" if report.stderr is not None else ""
        print(f"{row.spec.canonical():<16} {report.expected_asked:>14.4f} "
              f"{report.expected_deduced:>16.4f}  {list(row.order)}{extra}")


def cmd_simulate(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    truth = load_truth(args.truth, inst)
    log.debug("loaded %s: %d records, %d pairs", args.instance,
              len(inst.records), inst.m)
    spec = _resolve_strategy(args.strategy)
    order = make_order(inst, spec)
    result = run_batch(inst, order, truth)
    if args.trace_out:
        with open(args.trace_out, "w") as handle:
            handle.write(trace_to_jsonl(inst, result.trace))
    clusters = [list(c) for c in result.clusters]
    if args.format == "json":
        print(json.dumps({
            "strategy": spec.canonical(),
            "order": list(order),
            "asked": result.asked,
            "deduced": result.deduced,
            "clusters": clusters,
        }, sort_keys=True))
    else:
        print(f"asked={result.asked} deduced={result.deduced}")
        print("clusters: " + " | ".join("{" + ",".join(c) + "}" for c in clusters))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    if not 1 <= args.port <= 65535:
        raise UsageError(f"--port must be in 1..65535, got {args.port}")
    if args.static_dir is not None and not os.path.isdir(args.static_dir):
        raise EoloError(f"static dir {args.static_dir!r} does not exist")
    import uvicorn

    from .service import create_app

    app = create_app(static_dir=args.static_dir, persist_dir=args.persist_dir)
    log_level = "warning" if args.quiet else "info"
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level=log_level)
    except SystemExit:
        # uvicorn exits 3 on startup failure (e.g. port already bound);
        # fold that into this tool's runtime-error code
        raise EoloError(
            f"server failed to start on {args.host}:{args.port} "
            "(port already in use?)") from None
    return 0


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        stream=sys.stderr,
        level=getattr(logging, os.environ.get("EOLO_LOG", "warning").upper(),
                      logging.WARNING))
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except EoloError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
