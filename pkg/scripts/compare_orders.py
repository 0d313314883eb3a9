#!/usr/bin/env python3
"""Compare labeling-order strategies across a family of generated instances.

For each seeded instance the script evaluates every strategy exactly and
reports per-strategy means plus how often each one attains the optimum.
Useful for getting a feel for how much ordering actually matters at a
given noise level.

Example:
    python scripts/compare_orders.py --instances 50 --records 4 --jitter 0.3
"""

import argparse
import sys

from eolo import evaluate_strategies, parse_strategy
from eolo.ingestion import GeneratorConfig, generate_instance


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--instances", type=int, default=30)
    parser.add_argument("--records", type=int, default=4)
    parser.add_argument("--pair-fraction", type=float, default=None)
    parser.add_argument("--p-match", type=float, default=0.8)
    parser.add_argument("--p-nonmatch", type=float, default=0.2)
    parser.add_argument("--jitter", type=float, default=0.2)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--strategies", default="optimal,desc,asc,random:1,worst")
    args = parser.parse_args()

    specs = [parse_strategy(s) for s in args.strategies.split(",")]
    names = [s.canonical() for s in specs]
    totals = {name: 0.0 for name in names}
    optimal_hits = {name: 0 for name in names}
    evaluated = 0

    for i in range(args.instances):
        cfg = GeneratorConfig(
            n_records=args.records,
            seed=args.seed + i,
            p_match_mean=args.p_match,
            p_nonmatch_mean=args.p_nonmatch,
            jitter=args.jitter,
            pair_fraction=args.pair_fraction,
        )
        inst, _truth = generate_instance(cfg)
        if inst.m < 2 or inst.m > 8:
            continue
        try:
            rows = evaluate_strategies(inst, specs)
        except Exception as exc:
            print(f"seed {cfg.seed}: skipped ({exc})", file=sys.stderr)
            continue
        evaluated += 1
        best = min(row.report.expected_asked for row in rows)
        for row in rows:
            name = row.spec.canonical()
            totals[name] += row.report.expected_asked
            if row.report.expected_asked <= best + 1e-9:
                optimal_hits[name] += 1

    if not evaluated:
        print("no instances evaluated", file=sys.stderr)
        return 1
    print(f"{evaluated} instances, {args.records} records each\n")
    print(f"{'strategy':<12} {'mean asked':>12} {'attains optimum':>16}")
    for name in names:
        mean = totals[name] / evaluated
        share = optimal_hits[name] / evaluated
        print(f"{name:<12} {mean:>12.4f} {share:>15.0%}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
