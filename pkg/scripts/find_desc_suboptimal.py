#!/usr/bin/env python3
"""Seeded search for an instance where the descending-probability order
is strictly worse than the brute-force optimum.

Such instances must exist (otherwise sorting would solve an NP-hard
problem), but small ones take a little hunting.  The first hit with a
comfortable gap is frozen into tests/fixtures/desc_suboptimal_witness.json
so the test suite can assert against a concrete example without
re-searching.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from eolo import exact_expected_cost, make_order, parse_strategy
from eolo.ingestion import GeneratorConfig, generate_instance, instance_payload


def search(seed: int, tries: int, min_gap: float):
    gen = np.random.default_rng(seed)
    best = None
    for trial in range(tries):
        n = int(gen.integers(3, 5))
        cfg = GeneratorConfig(
            n_records=n,
            seed=int(gen.integers(0, 2**31)),
            new_cluster_prob=float(gen.uniform(0.2, 0.9)),
            p_match_mean=float(gen.uniform(0.5, 1.0)),
            p_nonmatch_mean=float(gen.uniform(0.0, 0.5)),
            jitter=float(gen.uniform(0.0, 0.4)),
            pair_fraction=None if gen.random() < 0.5 else float(gen.uniform(0.6, 1.0)),
        )
        inst, _truth = generate_instance(cfg)
        if not 2 <= inst.m <= 6:
            continue
        desc = make_order(inst, parse_strategy("desc"))
        optimal = make_order(inst, parse_strategy("optimal"))
        desc_cost = exact_expected_cost(inst, desc).expected_asked
        optimal_cost = exact_expected_cost(inst, optimal).expected_asked
        gap = desc_cost - optimal_cost
        if gap > min_gap:
            return {
                "instance": instance_payload(inst),
                "desc_order": list(desc),
                "desc_cost": desc_cost,
                "optimal_order": list(optimal),
                "optimal_cost": optimal_cost,
                "gap": gap,
                "search_seed": seed,
                "trial": trial,
            }
        if best is None or gap > best[0]:
            best = (gap, trial)
    print(f"no witness with gap > {min_gap} in {tries} tries "
          f"(best gap {best[0]:.6f} at trial {best[1]})", file=sys.stderr)
    return None


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=2024)
    parser.add_argument("--tries", type=int, default=2000)
    parser.add_argument("--min-gap", type=float, default=0.05)
    parser.add_argument("--out", default=str(Path(__file__).resolve().parent.parent
                                             / "tests" / "fixtures"
                                             / "desc_suboptimal_witness.json"))
    args = parser.parse_args()
    witness = search(args.seed, args.tries, args.min_gap)
    if witness is None:
        return 1
    Path(args.out).write_text(json.dumps(witness, indent=2, sort_keys=True) + "\n")
    print(f"witness written to {args.out}: desc {witness['desc_cost']:.6f} vs "
          f"optimal {witness['optimal_cost']:.6f} (gap {witness['gap']:.6f})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
