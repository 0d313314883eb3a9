"""Labeling-order generators: random, probability-sorted, explicit, and
brute-force optimal/worst oracles.

Finding the order with minimal expected crowdsourcing cost is NP-hard,
so the optimal/worst oracles simply sweep all m! permutations and are
capped at small m.  The sorted orders are cheap heuristics: they order
pairs by prior match probability (descending or ascending) with ties
broken by pair index.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .cost import (
    METHOD_EXACT,
    METHOD_INDEPENDENCE,
    METHOD_MONTE_CARLO,
    CostReport,
    exact_expected_cost,
    independence_expected_cost,
    mc_expected_cost,
)
from .deduction import ClusterGraph, Verdict
from .model import CapExceededError, Instance, Order, check_order
from .worlds import MAX_ENUMERATION_PAIRS, WorldDistribution, world_distribution

MAX_BRUTE_FORCE_PAIRS = 8

KIND_RANDOM = "random"
KIND_DESC = "desc"
KIND_ASC = "asc"
KIND_EXPLICIT = "explicit"
KIND_OPTIMAL = "optimal"
KIND_WORST = "worst"

CANONICAL_FORMS = "random:SEED, desc, asc, optimal, worst, explicit:FILE"


@dataclass(frozen=True)
class StrategySpec:
    """One order-generation recipe.

    ``seed`` only applies to ``random``; ``order`` carries a resolved
    explicit permutation; ``path`` holds an unresolved ``explicit:FILE``
    reference until the caller loads the file.
    """

    kind: str
    seed: int | None = None
    order: Order | None = None
    path: str | None = None

    def canonical(self) -> str:
        if self.kind == KIND_RANDOM:
            return f"random:{self.seed}"
        if self.kind == KIND_EXPLICIT:
            if self.path is not None:
                return f"explicit:{self.path}"
            return "explicit:" + ",".join(str(k) for k in self.order or ())
        return self.kind


def parse_strategy(text: str) -> StrategySpec:
    """Parse a canonical strategy string.

    Accepted forms: ``random:SEED``, ``desc``, ``asc``, ``optimal``,
    ``worst``, ``explicit:FILE``.  Raises ``ValueError`` otherwise.
    """
    text = text.strip()
    if text in (KIND_DESC, KIND_ASC, KIND_OPTIMAL, KIND_WORST):
        return StrategySpec(kind=text)
    if text.startswith("random:"):
        try:
            return StrategySpec(kind=KIND_RANDOM, seed=int(text.split(":", 1)[1]))
        except ValueError:
            raise ValueError(f"random seed must be an integer, got {text!r}") from None
    if text.startswith("explicit:"):
        path = text.split(":", 1)[1]
        if not path:
            raise ValueError("explicit strategy needs a file: explicit:FILE")
        return StrategySpec(kind=KIND_EXPLICIT, path=path)
    raise ValueError(
        f"unknown strategy {text!r}; canonical forms: {CANONICAL_FORMS}")


def make_order(inst: Instance, spec: StrategySpec,
               brute_cap: int = MAX_BRUTE_FORCE_PAIRS,
               world_cap: int = MAX_ENUMERATION_PAIRS) -> Order:
    """Produce the labeling order a strategy prescribes for ``inst``.

    ``random`` permutes uniformly with NumPy's PCG64 generator, so equal
    seeds give identical orders on every platform.  The brute-force
    kinds raise :class:`CapExceededError` past ``brute_cap`` pairs.
    """
    m = inst.m
    if spec.kind == KIND_RANDOM:
        gen = np.random.default_rng(spec.seed)
        return tuple(int(k) for k in gen.permutation(m))
    if spec.kind == KIND_DESC:
        return tuple(sorted(range(m), key=lambda k: (-inst.pairs[k].p, k)))
    if spec.kind == KIND_ASC:
        return tuple(sorted(range(m), key=lambda k: (inst.pairs[k].p, k)))
    if spec.kind == KIND_EXPLICIT:
        if spec.order is None:
            raise ValueError(
                f"explicit strategy not resolved (load {spec.path!r} first)")
        return check_order(inst, spec.order)
    if spec.kind in (KIND_OPTIMAL, KIND_WORST):
        if m > brute_cap:
            raise CapExceededError(
                f"instance has {m} pairs; the brute-force order search is "
                f"capped at {brute_cap} (m! orders get evaluated)")
        return _sweep_orders(inst, maximize=spec.kind == KIND_WORST,
                             world_cap=world_cap)
    raise ValueError(f"unknown strategy kind {spec.kind!r}")


def _prefix_ask_table(inst: Instance,
                      dist: WorldDistribution) -> list[list[float]]:
    """ask_prob[prefix_bitmask][pair] for the exhaustive order sweep.

    Whether a pair gets asked depends only on which pairs were processed
    before it, not on their relative order: the graph state after a
    prefix is the closure of the world's labels on that prefix set.  So
    the expected cost of any order decomposes into one table entry per
    position, and the m! sweep reduces to table lookups.
    """
    m = inst.m
    table = [[0.0] * m for _ in range(1 << m)]
    for world, prob in zip(dist.worlds, dist.probs):
        for mask in range(1 << m):
            graph = ClusterGraph(inst.records)
            for k in range(m):
                if mask >> k & 1:
                    accepted = graph.assert_label(
                        inst.pairs[k].a, inst.pairs[k].b, world[k])
                    assert accepted, "world labels cannot contradict each other"
            row = table[mask]
            for k in range(m):
                if not mask >> k & 1:
                    pair = inst.pairs[k]
                    if graph.deduce(pair.a, pair.b) is Verdict.UNKNOWN:
                        row[k] += prob
    return table


def _sweep_orders(inst: Instance, maximize: bool, world_cap: int) -> Order:
    dist = world_distribution(inst, cap=world_cap)
    table = _prefix_ask_table(inst, dist)
    best_cost: float | None = None
    best_order: tuple[int, ...] | None = None
    # permutations() yields lexicographically, so keeping only strict
    # improvements breaks ties toward the smallest index sequence
    for perm in itertools.permutations(range(inst.m)):
        mask = 0
        cost = 0.0
        for k in perm:
            cost += table[mask][k]
            mask |= 1 << k
        if best_cost is None or (cost > best_cost if maximize else cost < best_cost):
            best_cost, best_order = cost, perm
    assert best_order is not None
    return best_order


@dataclass(frozen=True)
class StrategyResult:
    spec: StrategySpec
    order: Order
    report: CostReport


def evaluate_strategies(inst: Instance, specs: Iterable[StrategySpec],
                        method: str = METHOD_EXACT,
                        samples: int = 100_000, seed: int = 0,
                        brute_cap: int = MAX_BRUTE_FORCE_PAIRS,
                        world_cap: int = MAX_ENUMERATION_PAIRS
                        ) -> list[StrategyResult]:
    """Cost every strategy on one instance; rows sorted by expected cost.

    ``method`` is ``"exact"``, ``"monte_carlo"`` (uses ``samples`` and
    ``seed``), or ``"independence"``.  Ties keep the caller's spec order
    (stable sort), so output is fully deterministic given seeds.
    """
    rows: list[StrategyResult] = []
    for spec in specs:
        order = make_order(inst, spec, brute_cap=brute_cap, world_cap=world_cap)
        if method == METHOD_EXACT:
            report = exact_expected_cost(inst, order, cap=world_cap)
        elif method == METHOD_MONTE_CARLO:
            report = mc_expected_cost(inst, order, samples, seed=seed,
                                      cap=world_cap)
        elif method == METHOD_INDEPENDENCE:
            report = independence_expected_cost(inst, order, cap=world_cap)
        else:
            raise ValueError(
                f"unknown method {method!r}; expected exact, monte_carlo "
                "or independence")
        rows.append(StrategyResult(spec=spec, order=order, report=report))
    rows.sort(key=lambda row: row.report.expected_asked)
    return rows
