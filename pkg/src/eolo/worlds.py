"""Possible worlds: consistent label assignments and their probabilities.

A world assigns Match/NonMatch to every pair of an instance such that no
transitive rule is violated.  Worlds are weighted by the independent
product of their pair probabilities and then renormalized over the
consistent assignments only; on a triangle of 0.5-pairs this yields five
worlds of probability 0.2 each.

The probability space is consistent label assignments over the
instance's pair set, not partitions of the record set.  On complete pair
graphs the two coincide bijectively; on incomplete graphs assignments
are the natural generalization since only listed pairs carry priors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .deduction import ClusterGraph, Verdict, verdict_to_label
from .model import CapExceededError, EoloError, Instance, Label

# A world is a label per pair, aligned with Instance.pairs.
World = tuple[Label, ...]

MAX_ENUMERATION_PAIRS = 20
MAX_SAMPLE_ATTEMPTS = 10_000


class SamplingError(EoloError):
    """Rejection sampling exhausted its attempt budget."""


def as_rng(seed_or_rng: int | np.random.Generator | None) -> np.random.Generator:
    """Coerce a seed (or None) to a NumPy PCG64 generator; pass streams through."""
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)


@dataclass(frozen=True)
class WorldDistribution:
    """Aligned worlds and normalized probabilities (sum to 1)."""

    worlds: tuple[World, ...]
    probs: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.worlds)


def is_consistent_world(inst: Instance, world: World) -> bool:
    """True iff feeding every label into a fresh graph yields no contradiction."""
    if len(world) != inst.m:
        raise ValueError("world must label every pair of the instance")
    graph = ClusterGraph(inst.records)
    return all(
        graph.assert_label(pair.a, pair.b, label)
        for pair, label in zip(inst.pairs, world)
    )


def _rebuild(inst: Instance, labels: list[Label]) -> ClusterGraph:
    graph = ClusterGraph(inst.records)
    for pair, label in zip(inst.pairs, labels):
        accepted = graph.assert_label(pair.a, pair.b, label)
        assert accepted, "enumeration prefix must stay consistent"
    return graph


def enumerate_worlds(inst: Instance,
                     cap: int = MAX_ENUMERATION_PAIRS) -> list[World]:
    """All consistent label assignments, in canonical order.

    Depth-first over pairs in index order, Match branch before NonMatch;
    branches are abandoned as soon as the prefix becomes contradictory,
    so only consistent assignments are ever completed.
    """
    if inst.m > cap:
        raise CapExceededError(
            f"instance has {inst.m} pairs; world enumeration is capped at {cap}")
    out: list[World] = []
    prefix: list[Label] = []

    def walk(graph: ClusterGraph) -> None:
        idx = len(prefix)
        if idx == inst.m:
            out.append(tuple(prefix))
            return
        pair = inst.pairs[idx]
        verdict = graph.deduce(pair.a, pair.b)
        if verdict is not Verdict.UNKNOWN:
            # forced label: asserting it is a no-op, reuse the graph
            prefix.append(verdict_to_label(verdict))
            walk(graph)
            prefix.pop()
            return
        for label in (Label.MATCH, Label.NONMATCH):
            prefix.append(label)
            walk(_rebuild(inst, prefix))
            prefix.pop()

    walk(ClusterGraph(inst.records))
    return out


def world_weight(inst: Instance, world: World) -> float:
    """Unnormalized weight: product over pairs of p (Match) or 1-p (NonMatch)."""
    weight = 1.0
    for pair, label in zip(inst.pairs, world):
        weight *= pair.p if label is Label.MATCH else 1.0 - pair.p
    return weight


def world_distribution(inst: Instance,
                       cap: int = MAX_ENUMERATION_PAIRS) -> WorldDistribution:
    """Enumerate worlds and renormalize their product weights.

    Raises :class:`EoloError` when every consistent world has weight 0,
    which means the hard 0/1 priors contradict each other.
    """
    worlds = enumerate_worlds(inst, cap=cap)
    weights = [world_weight(inst, w) for w in worlds]
    total = math.fsum(weights)
    if total <= 0.0:
        raise EoloError(
            "every consistent world has weight 0; the instance's hard "
            "0/1 probabilities are mutually contradictory")
    return WorldDistribution(tuple(worlds), tuple(w / total for w in weights))


def sample_world(inst: Instance,
                 rng: int | np.random.Generator | None = None,
                 max_attempts: int = MAX_SAMPLE_ATTEMPTS) -> World:
    """Draw one world by rejection: independent labels, retry until consistent.

    Pairs with p exactly 0 or 1 are forced without consuming randomness.
    Raises :class:`SamplingError` with an acceptance-rate estimate once
    ``max_attempts`` candidates in a row were rejected.
    """
    gen = as_rng(rng)
    forced: list[Label | None] = []
    for pair in inst.pairs:
        if pair.p == 0.0:
            forced.append(Label.NONMATCH)
        elif pair.p == 1.0:
            forced.append(Label.MATCH)
        else:
            forced.append(None)
    for _ in range(max_attempts):
        labels = tuple(
            fixed if fixed is not None
            else (Label.MATCH if gen.random() < pair.p else Label.NONMATCH)
            for pair, fixed in zip(inst.pairs, forced)
        )
        if is_consistent_world(inst, labels):
            return labels
    raise SamplingError(
        f"no consistent world in {max_attempts} attempts "
        f"(acceptance rate < {1.0 / max_attempts:.2e})")
