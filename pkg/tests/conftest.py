"""Shared fixtures and converters between package types and oracle types."""

import numpy as np
import pytest

from eolo import Instance, Label, make_instance
from eolo.ingestion import GeneratorConfig, generate_instance


@pytest.fixture
def triangle() -> Instance:
    return make_instance(
        ["a", "b", "c"],
        [("a", "b", 0.5), ("a", "c", 0.5), ("b", "c", 0.5)],
    )


def oracle_form(inst: Instance):
    """(n, indexed pair list) for the tests/oracles.py functions."""
    index = {rid: i for i, rid in enumerate(inst.records)}
    return len(inst.records), [(index[p.a], index[p.b], p.p) for p in inst.pairs]


def world_to_bits(world) -> tuple:
    return tuple(label is Label.MATCH for label in world)


def bits_to_world(bits) -> tuple:
    return tuple(Label.MATCH if b else Label.NONMATCH for b in bits)


def random_instances(seed: int, count: int, max_pairs: int,
                     min_pairs: int = 1, max_records: int = 6):
    """Reproducible stream of valid random instances for property tests."""
    rng = np.random.default_rng(seed)
    produced = 0
    while produced < count:
        cfg = GeneratorConfig(
            n_records=int(rng.integers(2, max_records + 1)),
            seed=int(rng.integers(0, 2**31)),
            new_cluster_prob=float(rng.uniform(0.1, 0.9)),
            p_match_mean=float(rng.uniform(0.2, 1.0)),
            p_nonmatch_mean=float(rng.uniform(0.0, 0.8)),
            jitter=float(rng.uniform(0.0, 0.5)),
            pair_fraction=None if rng.random() < 0.4 else float(rng.uniform(0.4, 1.0)),
        )
        inst, truth = generate_instance(cfg)
        if min_pairs <= inst.m <= max_pairs:
            produced += 1
            yield inst, truth, rng
