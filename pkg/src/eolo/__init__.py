"""Transitivity-aware pair labeling for entity resolution.

Core pieces: a deduction graph over Match/NonMatch facts, the
possible-worlds probability model for labeling costs, order strategies
with brute-force optimal/worst oracles, a session simulator, and file
formats plus a CLI and HTTP service on top.
"""

from .cost import (
    CostReport,
    exact_expected_cost,
    independence_expected_cost,
    mc_expected_cost,
    world_cost,
)
from .deduction import ClusterGraph, Verdict, label_to_verdict, verdict_to_label
from .ingestion import (
    FormatError,
    GeneratorConfig,
    generate_instance,
    load_instance,
    load_truth,
    save_instance,
    save_results,
    save_truth,
)
from .model import (
    CapExceededError,
    EoloError,
    Instance,
    Label,
    Order,
    Outcome,
    Pair,
    canonical_pair_key,
    check_order,
    make_instance,
    validate_instance,
)
from .simulator import (
    BatchResult,
    OutOfTurnError,
    Session,
    Step,
    run_batch,
    trace_to_jsonl,
)
from .strategies import (
    StrategyResult,
    StrategySpec,
    evaluate_strategies,
    make_order,
    parse_strategy,
)
from .worlds import (
    SamplingError,
    World,
    WorldDistribution,
    enumerate_worlds,
    is_consistent_world,
    sample_world,
    world_distribution,
    world_weight,
)

__version__ = "0.1.0"

__all__ = [
    "BatchResult",
    "CapExceededError",
    "ClusterGraph",
    "CostReport",
    "EoloError",
    "FormatError",
    "GeneratorConfig",
    "Instance",
    "Label",
    "Order",
    "Outcome",
    "OutOfTurnError",
    "Pair",
    "SamplingError",
    "Session",
    "Step",
    "StrategyResult",
    "StrategySpec",
    "Verdict",
    "World",
    "WorldDistribution",
    "canonical_pair_key",
    "check_order",
    "enumerate_worlds",
    "evaluate_strategies",
    "exact_expected_cost",
    "generate_instance",
    "independence_expected_cost",
    "is_consistent_world",
    "label_to_verdict",
    "load_instance",
    "load_truth",
    "make_instance",
    "make_order",
    "mc_expected_cost",
    "parse_strategy",
    "run_batch",
    "sample_world",
    "save_instance",
    "save_results",
    "save_truth",
    "trace_to_jsonl",
    "validate_instance",
    "verdict_to_label",
    "world_cost",
    "world_distribution",
    "world_weight",
]
