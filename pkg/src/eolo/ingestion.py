"""File formats, the instance generator, and result serialization.

Instance files are JSON: ``{"records": [...], "pairs": [{"a","b","p"}]}``.
Truth files are JSON partitions: ``{"clusters": [[...], ...]}`` over a
subset of the records (anything unlisted is a singleton).  Parsing is
strict: unknown fields are rejected with a field path.  Writers emit a
canonical form (sorted keys, two-space indent, shortest round-trip
floats) so saved files are byte-stable across runs.
"""

from __future__ import annotations

import csv
import json
import string
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .deduction import ClusterGraph
from .model import (
    EoloError,
    Instance,
    Label,
    Pair,
    make_instance,
    validate_instance,
)
from .strategies import StrategyResult
from .worlds import World, is_consistent_world


class FormatError(EoloError):
    """A file or payload does not match its schema."""


# -- instance files ---------------------------------------------------------

def parse_instance_payload(data: Any) -> Instance:
    """Strictly parse the instance-file JSON shape (already decoded)."""
    if not isinstance(data, dict):
        raise FormatError("instance document must be a JSON object")
    unknown = set(data) - {"records", "pairs"}
    if unknown:
        raise FormatError(f"unknown field {sorted(unknown)[0]!r} in instance")
    if "records" not in data or "pairs" not in data:
        raise FormatError("instance needs both 'records' and 'pairs'")
    records = data["records"]
    if not isinstance(records, list) or not all(isinstance(r, str) for r in records):
        raise FormatError("records: must be a list of strings")
    if not isinstance(data["pairs"], list):
        raise FormatError("pairs: must be a list")
    pairs = []
    for k, obj in enumerate(data["pairs"]):
        where = f"pairs[{k}]"
        if not isinstance(obj, dict):
            raise FormatError(f"{where}: must be an object")
        unknown = set(obj) - {"a", "b", "p"}
        if unknown:
            raise FormatError(f"{where}: unknown field {sorted(unknown)[0]!r}")
        missing = {"a", "b", "p"} - set(obj)
        if missing:
            raise FormatError(f"{where}: missing field {sorted(missing)[0]!r}")
        if not isinstance(obj["a"], str) or not isinstance(obj["b"], str):
            raise FormatError(f"{where}: endpoints must be strings")
        if isinstance(obj["p"], bool) or not isinstance(obj["p"], (int, float)):
            raise FormatError(f"{where}.p: must be a number")
        pairs.append(Pair(obj["a"], obj["b"], float(obj["p"])))
    inst = Instance(tuple(records), tuple(pairs))
    violations = validate_instance(inst)
    if violations:
        raise FormatError("; ".join(violations))
    return inst


def instance_payload(inst: Instance) -> dict:
    return {
        "records": list(inst.records),
        "pairs": [{"a": p.a, "b": p.b, "p": p.p} for p in inst.pairs],
    }


def load_instance(path: str | Path) -> Instance:
    """Load an instance from JSON (or from CSV when the path ends .csv)."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return load_instance_csv(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: malformed JSON: {exc}") from None
    try:
        return parse_instance_payload(data)
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from None


def load_instance_csv(path: str | Path) -> Instance:
    """Convenience importer for flat ``a,b,p`` pair lists.

    Records are the sorted set of endpoints; the result is the same
    Instance the equivalent JSON file would produce.
    """
    path = Path(path)
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames != ["a", "b", "p"]:
            raise FormatError(f"{path}: expected header a,b,p, "
                              f"got {reader.fieldnames}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            try:
                rows.append((row["a"], row["b"], float(row["p"])))
            except (TypeError, KeyError, ValueError):
                raise FormatError(f"{path}:{lineno}: bad row {row!r}") from None
    records = sorted({r for a, b, _p in rows for r in (a, b)})
    inst = make_instance(records, rows)
    violations = validate_instance(inst)
    if violations:
        raise FormatError(f"{path}: " + "; ".join(violations))
    return inst


def save_instance(path: str | Path, inst: Instance) -> None:
    Path(path).write_text(_canonical_json(instance_payload(inst)))


# -- truth files ------------------------------------------------------------

def parse_truth_payload(data: Any, inst: Instance) -> World:
    """Parse a partition document and project it onto the instance's pairs."""
    if not isinstance(data, dict) or set(data) != {"clusters"}:
        raise FormatError("truth document must be exactly {'clusters': [...]}")
    blocks = data["clusters"]
    if not isinstance(blocks, list) or not all(isinstance(b, list) for b in blocks):
        raise FormatError("clusters: must be a list of lists")
    seen: set[str] = set()
    known = set(inst.records)
    for i, block in enumerate(blocks):
        for rid in block:
            if not isinstance(rid, str):
                raise FormatError(f"clusters[{i}]: record ids must be strings")
            if rid not in known:
                raise FormatError(f"clusters[{i}]: unknown record {rid!r}")
            if rid in seen:
                raise FormatError(
                    f"clusters[{i}]: record {rid!r} appears in two blocks")
            seen.add(rid)
    return world_from_partition(inst, blocks)


def world_from_partition(inst: Instance,
                         blocks: Iterable[Iterable[str]]) -> World:
    """Same block means Match; different or unlisted means NonMatch."""
    block_of: dict[str, int] = {}
    for i, block in enumerate(blocks):
        for rid in block:
            block_of[rid] = i
    world = tuple(
        Label.MATCH
        if pair.a in block_of and block_of.get(pair.a) == block_of.get(pair.b)
        else Label.NONMATCH
        for pair in inst.pairs
    )
    if not is_consistent_world(inst, world):
        raise FormatError("truth partition is inconsistent with the pair set")
    return world


def load_truth(path: str | Path, inst: Instance) -> World:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: malformed JSON: {exc}") from None
    try:
        return parse_truth_payload(data, inst)
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from None


def save_truth(path: str | Path, clusters: Iterable[Iterable[str]]) -> None:
    blocks = sorted(sorted(block) for block in clusters)
    Path(path).write_text(_canonical_json({"clusters": blocks}))


def truth_clusters(inst: Instance, world: World) -> list[list[str]]:
    """The partition a world induces through its Match labels."""
    graph = ClusterGraph(inst.records)
    for pair, label in zip(inst.pairs, world):
        if label is Label.MATCH and not graph.assert_label(pair.a, pair.b, label):
            raise EoloError("world violates transitivity")
    return graph.clusters()


# -- results and orders -----------------------------------------------------

def result_payload(row: StrategyResult) -> dict:
    report = row.report
    return {
        "strategy": row.spec.canonical(),
        "order": list(row.order),
        "method": report.method,
        "expected_asked": report.expected_asked,
        "expected_deduced": report.expected_deduced,
        "per_pair_ask_prob": list(report.per_pair_ask_prob),
        "samples": report.samples,
        "seed": report.seed,
        "stderr": report.stderr,
    }


def results_to_jsonl(rows: Sequence[StrategyResult]) -> str:
    """One JSON object per strategy row, full float precision."""
    return "".join(json.dumps(result_payload(row), sort_keys=True) + "\n"
                   for row in rows)


def save_results(path: str | Path, rows: Sequence[StrategyResult]) -> None:
    Path(path).write_text(results_to_jsonl(rows))


def load_order(path: str | Path) -> list[int]:
    """An explicit order file: a JSON array of pair indices."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: malformed JSON: {exc}") from None
    if not isinstance(data, list) or not all(
            isinstance(k, int) and not isinstance(k, bool) for k in data):
        raise FormatError(f"{path}: an order file is a JSON array of integers")
    return data


def _canonical_json(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


# -- generator --------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorConfig:
    """Knobs for synthesizing an (instance, truth) pair.

    Truth comes either from ``explicit_clusters`` or from a sequential
    assignment: each record opens a new cluster with probability
    ``new_cluster_prob``, otherwise joins a uniformly random existing
    one.  Pair probabilities are drawn uniformly in mean +- jitter
    (p_match_mean within a cluster, p_nonmatch_mean across) and clamped
    to [0, 1].  ``pair_fraction`` None means the complete pair set;
    otherwise each pair is kept independently with that probability.
    """

    n_records: int
    seed: int = 0
    explicit_clusters: tuple[tuple[str, ...], ...] | None = None
    new_cluster_prob: float = 0.5
    p_match_mean: float = 0.9
    p_nonmatch_mean: float = 0.1
    jitter: float = 0.05
    pair_fraction: float | None = None


def record_names(n: int) -> tuple[str, ...]:
    """a, b, c, ... for small n; zero-padded r-names beyond the alphabet."""
    if n <= 26:
        return tuple(string.ascii_lowercase[:n])
    width = max(3, len(str(n - 1)))
    return tuple(f"r{i:0{width}d}" for i in range(n))


def generate_instance(cfg: GeneratorConfig) -> tuple[Instance, World]:
    """Deterministically synthesize an instance plus its truth world."""
    if cfg.n_records < 2:
        raise ValueError("n_records must be at least 2")
    for name in ("new_cluster_prob", "p_match_mean", "p_nonmatch_mean"):
        value = getattr(cfg, name)
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} must be in [0, 1], got {value}")
    if cfg.jitter < 0.0:
        raise ValueError("jitter must be nonnegative")
    if cfg.pair_fraction is not None and not 0.0 < cfg.pair_fraction <= 1.0:
        raise ValueError("pair_fraction must be in (0, 1]")

    gen = np.random.default_rng(cfg.seed)
    records = record_names(cfg.n_records)

    if cfg.explicit_clusters is not None:
        blocks = [list(block) for block in cfg.explicit_clusters]
        listed = [rid for block in blocks for rid in block]
        if len(set(listed)) != len(listed):
            raise ValueError("explicit clusters overlap")
        if not set(listed) <= set(records):
            raise ValueError("explicit clusters mention unknown records")
    else:
        blocks = []
        for rid in records:
            if not blocks or gen.random() < cfg.new_cluster_prob:
                blocks.append([rid])
            else:
                blocks[int(gen.integers(len(blocks)))].append(rid)

    block_of = {rid: i for i, block in enumerate(blocks) for rid in block}
    triples: list[tuple[str, str, float]] = []
    same_flags: list[bool] = []
    for i in range(len(records)):
        for j in range(i + 1, len(records)):
            if cfg.pair_fraction is not None and gen.random() >= cfg.pair_fraction:
                continue
            a, b = records[i], records[j]
            same = (a in block_of and b in block_of
                    and block_of[a] == block_of[b])
            mean = cfg.p_match_mean if same else cfg.p_nonmatch_mean
            p = mean + cfg.jitter * float(gen.uniform(-1.0, 1.0))
            triples.append((a, b, min(1.0, max(0.0, p))))
            same_flags.append(same)

    inst = make_instance(records, triples)
    violations = validate_instance(inst)
    assert not violations, violations
    world = tuple(Label.MATCH if same else Label.NONMATCH for same in same_flags)
    assert is_consistent_world(inst, world)
    return inst, world
