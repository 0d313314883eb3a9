"""Shared domain types: records, pairs, instances, labels, orders, outcomes.

Record ids are opaque strings.  A pair is unordered: ``(a, b)`` and
``(b, a)`` denote the same pair and are canonicalized lexicographically.
All values here are immutable after construction.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence


class EoloError(Exception):
    """Base class for all errors raised by this package."""


class CapExceededError(EoloError):
    """An operation exceeded its configured size cap."""


class Label(enum.Enum):
    """Crowd verdict for one pair: same entity or not."""

    MATCH = "match"
    NONMATCH = "nonmatch"

    def __repr__(self) -> str:  # keeps test tracebacks readable
        return f"Label.{self.name}"


@dataclass(frozen=True)
class Pair:
    """An unordered candidate pair with a prior match probability."""

    a: str
    b: str
    p: float

    def key(self) -> tuple[str, str]:
        return canonical_pair_key(self.a, self.b)


@dataclass(frozen=True)
class Instance:
    """A labeling problem: records plus candidate pairs with priors.

    The pair list may be any subgraph of the complete graph over the
    records; completeness is not required.  Construction does not
    validate; call :func:`validate_instance`.
    """

    records: tuple[str, ...]
    pairs: tuple[Pair, ...]

    @property
    def m(self) -> int:
        return len(self.pairs)

    def pair_index(self) -> dict[tuple[str, str], int]:
        """Map canonical pair keys to positions in ``pairs``."""
        return {pair.key(): k for k, pair in enumerate(self.pairs)}


def make_instance(records: Iterable[str],
                  pairs: Iterable[tuple[str, str, float]]) -> Instance:
    """Convenience constructor from plain tuples; does not validate."""
    return Instance(tuple(records), tuple(Pair(a, b, p) for a, b, p in pairs))


# A labeling order is a permutation of pair indices 0..m-1.
Order = tuple[int, ...]


@dataclass(frozen=True)
class Outcome:
    """How one pair got its label: asked to the crowd, or deduced.

    ``kind`` is ``"asked"`` or ``"deduced"``; the strings double as the
    wire format used in traces.
    """

    kind: str
    label: Label

    ASKED = "asked"
    DEDUCED = "deduced"

    @classmethod
    def asked(cls, label: Label) -> "Outcome":
        return cls(cls.ASKED, label)

    @classmethod
    def deduced(cls, label: Label) -> "Outcome":
        return cls(cls.DEDUCED, label)


def canonical_pair_key(a: str, b: str) -> tuple[str, str]:
    """Order two distinct record ids lexicographically.

    Gives ``(a, b)`` and ``(b, a)`` the same key, so sets and files can
    store one entry per pair.
    """
    if a == b:
        raise ValueError(f"a pair needs two distinct records, got {a!r} twice")
    return (a, b) if a < b else (b, a)


def validate_instance(inst: Instance) -> list[str]:
    """Return every invariant violation in ``inst`` (empty list if valid).

    Violations are data, not failures: duplicate or empty record ids,
    self-pairs, pairs with unknown endpoints, probabilities outside
    [0, 1], and duplicate pairs under unordered equality.
    """
    violations: list[str] = []
    seen_records: set[str] = set()
    for rid in inst.records:
        if rid == "":
            violations.append("records: empty record id")
        elif rid in seen_records:
            violations.append(f"records: duplicate record id {rid!r}")
        seen_records.add(rid)

    seen_keys: set[tuple[str, str]] = set()
    for k, pair in enumerate(inst.pairs):
        where = f"pairs[{k}]"
        if pair.a == pair.b:
            violations.append(f"{where}: self-pair on {pair.a!r}")
            continue
        for endpoint in (pair.a, pair.b):
            if endpoint not in seen_records:
                violations.append(f"{where}: unknown record {endpoint!r}")
        if not isinstance(pair.p, (int, float)) or isinstance(pair.p, bool) \
                or not (0.0 <= pair.p <= 1.0):
            violations.append(f"{where}.p: probability {pair.p!r} not in [0, 1]")
        key = canonical_pair_key(pair.a, pair.b)
        if key in seen_keys:
            violations.append(f"{where}: duplicate pair {key}")
        seen_keys.add(key)
    return violations


def check_order(inst: Instance, seq: Sequence[int]) -> Order:
    """Verify that ``seq`` is a permutation of 0..m-1 and return it as a tuple."""
    order = tuple(seq)
    if sorted(order) != list(range(inst.m)):
        raise ValueError(
            f"order {order} is not a permutation of 0..{inst.m - 1}")
    return order
