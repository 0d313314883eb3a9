"""Incremental label store with transitive deduction.

A :class:`ClusterGraph` keeps accepted Match facts as union-find
equivalence classes and accepted NonMatch facts as disequality edges
between class representatives.  The two inference rules it closes over:

    a = b  and  b = c   implies   a = c
    a = b  and  b != c  implies   a != c

Two disequalities imply nothing, so ``a != b`` and ``b != c`` leave
``(a, c)`` unknown.
"""

from __future__ import annotations

import enum
from typing import Iterable

from .model import EoloError, Label


class Verdict(enum.Enum):
    """Deducibility of a pair from the accepted facts."""

    MATCH = "match"
    NONMATCH = "nonmatch"
    UNKNOWN = "unknown"

    def __repr__(self) -> str:
        return f"Verdict.{self.name}"


def label_to_verdict(label: Label) -> Verdict:
    return Verdict.MATCH if label is Label.MATCH else Verdict.NONMATCH


def verdict_to_label(verdict: Verdict) -> Label:
    if verdict is Verdict.UNKNOWN:
        raise ValueError("no label for Verdict.UNKNOWN")
    return Label.MATCH if verdict is Verdict.MATCH else Label.NONMATCH


class UnknownRecordError(EoloError):
    """A record id was not registered with the graph."""


class ClusterGraph:
    """Union-find clusters plus disequality edges between representatives.

    Mutations are single-writer; distinct instances are independent.
    There is no rollback: snapshot by replaying the assertion trace into
    a fresh graph.
    """

    def __init__(self, records: Iterable[str]):
        records = list(records)
        if not records:
            raise ValueError("a ClusterGraph needs at least one record")
        if len(set(records)) != len(records):
            raise ValueError("duplicate record ids")
        self._parent: dict[str, str] = {r: r for r in records}
        self._size: dict[str, int] = {r: 1 for r in records}
        # symmetric adjacency between current representatives
        self._nonmatch: dict[str, set[str]] = {}
        self.assertion_count = 0

    # -- queries ------------------------------------------------------------

    def records(self) -> list[str]:
        return list(self._parent)

    def find(self, rid: str) -> str:
        """Representative of ``rid``'s cluster (path compression inside)."""
        parent = self._parent
        if rid not in parent:
            raise UnknownRecordError(f"unknown record id {rid!r}")
        root = rid
        while parent[root] != root:
            root = parent[root]
        while parent[rid] != root:
            parent[rid], rid = root, parent[rid]
        return root

    def deduce(self, a: str, b: str) -> Verdict:
        """What the accepted facts imply about ``(a, b)``.

        Match when both records share a representative (so also for
        ``a == b``), NonMatch when a disequality edge joins the two
        representatives, Unknown otherwise.
        """
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return Verdict.MATCH
        if rb in self._nonmatch.get(ra, ()):
            return Verdict.NONMATCH
        return Verdict.UNKNOWN

    def clusters(self) -> list[list[str]]:
        """Equivalence classes, members and classes sorted lexicographically."""
        groups: dict[str, list[str]] = {}
        for rid in self._parent:
            groups.setdefault(self.find(rid), []).append(rid)
        out = [sorted(members) for members in groups.values()]
        out.sort(key=lambda members: members[0])
        return out

    def nonmatch_edges(self) -> list[tuple[str, str]]:
        """Disequality edges as sorted pairs of cluster minima (stable ids)."""
        minimum: dict[str, str] = {}
        for rid in self._parent:
            root = self.find(rid)
            if root not in minimum or rid < minimum[root]:
                minimum[root] = rid
        edges = set()
        for root, neighbors in self._nonmatch.items():
            for other in neighbors:
                x, y = minimum[root], minimum[other]
                edges.add((x, y) if x < y else (y, x))
        return sorted(edges)

    # -- mutation -----------------------------------------------------------

    def assert_label(self, a: str, b: str, label: Label) -> bool:
        """Record a fact; returns True if accepted, False on contradiction.

        A contradicting fact leaves the graph completely unchanged.
        ``a == b`` is a no-op for Match and a contradiction for NonMatch
        (reflexivity).
        """
        ra, rb = self.find(a), self.find(b)
        if label is Label.MATCH:
            if ra == rb:
                self.assertion_count += 1
                return True
            if rb in self._nonmatch.get(ra, ()):
                return False
            self._merge(ra, rb)
        else:
            if ra == rb:
                return False
            self._nonmatch.setdefault(ra, set()).add(rb)
            self._nonmatch.setdefault(rb, set()).add(ra)
        self.assertion_count += 1
        return True

    def _merge(self, ra: str, rb: str) -> None:
        # union by size; the absorbed root's disequality edges move to the
        # surviving root so deduce stays a representative-level lookup
        if self._size[ra] < self._size[rb]:
            ra, rb = rb, ra
        self._parent[rb] = ra
        self._size[ra] += self._size.pop(rb)
        for other in self._nonmatch.pop(rb, set()):
            self._nonmatch[other].discard(rb)
            self._nonmatch[other].add(ra)
            self._nonmatch.setdefault(ra, set()).add(other)


def replay_labels(records: Iterable[str],
                  facts: Iterable[tuple[str, str, Label]]) -> ClusterGraph | None:
    """Build a graph from scratch; None if any fact contradicts the rest."""
    graph = ClusterGraph(records)
    for a, b, label in facts:
        if not graph.assert_label(a, b, label):
            return None
    return graph
