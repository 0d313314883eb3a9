"""Labeling sessions: replay a fixed order, asking only what deduction
cannot answer.

A session walks its order and asks the crowd (or a human, or a truth
world in batch mode) for every pair whose label is not yet derivable.
Deduced pairs are surfaced explicitly rather than silently skipped, so
callers can show where transitivity saved a question.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .deduction import ClusterGraph, Verdict, verdict_to_label
from .model import EoloError, Instance, Label, Outcome, check_order
from .worlds import World, is_consistent_world

# A trace pairs each processed pair index with its outcome, in
# processing order.
TraceEntry = tuple[int, Outcome]


class OutOfTurnError(EoloError):
    """An answer arrived for a pair that is not the pending question."""


@dataclass(frozen=True)
class Step:
    """What advancing a session produced.

    ``deduced`` lists the outcomes recorded by this call (pairs the
    graph resolved for free); ``pair_index`` is the pending question, or
    None once every pair is processed.
    """

    deduced: tuple[TraceEntry, ...]
    pair_index: int | None

    @property
    def done(self) -> bool:
        return self.pair_index is None


class Session:
    """Single-writer labeling session over one instance and order.

    Append-only: there is no undo; rebuild from a trace prefix instead.
    ``truth`` is set in batch mode and absent for interactive sessions.
    """

    def __init__(self, inst: Instance, order: Sequence[int],
                 truth: World | None = None):
        self.instance = inst
        self.order = check_order(inst, order)
        if truth is not None and len(truth) != inst.m:
            raise ValueError("truth must label every pair of the instance")
        self.truth = truth
        self.graph = ClusterGraph(inst.records)
        self.cursor = 0
        self.trace: list[TraceEntry] = []

    @property
    def asked_count(self) -> int:
        return sum(1 for _k, o in self.trace if o.kind == Outcome.ASKED)

    @property
    def deduced_count(self) -> int:
        return sum(1 for _k, o in self.trace if o.kind == Outcome.DEDUCED)

    @property
    def done(self) -> bool:
        return self.cursor == self.instance.m

    def next_question(self) -> Step:
        """Advance past every deducible pair and report the pending one.

        Idempotent once advanced: calling again without answering
        returns the same pending pair and records nothing new.
        """
        new: list[TraceEntry] = []
        while self.cursor < self.instance.m:
            k = self.order[self.cursor]
            pair = self.instance.pairs[k]
            verdict = self.graph.deduce(pair.a, pair.b)
            if verdict is Verdict.UNKNOWN:
                return Step(tuple(new), k)
            label = verdict_to_label(verdict)
            if self.truth is not None and self.truth[k] is not label:
                raise EoloError(
                    f"inconsistent truth: pair {k} is deducibly "
                    f"{label.value} but the truth says {self.truth[k].value}")
            entry = (k, Outcome.deduced(label))
            self.trace.append(entry)
            new.append(entry)
            self.cursor += 1
        return Step(tuple(new), None)

    def answer(self, pair_index: int, label: Label) -> bool:
        """Apply a crowd answer to the pending pair.

        Returns True when accepted; False when the label contradicts the
        graph (state unchanged).  Raises :class:`OutOfTurnError` when
        ``pair_index`` is not the pending question, including pairs
        whose label is already deducible.
        """
        step = self.next_question()
        if step.done:
            raise OutOfTurnError("session is done; nothing left to answer")
        if pair_index != step.pair_index:
            raise OutOfTurnError(
                f"pair {pair_index} is not the pending question "
                f"(expected pair {step.pair_index})")
        pair = self.instance.pairs[pair_index]
        if not self.graph.assert_label(pair.a, pair.b, label):
            return False
        self.trace.append((pair_index, Outcome.asked(label)))
        self.cursor += 1
        return True

    def deduced_since_last_answer(self) -> list[TraceEntry]:
        """Trailing deduced entries of the trace (what the last answer,
        or session start, unlocked for free)."""
        tail: list[TraceEntry] = []
        for entry in reversed(self.trace):
            if entry[1].kind == Outcome.ASKED:
                break
            tail.append(entry)
        tail.reverse()
        return tail

    def clusters(self) -> list[list[str]]:
        return self.graph.clusters()


@dataclass(frozen=True)
class BatchResult:
    asked: int
    deduced: int
    trace: tuple[TraceEntry, ...]
    clusters: tuple[tuple[str, ...], ...]


def run_batch(inst: Instance, order: Sequence[int], truth: World) -> BatchResult:
    """Replay a full session against a consistent ground-truth world."""
    if not is_consistent_world(inst, truth):
        raise EoloError("truth world violates transitivity")
    session = Session(inst, order, truth=truth)
    while True:
        step = session.next_question()
        if step.done:
            break
        accepted = session.answer(step.pair_index, truth[step.pair_index])
        assert accepted, "a consistent truth cannot contradict the graph"
    return BatchResult(
        asked=session.asked_count,
        deduced=session.deduced_count,
        trace=tuple(session.trace),
        clusters=tuple(tuple(c) for c in session.clusters()),
    )


def rebuild_session(inst: Instance, order: Sequence[int],
                    trace: Iterable[TraceEntry]) -> Session:
    """Reconstruct a session by replaying a trace's asked answers.

    Deduced entries are re-derived and checked against the trace, so a
    tampered or mismatched trace fails loudly.
    """
    session = Session(inst, order)
    for k, outcome in trace:
        if outcome.kind == Outcome.DEDUCED:
            continue
        step = session.next_question()
        if step.pair_index != k:
            raise EoloError(
                f"trace replays pair {k} but pair {step.pair_index} is pending")
        if not session.answer(k, outcome.label):
            raise EoloError(f"trace answer for pair {k} contradicts the graph")
    session.next_question()
    return session


# -- trace wire format ------------------------------------------------------

def trace_entry_payload(inst: Instance, entry: TraceEntry) -> dict:
    """One trace entry as its wire object (pair ids, outcome, label)."""
    k, outcome = entry
    pair = inst.pairs[k]
    return {"pair": [pair.a, pair.b], "outcome": outcome.kind,
            "label": outcome.label.value}


def trace_payload(inst: Instance, trace: Iterable[TraceEntry]) -> list[dict]:
    return [trace_entry_payload(inst, entry) for entry in trace]


def trace_to_jsonl(inst: Instance, trace: Iterable[TraceEntry]) -> str:
    """JSON lines, one object per outcome, in processing order."""
    lines = [json.dumps(trace_entry_payload(inst, entry))
             for entry in trace]
    return "".join(line + "\n" for line in lines)


def trace_from_payload(inst: Instance, entries: Iterable[dict]) -> list[TraceEntry]:
    """Inverse of :func:`trace_payload`; validates pair ids and labels."""
    index = inst.pair_index()
    out: list[TraceEntry] = []
    for obj in entries:
        a, b = obj["pair"]
        key = (a, b) if a < b else (b, a)
        if key not in index:
            raise EoloError(f"trace mentions unknown pair {obj['pair']!r}")
        kind = obj["outcome"]
        if kind not in (Outcome.ASKED, Outcome.DEDUCED):
            raise EoloError(f"bad outcome {kind!r} in trace")
        out.append((index[key], Outcome(kind, Label(obj["label"]))))
    return out
