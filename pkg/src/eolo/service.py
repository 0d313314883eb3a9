"""HTTP/JSON API for interactive labeling sessions.

Sessions live in memory, keyed by unguessable ids; mutations on one
session are serialized by a per-session lock.  Every payload is a pure
function of the session's instance and trace, so state survives a
rebuild-from-trace bit for bit.  With ``persist_dir`` set, sessions are
written to disk on shutdown and replayed on the next startup.
"""

from __future__ import annotations

import json
import threading
import uuid
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from fastapi import Body, FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .demo import BUNDLED
from .ingestion import FormatError, instance_payload, parse_instance_payload
from .model import CapExceededError, Instance, Label
from .simulator import Session, rebuild_session, trace_from_payload, trace_payload
from .strategies import StrategySpec, make_order, parse_strategy


@dataclass
class _Entry:
    session: Session
    strategy: str
    seed: int | None
    lock: threading.Lock = field(default_factory=threading.Lock)


def _error(status: int, reason: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status,
                        content={"reason": reason, "detail": detail})


def create_app(static_dir: str | None = None,
               persist_dir: str | None = None,
               preloaded: dict[str, Instance] | None = None) -> FastAPI:
    """Build the session service; see README for the endpoint contract."""
    instances = dict(BUNDLED if preloaded is None else preloaded)
    sessions: dict[str, _Entry] = {}
    store = Path(persist_dir) / "sessions.json" if persist_dir else None

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        if store is not None and store.exists():
            _load_sessions(store, sessions)
        yield
        if store is not None:
            store.parent.mkdir(parents=True, exist_ok=True)
            store.write_text(json.dumps(
                {sid: _persist_payload(entry) for sid, entry in sessions.items()},
                sort_keys=True))

    app = FastAPI(title="eolo session service", lifespan=lifespan)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"],
        allow_methods=["*"], allow_headers=["*"],
    )

    def get_entry(session_id: str) -> _Entry:
        entry = sessions.get(session_id)
        if entry is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return entry

    @app.post("/sessions", status_code=201)
    def create_session(payload: dict = Body(...)):
        unknown = set(payload) - {"instance", "strategy", "seed"}
        if unknown:
            raise HTTPException(400, f"unknown field {sorted(unknown)[0]!r}")
        if "instance" not in payload or "strategy" not in payload:
            raise HTTPException(400, "need 'instance' and 'strategy'")
        seed = payload.get("seed")
        if seed is not None and not isinstance(seed, int):
            raise HTTPException(400, "seed: must be an integer")

        raw = payload["instance"]
        if isinstance(raw, str):
            if raw not in instances:
                raise HTTPException(
                    400, f"unknown instance {raw!r}; "
                    f"preloaded: {sorted(instances)}")
            inst = instances[raw]
        else:
            try:
                inst = parse_instance_payload(raw)
            except FormatError as exc:
                raise HTTPException(400, f"instance: {exc}") from None

        spec = _parse_spec(payload["strategy"], seed, payload)
        try:
            order = make_order(inst, spec)
        except CapExceededError as exc:
            raise HTTPException(422, str(exc)) from None
        except ValueError as exc:
            raise HTTPException(400, str(exc)) from None

        session = Session(inst, order)
        session.next_question()
        sid = uuid.uuid4().hex
        sessions[sid] = _Entry(session=session, strategy=spec.canonical(),
                               seed=seed)
        return {
            "id": sid,
            "m": inst.m,
            "strategy": spec.canonical(),
            "order": list(order),
            "next": _next_payload(session),
        }

    @app.get("/sessions/{session_id}/next")
    def next_question(session_id: str):
        entry = get_entry(session_id)
        with entry.lock:
            entry.session.next_question()
            return _next_payload(entry.session)

    @app.post("/sessions/{session_id}/answer")
    def answer(session_id: str, payload: dict = Body(...)):
        entry = get_entry(session_id)
        if set(payload) != {"pair", "label"}:
            raise HTTPException(400, "answer body is {'pair': [a, b], 'label': ...}")
        raw_pair = payload["pair"]
        if (not isinstance(raw_pair, list) or len(raw_pair) != 2
                or not all(isinstance(x, str) for x in raw_pair)):
            raise HTTPException(400, "pair: must be a list of two record ids")
        try:
            label = Label(payload["label"])
        except ValueError:
            raise HTTPException(
                400, f"label: must be 'match' or 'nonmatch', "
                f"got {payload['label']!r}") from None

        with entry.lock:
            session = entry.session
            step = session.next_question()
            if step.done:
                return _error(409, "out_of_turn", "session is done")
            pending = session.instance.pairs[step.pair_index]
            if set(raw_pair) != {pending.a, pending.b}:
                return _error(
                    409, "out_of_turn",
                    f"pending question is [{pending.a}, {pending.b}]")
            if not session.answer(step.pair_index, label):
                return _error(
                    409, "contradiction",
                    "that label contradicts previously asserted labels")
            session.next_question()
            return {
                "accepted": True,
                "asked": session.asked_count,
                "deduced": session.deduced_count,
                "clusters": session.clusters(),
                "deduced_since_last": trace_payload(
                    session.instance, session.deduced_since_last_answer()),
                "next": _next_payload(session),
            }

    @app.get("/sessions/{session_id}/state")
    def state(session_id: str):
        entry = get_entry(session_id)
        with entry.lock:
            session = entry.session
            return {
                "m": session.instance.m,
                "cursor": session.cursor,
                "done": session.done,
                "asked": session.asked_count,
                "deduced": session.deduced_count,
                "clusters": session.clusters(),
                "nonmatch_edges": [list(edge)
                                   for edge in session.graph.nonmatch_edges()],
                "trace": trace_payload(session.instance, session.trace),
            }

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=static_dir, html=True),
                  name="webui")

    app.state.sessions = sessions
    return app


def _parse_spec(text: Any, seed: int | None, payload: dict) -> StrategySpec:
    if not isinstance(text, str):
        raise HTTPException(400, "strategy: must be a string")
    if text == "random" and seed is not None:
        return StrategySpec(kind="random", seed=seed)
    try:
        spec = parse_strategy(text)
    except ValueError as exc:
        raise HTTPException(400, str(exc)) from None
    if spec.kind == "explicit":
        raise HTTPException(
            400, "explicit orders are not supported over the API; "
            "use desc, asc, random:SEED, optimal or worst")
    return spec


def _next_payload(session: Session) -> dict:
    deduced = trace_payload(session.instance,
                            session.deduced_since_last_answer())
    base = {
        "asked": session.asked_count,
        "deduced": session.deduced_count,
        "deduced_since_last": deduced,
    }
    if session.done:
        base["status"] = "done"
        base["summary"] = {
            "m": session.instance.m,
            "asked": session.asked_count,
            "deduced": session.deduced_count,
            "clusters": session.clusters(),
        }
        return base
    k = session.order[session.cursor]
    pair = session.instance.pairs[k]
    base["status"] = "needs_label"
    base["pair"] = {"index": k, "a": pair.a, "b": pair.b, "p": pair.p}
    return base


def _persist_payload(entry: _Entry) -> dict:
    session = entry.session
    return {
        "instance": instance_payload(session.instance),
        "order": list(session.order),
        "strategy": entry.strategy,
        "seed": entry.seed,
        "trace": trace_payload(session.instance, session.trace),
    }


def _load_sessions(store: Path, sessions: dict[str, _Entry]) -> None:
    data = json.loads(store.read_text())
    for sid, doc in data.items():
        inst = parse_instance_payload(doc["instance"])
        trace = trace_from_payload(inst, doc["trace"])
        session = rebuild_session(inst, doc["order"], trace)
        sessions[sid] = _Entry(session=session, strategy=doc["strategy"],
                               seed=doc.get("seed"))
