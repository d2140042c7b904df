"""HTTP session server for interactive model simulation.

The protocol is stateless for the client: every response carries a full
snapshot (current node, variable values, per-trigger permitted flags), so the
browser UI never re-implements any semantics.  Sessions are in-memory with
idle-timeout eviction.  See docs/wire-protocol.md for the frozen schema.
"""

from __future__ import annotations

import os
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from . import analyzer, interpreter
from .model import Diagram, MachineState, trigger_set
from .parser import ParseFailure, format_value, parse_diagram

DEFAULT_TTL_SECONDS = 3600.0


class CreateSessionRequest(BaseModel):
    source: str
    name: str | None = None


class FireRequest(BaseModel):
    trigger: str


@dataclass
class Session:
    id: str
    diagram: Diagram
    state: MachineState
    history: list[tuple[str, MachineState]] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_used: float = field(default_factory=time.monotonic)


def _diag_json(d) -> dict:
    return {"severity": d.severity, "message": d.message,
            "line": d.line, "col": d.col}


def snapshot(session: Session, idled: bool = False) -> dict:
    d = session.diagram
    s = session.state
    return {
        "session_id": session.id,
        "model": d.name,
        "nodes": list(d.nodes),
        "initial": d.initial,
        "curr": s.curr,
        "prev": s.prev,
        "variables": [
            {"name": v.name, "type": v.type.value,
             "value": format_value(s.valuation[v.name])}
            for v in d.variables
        ],
        "triggers": [
            {"name": t, "permitted": interpreter.permitted(d, s, t)}
            for t in trigger_set(d)
        ],
        "idled": idled,
        "step_count": len(session.history),
    }


class SessionStore:
    def __init__(self, ttl: float = DEFAULT_TTL_SECONDS):
        self.ttl = ttl
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def _evict_idle(self) -> None:
        now = time.monotonic()
        stale = [k for k, s in self._sessions.items()
                 if now - s.last_used > self.ttl]
        for k in stale:
            del self._sessions[k]

    def create(self, diagram: Diagram) -> Session:
        session = Session(uuid.uuid4().hex, diagram, interpreter.init(diagram))
        with self._lock:
            self._evict_idle()
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            self._evict_idle()
            session = self._sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404,
                                detail=f"unknown session {session_id!r}")
        session.last_used = time.monotonic()
        return session

    def delete(self, session_id: str) -> None:
        with self._lock:
            if session_id not in self._sessions:
                raise HTTPException(status_code=404,
                                    detail=f"unknown session {session_id!r}")
            del self._sessions[session_id]


def _ui_directory() -> Path | None:
    env = os.environ.get("EMUC_UI_DIR")
    if env:
        p = Path(env)
        return p if p.is_dir() else None
    repo_dist = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    return repo_dist if repo_dist.is_dir() else None


def create_app(default_model_source: str | None = None,
               default_model_name: str | None = None,
               ttl: float = DEFAULT_TTL_SECONDS) -> FastAPI:
    app = FastAPI(title="emuc simulator", version="0.1.0")
    store = SessionStore(ttl=ttl)

    @app.post("/api/sessions", status_code=201)
    def create_session(req: CreateSessionRequest):
        try:
            diagram = parse_diagram(req.source)
        except ParseFailure as exc:
            return JSONResponse(
                status_code=422,
                content={"diagnostics": [_diag_json(x) for x in exc.diagnostics]})
        diags = analyzer.check(diagram)
        errors = [x for x in diags if x.severity == "error"]
        if errors:
            return JSONResponse(
                status_code=422,
                content={"diagnostics": [_diag_json(x) for x in errors]})
        typed = analyzer.resolve(diagram)
        session = store.create(typed)
        return snapshot(session)

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str):
        session = store.get(session_id)
        with session.lock:
            body = snapshot(session)
            body["history"] = [
                {"trigger": t, "trace": interpreter.format_state(session.diagram, s)}
                for t, s in session.history
            ]
        return body

    @app.delete("/api/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        store.delete(session_id)
        return Response(status_code=204)

    @app.post("/api/sessions/{session_id}/fire")
    def fire(session_id: str, req: FireRequest):
        session = store.get(session_id)
        with session.lock:
            d = session.diagram
            if req.trigger not in trigger_set(d):
                raise HTTPException(status_code=400,
                                    detail=f"unknown trigger {req.trigger!r}")
            try:
                new_state = interpreter.step(d, session.state, req.trigger)
            except interpreter.EvalError as exc:
                raise HTTPException(status_code=409,
                                    detail=f"evaluation trap: {exc}") from exc
            idled = new_state == session.state
            session.state = new_state
            session.history.append((req.trigger, new_state))
            return snapshot(session, idled=idled)

    @app.post("/api/sessions/{session_id}/reset")
    def reset(session_id: str):
        session = store.get(session_id)
        with session.lock:
            session.state = interpreter.init(session.diagram)
            session.history.clear()
            return snapshot(session)

    @app.get("/api/sessions/{session_id}/replay")
    def replay(session_id: str):
        """Debug check: the stored state must equal the fold over history."""
        session = store.get(session_id)
        with session.lock:
            state = interpreter.init(session.diagram)
            for trigger, _ in session.history:
                state = interpreter.step(session.diagram, state, trigger)
            return {"consistent": state == session.state}

    @app.get("/api/default-model")
    def default_model():
        if default_model_source is None:
            raise HTTPException(status_code=404, detail="no default model")
        return {"name": default_model_name or "model",
                "source": default_model_source}

    ui_dir = _ui_directory()
    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
