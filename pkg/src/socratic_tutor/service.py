"""HTTP facade over scenarios, sessions, surveys, and analytics.

Stateless above the store plus an in-memory session registry: any session
can be reloaded from its transcript after a restart, so no request depends
on server-side state that persistence does not capture. Every error body is
``{"code": ..., "message": ...}`` with a stable code.

Tutor replies can stream: POST a message with ``Accept: text/event-stream``
and the reply arrives as ``token`` events followed by one final ``turn``
event carrying the same JSON a plain POST would have returned.
"""

from __future__ import annotations

import json
import threading
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, StreamingResponse
from pydantic import BaseModel

from . import dialogue, scenario
from .analytics import (
    OpenFeedback,
    SurveyResponse,
    annotate_themes,
    build_theme_graph,
    summarize,
)
from .errors import (
    CorruptRecord,
    EmptyDataset,
    ExtractionFailed,
    IncompleteSelection,
    MissingKey,
    NoJsonFound,
    ProviderError,
    SessionEnded,
    TutorError,
    UnknownSession,
)
from .provider import Provider
from .scenario import WH_TYPES, ScenarioSpec, static_candidates
from .store import Store

_SPEC_FIELDS = set(ScenarioSpec.__dataclass_fields__)


class ScenarioCreateBody(BaseModel):
    mode: str
    selections: Optional[dict] = None
    free_text: Optional[str] = None
    overrides: Optional[dict] = None


class TreeExpandBody(BaseModel):
    level: str
    selections: Optional[dict] = None


class SessionCreateBody(BaseModel):
    scenario_id: str
    kc_index: int
    wh_type: str
    expected_answer: Optional[str] = None


class MessageBody(BaseModel):
    text: str


class SurveyBody(BaseModel):
    participant_id: str
    q1: int
    q2: int
    q3: int
    q4: int
    q5: int
    q6: int
    q7: int
    q8: int
    q9: int
    q10: int
    q11: str = ""
    q12: str = ""


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def _turn_json(turn: dialogue.Turn) -> dict:
    doc = turn.to_record()
    doc.pop("record", None)
    return doc


def create_app(store: Store, provider: Provider, max_turns: int = 30) -> FastAPI:
    app = FastAPI(title="socratic-tutor")
    app.state.store = store
    app.state.provider = provider
    app.state.max_turns = max_turns
    app.state.sessions: dict[str, dialogue.DialogueSession] = {}
    app.state.session_locks: dict[str, threading.Lock] = {}
    registry_lock = threading.Lock()

    def session_lock(session_id: str) -> threading.Lock:
        with registry_lock:
            return app.state.session_locks.setdefault(session_id, threading.Lock())

    def get_session(session_id: str) -> dialogue.DialogueSession:
        with registry_lock:
            session = app.state.sessions.get(session_id)
        if session is None:
            session = store.load_session(session_id)
            with registry_lock:
                session = app.state.sessions.setdefault(session_id, session)
        return session

    # -- error mapping ----------------------------------------------------

    handlers = [
        (IncompleteSelection, 400, "IncompleteSelection"),
        (SessionEnded, 409, "SessionEnded"),
        (UnknownSession, 404, "NotFound"),
        (EmptyDataset, 404, "EmptyDataset"),
        (NoJsonFound, 502, "NoJsonFound"),
        (MissingKey, 502, "ExtractionFailed"),
        (ExtractionFailed, 502, "ExtractionFailed"),
        (ProviderError, 502, "ProviderError"),
        (CorruptRecord, 500, "CorruptRecord"),
        (TutorError, 500, "Internal"),
    ]
    for cls, status, code in handlers:

        def handler(request: Request, exc: Exception, status=status, code=code):
            return _error(status, code, str(exc))

        app.add_exception_handler(cls, handler)

    @app.exception_handler(RequestValidationError)
    def invalid_body(request: Request, exc: RequestValidationError):
        return _error(400, "InvalidBody", str(exc))

    # -- scenarios --------------------------------------------------------

    @app.post("/scenarios")
    def create_scenario(body: ScenarioCreateBody):
        overrides = {
            k: v for k, v in (body.overrides or {}).items() if k in _SPEC_FIELDS
        }
        if body.mode == "tree":
            spec = scenario.build_from_tree(body.selections or {}, overrides)
        elif body.mode == "text":
            if not (body.free_text or "").strip():
                return _error(400, "InvalidBody", "free_text is required for mode 'text'")
            spec = scenario.build_from_text(body.free_text, provider, overrides)
        else:
            return _error(400, "InvalidBody", "mode must be 'tree' or 'text'")
        scenario_id = store.save_scenario(spec)
        return {"id": scenario_id, "spec": spec.to_json_dict()}

    @app.post("/tree/expand")
    def tree_expand(body: TreeExpandBody):
        if body.level not in scenario.TREE_LEVELS:
            return _error(400, "InvalidBody", f"unknown level {body.level!r}")
        parents = body.selections or {}
        static = static_candidates(body.level, parents)
        if static:
            return {"level": body.level, "options": list(static), "source": "static"}
        tree = scenario.expand_tree_level(
            scenario.CategoryTree.default(), body.level, parents, provider
        )
        return {"level": body.level, "options": list(tree.options_at(body.level)), "source": "generated"}

    @app.get("/scenarios")
    def list_scenarios():
        rows = []
        for record in store.list_scenarios():
            rows.append(
                {
                    "id": record.id,
                    "created_at": record.created_at,
                    "theKC": record.spec.theKC,
                    "theDomain": record.spec.theDomain,
                    "theType": record.spec.theType.value,
                    "kc_count": len(record.kcs),
                    "has_matrix": record.matrix is not None,
                }
            )
        return {"scenarios": rows}

    @app.get("/scenarios/{scenario_id}")
    def get_scenario(scenario_id: str):
        record = store.load_scenario(scenario_id)
        doc = {
            "id": record.id,
            "created_at": record.created_at,
            "spec": record.spec.to_json_dict(),
            "kcs": [kc.to_json_dict() for kc in record.kcs],
        }
        if record.matrix is not None:
            doc["matrix"] = record.matrix.to_json_dict()
        return doc

    @app.post("/scenarios/{scenario_id}/kcs")
    def make_kcs(scenario_id: str):
        record = store.load_scenario(scenario_id)
        result = scenario.generate_kcs(record.spec, provider)
        store.update_scenario(scenario_id, kcs=result.kcs)
        return {
            "kcs": [kc.to_json_dict() for kc in result.kcs],
            "warnings": list(result.warnings),
        }

    @app.post("/scenarios/{scenario_id}/matrix")
    def make_matrix(scenario_id: str):
        record = store.load_scenario(scenario_id)
        if not record.kcs:
            return _error(409, "NoKcs", "generate knowledge components first")
        matrix = scenario.generate_matrix(record.spec, record.kcs, provider)
        store.update_scenario(scenario_id, matrix=matrix)
        return matrix.to_json_dict()

    # -- sessions ---------------------------------------------------------

    @app.post("/sessions")
    def create_session(body: SessionCreateBody):
        record = store.load_scenario(body.scenario_id)
        if not record.kcs:
            return _error(409, "NoKcs", "generate knowledge components first")
        if not 0 <= body.kc_index < len(record.kcs):
            return _error(
                400, "OutOfRange", f"kc_index must be in [0, {len(record.kcs) - 1}]"
            )
        if body.wh_type not in WH_TYPES:
            return _error(400, "InvalidBody", f"wh_type must be one of {list(WH_TYPES)}")
        opening = ""
        if record.matrix is not None:
            opening = record.matrix.question(body.kc_index, body.wh_type) or ""
        session = dialogue.start_session(
            record.spec,
            record.kcs[body.kc_index],
            body.wh_type,
            opening,
            provider,
            config=dialogue.SessionConfig(
                max_turns=app.state.max_turns, expected_answer=body.expected_answer
            ),
        )
        store.create_session(session)
        store.append_turn(session.id, session.turns[0], session.state_log[-1])
        with registry_lock:
            app.state.sessions[session.id] = session
        return {"session_id": session.id, "opening_turn": _turn_json(session.turns[0])}

    @app.post("/sessions/{session_id}/messages")
    def post_message(session_id: str, body: MessageBody, request: Request):
        session = get_session(session_id)
        lock = session_lock(session_id)
        if not lock.acquire(blocking=False):
            return _error(409, "Busy", "another message for this session is in flight")
        try:
            learner_turn, tutor_turn = dialogue.submit_response(
                session, body.text, provider
            )
            store.append_turn(session_id, learner_turn, session.state_log[-2])
            store.append_turn(session_id, tutor_turn, session.state_log[-1])
            if session.state.status is dialogue.SessionStatus.ENDED:
                store.append_end(session_id, session.summary or "")
        finally:
            lock.release()

        payload = {
            "learner_turn": _turn_json(learner_turn),
            "tutor_turn": _turn_json(tutor_turn),
        }
        if "text/event-stream" in request.headers.get("accept", ""):

            def events():
                words = tutor_turn.text.split(" ")
                for start in range(0, len(words), 5):
                    chunk = " ".join(words[start : start + 5])
                    yield f"event: token\ndata: {json.dumps({'text': chunk})}\n\n"
                yield f"event: turn\ndata: {json.dumps(payload)}\n\n"

            return StreamingResponse(events(), media_type="text/event-stream")
        return payload

    @app.post("/sessions/{session_id}/end")
    def end_session(session_id: str):
        session = get_session(session_id)
        summary = dialogue.end_session(session, provider)
        store.append_end(session_id, summary)
        return {"summary": summary}

    @app.get("/sessions/{session_id}")
    def get_session_view(session_id: str):
        session = get_session(session_id)
        return {
            "session_id": session.id,
            "status": session.state.status.value,
            "summary": session.summary,
            "spec": session.spec.to_json_dict(),
            "kc": session.kc.to_json_dict(),
            "wh_entry": {"wh": session.wh_entry.wh, "question": session.wh_entry.question},
            "config": {
                "max_turns": session.config.max_turns,
                "expected_answer": session.config.expected_answer,
                "policy_id": session.config.policy_id,
            },
            "state": session.state.to_json_dict(),
            "turns": [_turn_json(t) for t in session.turns],
        }

    # -- surveys and analytics -------------------------------------------

    @app.post("/surveys")
    def post_survey(body: SurveyBody):
        try:
            response = SurveyResponse(
                participant_id=body.participant_id,
                q1=body.q1, q2=body.q2, q3=body.q3, q4=body.q4, q5=body.q5,
                q6=body.q6, q7=body.q7, q8=body.q8, q9=body.q9, q10=body.q10,
                q11=body.q11, q12=body.q12,
            )
        except ValueError as exc:
            return _error(400, "OutOfRange", str(exc))
        return {"id": store.save_survey(response)}

    @app.get("/analytics/likert")
    def likert():
        return summarize(store.load_surveys()).to_json_dict()

    @app.get("/analytics/themes")
    def themes():
        responses = store.load_surveys()
        if not responses:
            raise EmptyDataset("no survey responses stored")
        entries = []
        for response in responses:
            entries.append(OpenFeedback(response.response_id, "q11", response.q11))
            entries.append(OpenFeedback(response.response_id, "q12", response.q12))
        graph = build_theme_graph(annotate_themes(entries, provider))
        return graph.to_node_link()

    return app
