"""HTTP service exposing sessions, attempts, feedback, and metrics.

State lives in per-session append-only event logs; restarting the service
replays every log in the log directory, restoring all live sessions.
"""

from __future__ import annotations

import os
import uuid
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Header, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .blocks import ParseError, parse_program, program_to_wire
from .catalog import Catalog, bundled_catalog, load_task_catalog, validate_program
from .grid import execute
from .sessions import (
    GROUPS,
    LEARNING,
    POST_LEARNING,
    FeedbackUnavailable,
    Session,
    SessionError,
    SessionStore,
    read_event_log,
    replay_session,
)

_GROUP_ALIASES = {
    "none": "none",
    "coderec": "code_rec",
    "code_rec": "code_rec",
    "code-rec": "code_rec",
    "codequiz": "code_quiz",
    "code_quiz": "code_quiz",
    "code-quiz": "code_quiz",
    "planquiz": "plan_quiz",
    "plan_quiz": "plan_quiz",
    "plan-quiz": "plan_quiz",
}
_PHASE_ALIASES = {
    "learning": LEARNING,
    "post_learning": POST_LEARNING,
    "postlearning": POST_LEARNING,
    "post-learning": POST_LEARNING,
}


def normalize_group(raw: str) -> str:
    group = _GROUP_ALIASES.get(raw.strip().lower())
    if group is None:
        raise HTTPException(400, f"unknown group {raw!r}; one of {sorted(set(_GROUP_ALIASES.values()))}")
    return group


def normalize_phase(raw: str) -> str:
    phase = _PHASE_ALIASES.get(raw.strip().lower())
    if phase is None:
        raise HTTPException(400, f"unknown phase {raw!r}; 'learning' or 'post_learning'")
    return phase


class CreateSessionBody(BaseModel):
    group: str
    phase: str
    pseudonym: str | None = None


class AttemptBody(BaseModel):
    program: str
    elapsed_s: float = 0.0


class FeedbackBody(BaseModel):
    program: str


class QuizAnswerBody(BaseModel):
    choice: int
    elapsed_s: float = 0.0


class AdoptBody(BaseModel):
    accept: bool = True
    elapsed_s: float = 0.0


def _task_summary(session: Session, task_id: str) -> dict[str, Any]:
    task = session.catalog[task_id]
    state = session.tasks[task_id]
    return {
        "id": task.id,
        "solved": state.solved,
        "attempts": state.attempts,
        "feedback_requests": state.feedback_requests,
        "prompt_shown": state.prompt_shown,
    }


def _task_detail(session: Session, task_id: str) -> dict[str, Any]:
    task = session.catalog[task_id]
    state = session.tasks[task_id]
    return {
        "id": task.id,
        "grid": {"rows": task.grid.render_rows(), "start_dir": task.grid.start.direction},
        "palette": sorted(task.palette),
        "block_limit": task.block_limit,
        "concepts": list(task.concepts),
        "difficulty": task.difficulty,
        "working_program": state.working_program,
        "solved": state.solved,
        "feedback_available": session.group != "none" and session.phase == LEARNING,
    }


def create_app(
    catalog: Catalog | None = None,
    log_dir: str | Path | None = None,
) -> FastAPI:
    catalog = catalog or _catalog_from_env()
    log_dir = Path(log_dir or os.environ.get("MM_LOG_DIR", "logs"))
    store = SessionStore(catalog, log_dir=log_dir)
    app = FastAPI(title="maze-mentor gateway")
    # the workbench is served as static files from another origin
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    sessions: dict[str, Session] = {}
    seen_keys: dict[str, set[str]] = {}

    # restore live sessions from previous runs
    if log_dir.is_dir():
        for path in sorted(log_dir.glob("*.jsonl")):
            try:
                events = read_event_log(path)
                session = replay_session(catalog, events)
            except (SessionError, ValueError, KeyError):
                continue
            token = path.stem
            sessions[token] = session
            if not session.ended:
                # reattach the log so new events keep appending
                from .sessions import EventLogWriter

                session.sink = EventLogWriter(path)

    def get_session(token: str) -> Session:
        session = sessions.get(token)
        if session is None:
            raise HTTPException(404, "unknown session token")
        return session

    def check_idempotency(token: str, key: str | None) -> None:
        if key is None:
            return
        used = seen_keys.setdefault(token, set())
        if key in used:
            raise HTTPException(409, f"idempotency key {key!r} already used")
        used.add(key)

    def parse_or_400(text: str):
        try:
            return parse_program(text)
        except ParseError as err:
            raise HTTPException(400, str(err))

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody) -> dict[str, Any]:
        group = normalize_group(body.group)
        phase = normalize_phase(body.phase)
        token = uuid.uuid4().hex
        pseudonym = body.pseudonym or f"s_{token[:8]}"
        try:
            session = store.create_session(pseudonym, group, phase, log_name=f"{token}.jsonl")
        except SessionError as err:
            raise HTTPException(409, str(err))
        sessions[token] = session
        return {
            "token": token,
            "pseudonym": pseudonym,
            "group": group,
            "phase": phase,
            "curriculum": [t.id for t in session.curriculum],
        }

    @app.get("/sessions/{token}/tasks")
    def list_tasks(token: str) -> list[dict[str, Any]]:
        session = get_session(token)
        return [_task_summary(session, t.id) for t in session.curriculum]

    @app.get("/sessions/{token}/tasks/{task_id}")
    def task_detail(token: str, task_id: str) -> dict[str, Any]:
        session = get_session(token)
        if task_id not in session.tasks:
            raise HTTPException(404, f"task {task_id!r} not in curriculum")
        return _task_detail(session, task_id)

    @app.post("/sessions/{token}/tasks/{task_id}/attempts")
    def attempt(
        token: str,
        task_id: str,
        body: AttemptBody,
        idempotency_key: str | None = Header(default=None),
    ) -> dict[str, Any]:
        session = get_session(token)
        check_idempotency(token, idempotency_key)
        program = parse_or_400(body.program)
        task = session.catalog[task_id] if task_id in session.tasks else None
        if task is None:
            raise HTTPException(404, f"task {task_id!r} not in curriculum")
        try:
            outcome = session.record_attempt(task_id, program, body.elapsed_s)
        except SessionError as err:
            raise HTTPException(409, str(err))
        report = validate_program(program, task)
        run = execute(program, task.grid)
        return {
            "solved": outcome.solved,
            "prompt_now": outcome.prompt_now,
            "outcome": run.outcome,
            "steps": run.steps,
            "trace": [{"action": action, "pose": list(pose)} for action, pose in run.trace],
            "validation": [
                {"kind": v.kind, "message": v.message} for v in report.violations
            ],
        }

    @app.post("/sessions/{token}/tasks/{task_id}/feedback")
    def feedback(
        token: str,
        task_id: str,
        body: FeedbackBody,
        idempotency_key: str | None = Header(default=None),
    ) -> dict[str, Any]:
        session = get_session(token)
        check_idempotency(token, idempotency_key)
        program = parse_or_400(body.program)
        try:
            return session.request_feedback(task_id, program)
        except FeedbackUnavailable as err:
            raise HTTPException(409, str(err))
        except SessionError as err:
            raise HTTPException(404, str(err))

    @app.post("/sessions/{token}/tasks/{task_id}/quiz-answers")
    def quiz_answer(
        token: str,
        task_id: str,
        body: QuizAnswerBody,
        idempotency_key: str | None = Header(default=None),
    ) -> dict[str, Any]:
        session = get_session(token)
        check_idempotency(token, idempotency_key)
        try:
            verdict = session.answer_quiz(task_id, body.choice, body.elapsed_s)
        except IndexError as err:
            raise HTTPException(400, str(err))
        except SessionError as err:
            raise HTTPException(409, str(err))
        return {"correct": verdict.correct, "feedback": verdict.feedback}

    @app.post("/sessions/{token}/tasks/{task_id}/adopt")
    def adopt(
        token: str,
        task_id: str,
        body: AdoptBody,
        idempotency_key: str | None = Header(default=None),
    ) -> dict[str, Any]:
        session = get_session(token)
        check_idempotency(token, idempotency_key)
        try:
            if body.accept:
                program = session.adopt_recommendation(task_id, body.elapsed_s)
                return {
                    "adopted": True,
                    "program": program.text,
                    "program_ast": program_to_wire(program),
                }
            session.keep_own_code(task_id, body.elapsed_s)
            return {"adopted": False}
        except SessionError as err:
            raise HTTPException(409, str(err))

    @app.get("/sessions/{token}/metrics")
    def metrics(token: str) -> dict[str, Any]:
        session = get_session(token)
        return session.metrics().to_record()

    return app


def _catalog_from_env() -> Catalog:
    path = os.environ.get("MM_CATALOG")
    if path:
        return load_task_catalog(path)
    return bundled_catalog()


def serve(port: int | None = None, catalog_path: str | None = None, log_dir: str | None = None) -> None:
    """Run the gateway with uvicorn (blocking)."""
    import uvicorn

    catalog = load_task_catalog(catalog_path) if catalog_path else _catalog_from_env()
    app = create_app(catalog=catalog, log_dir=log_dir)
    port = port or int(os.environ.get("MM_PORT", "8000"))
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="warning")
