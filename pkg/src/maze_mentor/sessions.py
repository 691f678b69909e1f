"""Per-student session state machine with an append-only event log.

Every mutation first becomes an event; state transitions consume events only,
so replaying a session's log reconstructs the exact task states. One session
is single-writer; distinct sessions are independent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Iterable

from .blocks import Program, parse_program, serialize_program
from .catalog import Catalog, TaskSpec, is_solution
from .hints import recommend, render_recommendation
from .quizzes import (
    CodeQuiz,
    PlanQuiz,
    QuizError,
    QuizVerdict,
    build_code_quiz,
    grade_quiz_answer,
    plan_quiz_for,
)

GROUP_NONE = "none"
GROUP_CODE_REC = "code_rec"
GROUP_CODE_QUIZ = "code_quiz"
GROUP_PLAN_QUIZ = "plan_quiz"
GROUPS = (GROUP_NONE, GROUP_CODE_REC, GROUP_CODE_QUIZ, GROUP_PLAN_QUIZ)

LEARNING = "learning"
POST_LEARNING = "post_learning"
PHASES = (LEARNING, POST_LEARNING)

PROMPT_AFTER_FAILURES = 3

EV_PHASE_START = "phase_start"
EV_ATTEMPT = "attempt"
EV_TASK_SOLVED = "task_solved"
EV_FEEDBACK_REQUEST = "feedback_request"
EV_FEEDBACK_SHOWN = "feedback_shown"
EV_QUIZ_ANSWER = "quiz_answer"
EV_ADOPT = "adopt_recommendation"
EV_KEEP = "keep_own_code"
EV_SURVEY = "survey_response"
EV_PHASE_END = "phase_end"


class SessionError(ValueError):
    pass


class FeedbackUnavailable(SessionError):
    """The session's group or phase exposes no feedback affordance."""


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


@dataclass
class TaskState:
    task_id: str
    working_program: str = ""
    consecutive_failures: int = 0
    feedback_requests: int = 0
    prompt_shown: bool = False
    solved: bool = False
    attempts: int = 0
    time_on_task: float = 0.0
    time_on_intervention: float = 0.0

    def to_record(self) -> dict[str, Any]:
        return {
            "task_id": self.task_id,
            "working_program": self.working_program,
            "consecutive_failures": self.consecutive_failures,
            "feedback_requests": self.feedback_requests,
            "prompt_shown": self.prompt_shown,
            "solved": self.solved,
            "attempts": self.attempts,
            "time_on_task": round(self.time_on_task, 6),
            "time_on_intervention": round(self.time_on_intervention, 6),
        }


@dataclass(frozen=True)
class AttemptOutcome:
    solved: bool
    prompt_now: bool


@dataclass(frozen=True)
class SessionMetrics:
    per_task: dict[str, dict[str, Any]]
    score: int
    max_score: int
    mean_time_per_task: float
    intervention_rate: float
    total_feedback_requests: int
    total_time_on_intervention: float
    mean_intervention_seconds_per_request: float

    def to_record(self) -> dict[str, Any]:
        return {
            "per_task": self.per_task,
            "score": self.score,
            "max_score": self.max_score,
            "mean_time_per_task": round(self.mean_time_per_task, 6),
            "intervention_rate": round(self.intervention_rate, 6),
            "total_feedback_requests": self.total_feedback_requests,
            "total_time_on_intervention": round(self.total_time_on_intervention, 6),
            "mean_intervention_seconds_per_request": round(
                self.mean_intervention_seconds_per_request, 6
            ),
        }


class Session:
    """State for one student in one phase, fed exclusively by events."""

    def __init__(
        self,
        pseudonym: str,
        group: str,
        phase: str,
        catalog: Catalog,
        clock: Callable[[], str] = utc_now_iso,
        sink: Callable[[dict[str, Any]], None] | None = None,
        _replaying: bool = False,
    ):
        if group not in GROUPS:
            raise SessionError(f"unknown group {group!r}")
        if phase not in PHASES:
            raise SessionError(f"unknown phase {phase!r}")
        self.pseudonym = pseudonym
        self.group = group
        self.phase = phase
        self.catalog = catalog
        self.clock = clock
        self.sink = sink
        self.curriculum = catalog.curriculum(phase)
        self.tasks: dict[str, TaskState] = {
            t.id: TaskState(task_id=t.id) for t in self.curriculum
        }
        self.events: list[dict[str, Any]] = []
        self.ended = False
        self._last_ts = ""
        self._pending: dict[str, tuple[str, Any]] = {}
        if not _replaying:
            self._emit(
                EV_PHASE_START,
                {
                    "pseudonym": pseudonym,
                    "group": group,
                    "phase": phase,
                    "curriculum": [t.id for t in self.curriculum],
                },
            )

    # -- event plumbing ----------------------------------------------------

    def _emit(self, kind: str, payload: dict[str, Any]) -> None:
        ts = self.clock()
        if ts < self._last_ts:
            raise SessionError(f"clock went backwards: {ts} < {self._last_ts}")
        event = {"ts": ts, "session": self.pseudonym, "kind": kind, "payload": payload}
        self._apply(kind, payload)
        self.events.append(event)
        self._last_ts = ts
        if self.sink is not None:
            self.sink(event)

    def _apply(self, kind: str, payload: dict[str, Any]) -> None:
        if kind in (EV_PHASE_START, EV_TASK_SOLVED, EV_FEEDBACK_SHOWN, EV_SURVEY):
            return
        if kind == EV_PHASE_END:
            self.ended = True
            return
        state = self.tasks[payload["task_id"]]
        if kind == EV_ATTEMPT:
            state.attempts += 1
            state.working_program = payload["program"]
            state.time_on_task += payload["elapsed_s"]
            if payload["solved"]:
                if not state.solved:
                    state.solved = True
                state.consecutive_failures = 0
            else:
                state.consecutive_failures += 1
            if payload["prompt_now"]:
                state.prompt_shown = True
        elif kind == EV_FEEDBACK_REQUEST:
            state.feedback_requests += 1
        elif kind == EV_QUIZ_ANSWER:
            state.time_on_intervention += payload["elapsed_s"]
        elif kind == EV_ADOPT:
            state.time_on_intervention += payload["elapsed_s"]
            state.working_program = payload["program"]
        elif kind == EV_KEEP:
            state.time_on_intervention += payload["elapsed_s"]
        else:
            raise SessionError(f"unknown event kind {kind!r}")

    # -- operations ---------------------------------------------------------

    def _task(self, task_id: str) -> TaskSpec:
        if task_id not in self.tasks:
            raise SessionError(f"task {task_id!r} is not in this session's curriculum")
        return self.catalog[task_id]

    def _require_open(self) -> None:
        if self.ended:
            raise SessionError("the phase has ended")

    def record_attempt(
        self, task_id: str, program: Program | str, elapsed_seconds: float
    ) -> AttemptOutcome:
        self._require_open()
        task = self._task(task_id)
        if isinstance(program, str):
            program = parse_program(program)
        state = self.tasks[task_id]
        solved = is_solution(program, task)
        prompt_now = (
            not solved
            and state.consecutive_failures + 1 == PROMPT_AFTER_FAILURES
            and not state.prompt_shown
            and self.group != GROUP_NONE
            and self.phase == LEARNING
        )
        self._emit(
            EV_ATTEMPT,
            {
                "task_id": task_id,
                "program": serialize_program(program),
                "solved": solved,
                "prompt_now": prompt_now,
                "elapsed_s": float(elapsed_seconds),
            },
        )
        if solved:
            self._emit(EV_TASK_SOLVED, {"task_id": task_id})
        return AttemptOutcome(solved=solved, prompt_now=prompt_now)

    def request_feedback(self, task_id: str, current_program: Program | str) -> dict[str, Any]:
        self._require_open()
        if self.group == GROUP_NONE:
            raise FeedbackUnavailable("the control group has no feedback affordance")
        if self.phase != LEARNING:
            raise FeedbackUnavailable("feedback is only available in the learning phase")
        task = self._task(task_id)
        if isinstance(current_program, str):
            current_program = parse_program(current_program)
        state = self.tasks[task_id]
        request_index = state.feedback_requests + 1

        if self.group == GROUP_CODE_REC:
            payload, pending = self._code_rec_payload(task, current_program)
        elif self.group == GROUP_CODE_QUIZ:
            try:
                quiz = build_code_quiz(current_program, task.solution, task)
                payload = dict(quiz.payload())
                pending = ("code_quiz", quiz)
            except QuizError:
                # degrade so the session never dead-ends
                payload, pending = self._code_rec_payload(task, current_program)
                payload["degraded_from"] = "code_quiz"
        else:
            quiz = plan_quiz_for(task, request_index)
            payload = dict(quiz.payload())
            pending = ("plan_quiz", quiz)

        self._emit(EV_FEEDBACK_REQUEST, {"task_id": task_id, "request_index": request_index})
        self._emit(
            EV_FEEDBACK_SHOWN,
            {"task_id": task_id, "intervention": payload["kind"], "detail": _shown_detail(payload)},
        )
        self._pending[task_id] = pending
        return payload

    def _code_rec_payload(self, task: TaskSpec, current: Program):
        rec = recommend(current, task.solution, task.palette)
        payload = render_recommendation(rec, current)
        return payload, ("code_rec", rec.c_rec)

    def pending_intervention(self, task_id: str) -> tuple[str, Any] | None:
        return self._pending.get(task_id)

    def answer_quiz(self, task_id: str, chosen_index: int, elapsed_seconds: float) -> QuizVerdict:
        self._require_open()
        self._task(task_id)
        pending = self._pending.get(task_id)
        if pending is None or pending[0] not in ("code_quiz", "plan_quiz"):
            raise SessionError("no quiz is pending on this task")
        kind, quiz = pending
        verdict = grade_quiz_answer(quiz, chosen_index)
        payload: dict[str, Any] = {
            "task_id": task_id,
            "quiz_kind": kind,
            "chosen_index": chosen_index,
            "correct": verdict.correct,
            "elapsed_s": float(elapsed_seconds),
        }
        if isinstance(quiz, PlanQuiz):
            payload["stage"] = quiz.stage
        self._emit(EV_QUIZ_ANSWER, payload)
        if verdict.correct:
            del self._pending[task_id]
        return verdict

    def adopt_recommendation(self, task_id: str, elapsed_seconds: float) -> Program:
        self._require_open()
        self._task(task_id)
        pending = self._pending.get(task_id)
        if pending is None or pending[0] != "code_rec":
            raise SessionError("no recommendation is pending on this task")
        c_rec: Program = pending[1]
        self._emit(
            EV_ADOPT,
            {
                "task_id": task_id,
                "program": serialize_program(c_rec),
                "elapsed_s": float(elapsed_seconds),
            },
        )
        del self._pending[task_id]
        return c_rec

    def keep_own_code(self, task_id: str, elapsed_seconds: float) -> None:
        self._require_open()
        self._task(task_id)
        pending = self._pending.get(task_id)
        if pending is None or pending[0] != "code_rec":
            raise SessionError("no recommendation is pending on this task")
        self._emit(EV_KEEP, {"task_id": task_id, "elapsed_s": float(elapsed_seconds)})
        del self._pending[task_id]

    def record_survey(self, survey: str, answers: dict[str, Any]) -> None:
        self._require_open()
        if survey not in ("pre", "post"):
            raise SessionError("survey must be 'pre' or 'post'")
        self._emit(EV_SURVEY, {"survey": survey, "answers": answers})

    def end_phase(self) -> None:
        if not self.ended:
            self._emit(EV_PHASE_END, {})

    # -- metrics and digests --------------------------------------------------

    def metrics(self) -> SessionMetrics:
        per_task = {tid: st.to_record() for tid, st in self.tasks.items()}
        n = len(self.tasks)
        score = sum(1 for st in self.tasks.values() if st.solved)
        total_requests = sum(st.feedback_requests for st in self.tasks.values())
        total_intervention = sum(st.time_on_intervention for st in self.tasks.values())
        return SessionMetrics(
            per_task=per_task,
            score=score,
            max_score=n,
            mean_time_per_task=sum(st.time_on_task for st in self.tasks.values()) / n,
            intervention_rate=total_requests / n,
            total_feedback_requests=total_requests,
            total_time_on_intervention=total_intervention,
            mean_intervention_seconds_per_request=(
                total_intervention / total_requests if total_requests else 0.0
            ),
        )

    def states_digest(self) -> str:
        records = [self.tasks[t.id].to_record() for t in self.curriculum]
        return json.dumps(records, sort_keys=True, separators=(",", ":"))


def _shown_detail(payload: dict[str, Any]) -> dict[str, Any]:
    kind = payload["kind"]
    if kind == "code_rec":
        return {
            "c_rec": payload["recommended_program"]["text"],
            "via_fallback": payload["via_fallback"],
            "degraded_from": payload.get("degraded_from"),
        }
    if kind == "code_quiz":
        return {"template": payload["template"], "used_task_grid": payload["used_task_grid"]}
    return {"stage": payload["stage"]}


def replay_session(catalog: Catalog, events: Iterable[dict[str, Any]]) -> Session:
    """Rebuild a session purely from its event log."""
    events = list(events)
    if not events or events[0]["kind"] != EV_PHASE_START:
        raise SessionError("event log must start with phase_start")
    head = events[0]["payload"]
    session = Session(
        pseudonym=head["pseudonym"],
        group=head["group"],
        phase=head["phase"],
        catalog=catalog,
        _replaying=True,
    )
    last_ts = ""
    for event in events:
        ts = event["ts"]
        if ts < last_ts:
            raise SessionError("event log timestamps regress")
        last_ts = ts
        session._apply(event["kind"], event["payload"])
        session.events.append(event)
    session._last_ts = last_ts
    return session


# ---------------------------------------------------------------------------
# JSONL persistence


class EventLogWriter:
    """Append-only JSON Lines sink, one file per session."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = open(self.path, "a", encoding="utf-8")

    def __call__(self, event: dict[str, Any]) -> None:
        self._fh.write(json.dumps(event, sort_keys=True, separators=(",", ":")) + "\n")
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()


def read_event_log(path: str | Path) -> list[dict[str, Any]]:
    events = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                events.append(json.loads(line))
    return events


class SessionStore:
    """Holds live sessions; pseudonyms are unique within an active phase."""

    def __init__(self, catalog: Catalog, log_dir: str | Path | None = None):
        self.catalog = catalog
        self.log_dir = Path(log_dir) if log_dir else None
        self.sessions: list[Session] = []
        self._active: dict[tuple[str, str], Session] = {}
        self._writers: dict[int, EventLogWriter] = {}

    def create_session(
        self,
        pseudonym: str,
        group: str,
        phase: str,
        clock: Callable[[], str] = utc_now_iso,
        log_name: str | None = None,
    ) -> Session:
        key = (phase, pseudonym)
        if key in self._active and not self._active[key].ended:
            raise SessionError(f"pseudonym {pseudonym!r} already active in phase {phase!r}")
        sink = None
        if self.log_dir is not None:
            name = log_name or f"{phase}_{pseudonym}.jsonl"
            writer = EventLogWriter(self.log_dir / name)
            sink = writer
        session = Session(pseudonym, group, phase, self.catalog, clock=clock, sink=sink)
        if sink is not None:
            self._writers[id(session)] = writer
        self.sessions.append(session)
        self._active[key] = session
        return session

    def close_session(self, session: Session) -> None:
        session.end_phase()
        writer = self._writers.pop(id(session), None)
        if writer is not None:
            writer.close()
