from __future__ import annotations

import itertools

import pytest

from maze_mentor.blocks import Program, parse_program
from maze_mentor.sessions import (
    EV_FEEDBACK_REQUEST,
    GROUP_CODE_QUIZ,
    GROUP_CODE_REC,
    GROUP_NONE,
    GROUP_PLAN_QUIZ,
    LEARNING,
    POST_LEARNING,
    EventLogWriter,
    FeedbackUnavailable,
    Session,
    SessionError,
    SessionStore,
    read_event_log,
    replay_session,
)


def make_clock():
    counter = itertools.count()
    return lambda: f"2026-03-01T09:00:00.{next(counter):06d}+00:00"


@pytest.fixture
def learning_session(catalog):
    return Session("s1", GROUP_CODE_REC, LEARNING, catalog, clock=make_clock())


def test_learning_session_has_twelve_tasks(learning_session):
    assert len(learning_session.tasks) == 12


def test_post_learning_has_fifteen_tasks_and_no_feedback(catalog):
    session = Session("s1", GROUP_PLAN_QUIZ, POST_LEARNING, catalog, clock=make_clock())
    assert len(session.tasks) == 15
    with pytest.raises(FeedbackUnavailable):
        session.request_feedback("P01", Program())


def test_duplicate_pseudonym_in_active_phase_rejected(catalog, tmp_path):
    store = SessionStore(catalog, log_dir=tmp_path)
    store.create_session("dup", GROUP_NONE, LEARNING, clock=make_clock())
    with pytest.raises(SessionError, match="already active"):
        store.create_session("dup", GROUP_CODE_REC, LEARNING, clock=make_clock())
    # same pseudonym in the other phase is fine
    store.create_session("dup", GROUP_CODE_REC, POST_LEARNING, clock=make_clock())


def test_prompt_fires_exactly_on_third_consecutive_failure(learning_session):
    bad = parse_program("turn_left")
    assert not learning_session.record_attempt("T01", bad, 5).prompt_now
    assert not learning_session.record_attempt("T01", bad, 5).prompt_now
    third = learning_session.record_attempt("T01", bad, 5)
    assert third.prompt_now and not third.solved
    # fires once per task
    assert not learning_session.record_attempt("T01", bad, 5).prompt_now
    assert learning_session.tasks["T01"].prompt_shown


def test_prompt_never_fires_for_control_group(catalog):
    session = Session("n", GROUP_NONE, LEARNING, catalog, clock=make_clock())
    bad = parse_program("turn_left")
    for _ in range(4):
        outcome = session.record_attempt("T01", bad, 1)
    assert not outcome.prompt_now
    assert not session.tasks["T01"].prompt_shown


def test_prompt_not_in_post_learning(catalog):
    session = Session("p", GROUP_CODE_REC, POST_LEARNING, catalog, clock=make_clock())
    bad = parse_program("turn_left")
    for _ in range(3):
        outcome = session.record_attempt("P01", bad, 1)
    assert not outcome.prompt_now


def test_success_resets_failure_counter(catalog, learning_session):
    bad = parse_program("turn_left")
    sol = catalog["T01"].solution
    learning_session.record_attempt("T01", bad, 1)
    learning_session.record_attempt("T01", bad, 1)
    outcome = learning_session.record_attempt("T01", sol, 1)
    assert outcome.solved
    state = learning_session.tasks["T01"]
    assert state.solved and state.consecutive_failures == 0
    # solved stays true on later failed attempts
    learning_session.record_attempt("T01", bad, 1)
    assert state.solved


def test_feedback_request_does_not_reset_counter(catalog, learning_session):
    bad = parse_program("turn_left")
    learning_session.record_attempt("T02", bad, 1)
    learning_session.record_attempt("T02", bad, 1)
    learning_session.request_feedback("T02", bad)
    outcome = learning_session.record_attempt("T02", bad, 1)
    assert outcome.prompt_now  # the third failure still triggers


def test_control_group_has_no_feedback(catalog):
    session = Session("n", GROUP_NONE, LEARNING, catalog, clock=make_clock())
    with pytest.raises(FeedbackUnavailable):
        session.request_feedback("T01", Program())
    assert not any(e["kind"] == EV_FEEDBACK_REQUEST for e in session.events)


def test_code_rec_adopt_and_keep(catalog, learning_session):
    bad = parse_program("move")
    payload = learning_session.request_feedback("T02", bad)
    assert payload["kind"] == "code_rec"
    adopted = learning_session.adopt_recommendation("T02", 4.5)
    state = learning_session.tasks["T02"]
    assert state.working_program == adopted.text
    assert state.time_on_intervention == pytest.approx(4.5)
    # keep leaves the working program unchanged
    learning_session.record_attempt("T02", bad, 1.0)
    learning_session.request_feedback("T02", bad)
    learning_session.keep_own_code("T02", 2.0)
    assert learning_session.tasks["T02"].working_program == bad.text
    assert state.time_on_intervention == pytest.approx(6.5)


def test_plan_quiz_dispatch_by_request_index(catalog):
    session = Session("p", GROUP_PLAN_QUIZ, LEARNING, catalog, clock=make_clock())
    first = session.request_feedback("T05", Program())
    assert first["kind"] == "plan_quiz" and first["stage"] == "planning"
    second = session.request_feedback("T05", Program())
    assert second["stage"] == "solution_finding"


def test_code_quiz_dispatch_and_grading(catalog):
    session = Session("q", GROUP_CODE_QUIZ, LEARNING, catalog, clock=make_clock())
    payload = session.request_feedback("T02", parse_program("move"))
    assert payload["kind"] in ("code_quiz", "code_rec")
    if payload["kind"] == "code_quiz":
        pending = session.pending_intervention("T02")
        quiz = pending[1]
        wrong = next(i for i in range(3) if i != quiz.correct_index)
        verdict = session.answer_quiz("T02", wrong, 3.0)
        assert not verdict.correct and verdict.feedback
        verdict = session.answer_quiz("T02", quiz.correct_index, 2.0)
        assert verdict.correct
        assert session.tasks["T02"].time_on_intervention == pytest.approx(5.0)


def test_answer_quiz_without_pending_errors(catalog, learning_session):
    with pytest.raises(SessionError):
        learning_session.answer_quiz("T01", 0, 1.0)


def test_metrics_aggregates(catalog):
    session = Session("m", GROUP_CODE_REC, LEARNING, catalog, clock=make_clock())
    for task in catalog.learning:
        session.record_attempt(task.id, task.solution, 10.0)
    metrics = session.metrics()
    assert metrics.score == 12 and metrics.max_score == 12
    assert metrics.intervention_rate == 0.0
    assert metrics.mean_time_per_task == pytest.approx(10.0)


def test_metrics_empty_session(catalog):
    session = Session("e", GROUP_NONE, LEARNING, catalog, clock=make_clock())
    metrics = session.metrics()
    assert metrics.score == 0 and metrics.intervention_rate == 0.0


def test_intervention_rate_eleven_over_twelve(catalog):
    session = Session("r", GROUP_PLAN_QUIZ, LEARNING, catalog, clock=make_clock())
    bad = parse_program("turn_left")
    requests = 0
    for task in catalog.learning:
        session.record_attempt(task.id, bad, 1.0)
        if requests < 11:
            session.request_feedback(task.id, bad)
            requests += 1
    metrics = session.metrics()
    assert metrics.total_feedback_requests == 11
    assert metrics.intervention_rate == pytest.approx(11 / 12)


def test_unknown_task_and_ended_phase(catalog, learning_session):
    with pytest.raises(SessionError):
        learning_session.record_attempt("P01", Program(), 1.0)
    learning_session.end_phase()
    with pytest.raises(SessionError, match="ended"):
        learning_session.record_attempt("T01", Program(), 1.0)


def test_timestamps_must_not_regress(catalog):
    times = iter(["2026-01-01T00:00:02+00:00", "2026-01-01T00:00:01+00:00"])
    session = Session("t", GROUP_NONE, LEARNING, catalog, clock=lambda: next(times))
    with pytest.raises(SessionError, match="backwards"):
        session.record_attempt("T01", Program(), 1.0)


def test_survey_events_recorded(catalog, learning_session):
    learning_session.record_survey("pre", {"interest": 4, "skill": 2})
    event = learning_session.events[-1]
    assert event["kind"] == "survey_response"
    assert event["payload"]["answers"]["interest"] == 4
    with pytest.raises(SessionError):
        learning_session.record_survey("mid", {})


def test_replay_reconstructs_states(catalog):
    session = Session("rp", GROUP_CODE_REC, LEARNING, catalog, clock=make_clock())
    bad = parse_program("move")
    session.record_attempt("T02", bad, 2.0)
    session.record_attempt("T02", bad, 2.0)
    session.request_feedback("T02", bad)
    session.adopt_recommendation("T02", 1.5)
    session.record_attempt("T02", catalog["T02"].solution, 3.0)
    session.end_phase()
    replayed = replay_session(catalog, session.events)
    assert replayed.states_digest() == session.states_digest()
    assert replayed.ended


def test_event_log_file_round_trip(catalog, tmp_path):
    store = SessionStore(catalog, log_dir=tmp_path)
    session = store.create_session("fileio", GROUP_PLAN_QUIZ, LEARNING, clock=make_clock())
    session.record_attempt("T01", parse_program("move"), 1.0)
    session.request_feedback("T01", parse_program("move"))
    pending = session.pending_intervention("T01")
    session.answer_quiz("T01", pending[1].correct_index, 2.0)
    store.close_session(session)
    events = read_event_log(tmp_path / "learning_fileio.jsonl")
    assert events[0]["kind"] == "phase_start"
    assert events[-1]["kind"] == "phase_end"
    replayed = replay_session(catalog, events)
    assert replayed.states_digest() == session.states_digest()
