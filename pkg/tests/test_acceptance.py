"""Acceptance suite: one test per release criterion, one pass line each.

Run with `pytest tests/test_acceptance.py -s` to see the pass lines live.
Budgets are asserted with wall-clock checks.
"""

from __future__ import annotations

import json
import random
import time
from pathlib import Path

import pytest

from maze_mentor.blocks import BASIC_KINDS, Program
from maze_mentor.catalog import (
    DUPLICATE_PAIRS,
    EXPECTED_CONCEPTS,
    bundled_catalog,
    is_solution,
    load_task_catalog,
)
from maze_mentor.grid import execute
from maze_mentor.hints import recommend
from maze_mentor.quizzes import QuizError, build_code_quiz, place_blank
from maze_mentor.sessions import (
    GROUPS,
    LEARNING,
    PHASES,
    FeedbackUnavailable,
    Session,
    SessionError,
    replay_session,
)
from maze_mentor.simulate import simulate_study
from maze_mentor.analyze import analyze
from maze_mentor.stats import (
    ALPHA_HIGH,
    ALPHA_LOW,
    cohens_d,
    kruskal_wallis,
    mann_whitney_u,
    shapiro_wilk,
)
from maze_mentor.tree_metrics import ted

from .conftest import inverse_corrupt, random_program
from .oracles import brute_ted, exact_mwu_two_sided, naive_blank_leaf

TASKS_DIR = Path(__file__).resolve().parents[1] / "src" / "maze_mentor" / "data" / "tasks"


def _announce(name: str, detail: str = "") -> None:
    suffix = f" ({detail})" if detail else ""
    print(f"\nACCEPTANCE PASS: {name}{suffix}")


def test_ted_matches_brute_force_oracle():
    """ted equals minimum edit-script cost on >= 10,000 pairs of small trees."""
    start = time.time()
    rng = random.Random(20260809)
    family: dict[str, Program] = {"": Program()}
    while len(family) < 105:
        p = random_program(rng, max_depth=3, max_size=6)
        if p.node_count() <= 6:
            family.setdefault(p.text, p)
    programs = list(family.values())
    pairs = 0
    for a in programs:
        for b in programs:
            assert ted(a, b) == brute_ted(a, b), (a.text, b.text)
            pairs += 1
    elapsed = time.time() - start
    assert pairs >= 10_000
    assert elapsed < 120, f"TED oracle took {elapsed:.1f}s"
    _announce("TED oracle", f"{pairs} pairs exact in {elapsed:.1f}s")


def test_catalog_integrity():
    """All 27 tasks load, solve, and satisfy the category and twin rules."""
    start = time.time()
    catalog = load_task_catalog(TASKS_DIR)  # loader re-runs every constraint
    assert len(catalog) == 27
    for task in catalog.tasks:
        assert is_solution(task.solution, task), task.id
        assert task.concepts == EXPECTED_CONCEPTS[task.id]
    for dup, original in DUPLICATE_PAIRS.items():
        assert catalog[dup].grid == catalog[original].grid
        assert catalog[dup].solution == catalog[original].solution
    elapsed = time.time() - start
    assert elapsed < 10, f"catalog check took {elapsed:.1f}s"
    _announce("Catalog integrity", f"27 tasks in {elapsed:.1f}s")


@pytest.mark.slow
def test_hint_convergence():
    """200 corruptions per learning task all reach the solution in <= 10
    rounds with strictly decreasing distance."""
    start = time.time()
    catalog = bundled_catalog()
    converged = 0
    for task in catalog.learning:
        rng = random.Random(f"acceptance-{task.id}")
        for _ in range(200):
            attempt = inverse_corrupt(task.solution, task.palette, rng.randint(1, 3), rng)
            current = attempt
            distance = ted(current, task.solution)
            rounds = 0
            while current != task.solution:
                rounds += 1
                assert rounds <= 10, (task.id, attempt.text)
                rec = recommend(current, task.solution, task.palette)
                assert rec.distance_to_solution == 0 or rec.distance_to_solution < distance, (
                    task.id,
                    attempt.text,
                )
                current, distance = rec.c_rec, rec.distance_to_solution
            converged += 1
    elapsed = time.time() - start
    assert converged == 12 * 200
    assert elapsed < 300, f"hint convergence took {elapsed:.1f}s"
    _announce("Hint convergence", f"{converged}/2400 in {elapsed:.1f}s")


def test_quiz_discriminativity():
    """Every generated code quiz has exactly one succeeding option."""
    start = time.time()
    catalog = bundled_catalog()
    quizzes = 0
    violations = 0
    for task in catalog.learning:
        rng = random.Random(f"quiz-{task.id}")
        for _ in range(50):
            attempt = inverse_corrupt(task.solution, task.palette, rng.randint(0, 3), rng)
            try:
                quiz = build_code_quiz(attempt, task.solution, task)
            except QuizError:
                continue  # no basic action to blank yet; session degrades instead
            quizzes += 1
            outcomes = [
                execute(quiz.blanked.fill(action), quiz.grid, 250).succeeded
                for action in BASIC_KINDS
            ]
            if outcomes.count(True) != 1:
                violations += 1
            if not outcomes[quiz.correct_index]:
                violations += 1
    elapsed = time.time() - start
    assert violations == 0
    assert quizzes >= 300, f"only {quizzes} quizzes generated"
    _announce("Quiz discriminativity", f"{quizzes} quizzes, 0 violations, {elapsed:.1f}s")


def test_blank_placement_rule():
    """place_blank equals the naive full-leaf-scan oracle on 1000 programs."""
    rng = random.Random(424242)
    checked = 0
    while checked < 1000:
        p = random_program(rng, max_depth=4, max_size=14)
        expected = naive_blank_leaf(p)
        if expected is None:
            continue
        blank = place_blank(p)
        assert (blank.blank_path, blank.correct_action) == expected, p.text
        checked += 1
    _announce("Blank placement rule", "1000 programs exact")


def test_statistics_oracles():
    """Exact enumerations, hand-computed H, effect-size properties, and the
    published Shapiro-Wilk example all agree."""
    rng = random.Random(6)
    # Mann-Whitney exact for every size pair up to 6x6
    for na in range(1, 7):
        for nb in range(1, 7):
            for _ in range(4):
                values = rng.sample(range(100_000), na + nb)
                a, b = values[:na], values[na:]
                mine = mann_whitney_u(a, b)
                u_ref, p_ref = exact_mwu_two_sided(a, b)
                assert abs(mine.statistic - u_ref) < 1e-9
                assert abs(mine.p_value - p_ref) < 1e-9

    kw = kruskal_wallis([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    assert abs(kw.statistic - 7.2) < 1e-9

    d_ab = cohens_d([5.0, 7.0, 9.0], [1.0, 2.0, 3.0]).statistic
    assert abs(d_ab + cohens_d([1.0, 2.0, 3.0], [5.0, 7.0, 9.0]).statistic) < 1e-12
    shifted = cohens_d([x + 4 for x in (5.0, 7.0, 9.0)], [x + 4 for x in (1.0, 2.0, 3.0)])
    scaled = cohens_d([x * 2 for x in (5.0, 7.0, 9.0)], [x * 2 for x in (1.0, 2.0, 3.0)])
    assert abs(shifted.statistic - d_ab) < 1e-12
    assert abs(scaled.statistic - d_ab) < 1e-12

    sw = shapiro_wilk([148, 154, 158, 160, 161, 162, 166, 170, 182, 195, 236])
    assert abs(sw.statistic - 0.7888) < 1e-3

    # flags flip exactly at 0.05/3 and 0.01/3
    assert ALPHA_LOW == 0.05 / 3 and ALPHA_HIGH == 0.01 / 3
    from maze_mentor.stats import _result

    eps = 1e-12
    assert _result("t", 0.0, ALPHA_LOW - eps).significant_0166
    assert not _result("t", 0.0, ALPHA_LOW).significant_0166
    assert _result("t", 0.0, ALPHA_HIGH - eps).significant_0033
    assert not _result("t", 0.0, ALPHA_HIGH).significant_0033
    _announce("Statistics oracles", "MWU/KW/d/SW within tolerance")


@pytest.fixture(scope="module")
def study_report():
    start = time.time()
    dataset = simulate_study()  # documented default config, fixed seed, 100/group
    report = analyze(dataset)
    report["_elapsed"] = time.time() - start
    return report


@pytest.mark.slow
def test_ordinal_study_reproduction(study_report):
    """The simulated study reproduces the published ordinal patterns."""
    elapsed = study_report["_elapsed"]
    assert elapsed < 600, f"simulation+analysis took {elapsed:.1f}s"

    overall = study_report["learning_success"]["overall_l"]
    means = {g: overall["per_group"][g]["mean"] for g in GROUPS}
    for group in ("code_rec", "code_quiz", "plan_quiz"):
        pairwise = overall["vs_baseline"][group]
        assert means[group] > means["none"], group
        assert pairwise["significant_0166"], group
    assert means["code_rec"] == max(means.values())

    time_l = study_report["learning_time"]["time_l"]
    assert time_l["per_group"]["code_rec"]["mean"] < time_l["per_group"]["none"]["mean"]
    assert time_l["vs_baseline"]["code_rec"]["significant_0166"]

    post = study_report["post_success"]["overall_pl"]
    assert post["omnibus"]["p_value"] >= 0.05
    for group in ("code_rec", "code_quiz", "plan_quiz"):
        assert not post["vs_baseline"][group]["significant_0166"], group

    new_pl = study_report["post_success"]["new_pl"]["per_group"]
    assert new_pl["code_quiz"]["mean"] > new_pl["none"]["mean"]
    assert new_pl["plan_quiz"]["mean"] > new_pl["none"]["mean"]
    _announce(
        "Ordinal study reproduction",
        f"learning {means['none']:.0f}->{means['code_rec']:.0f}, "
        f"post omnibus p={post['omnibus']['p_value']:.3f}, {elapsed:.0f}s",
    )


def _fuzz_session(catalog, seed: int) -> Session:
    rng = random.Random(seed)
    group = rng.choice(GROUPS)
    phase = rng.choice(PHASES)
    counter = iter(range(10_000_000))
    clock = lambda: f"2026-04-01T00:00:00.{next(counter):07d}"[:33] + "+00:00"

    def fmt():
        return f"2026-04-01T00:00:{next(counter) % 60:02d}.000000+00:00"

    session = Session(f"fuzz{seed}", group, phase, catalog, clock=clock)
    task_ids = [t.id for t in session.curriculum]
    for _ in range(rng.randint(3, 16)):
        op = rng.random()
        task_id = rng.choice(task_ids)
        task = catalog[task_id]
        try:
            if op < 0.55:
                if rng.random() < 0.25:
                    program = task.solution
                else:
                    program = random_program(rng, max_depth=2, max_size=5)
                session.record_attempt(task_id, program, rng.uniform(0.5, 60.0))
            elif op < 0.75:
                session.request_feedback(task_id, random_program(rng, max_depth=2, max_size=4))
            elif op < 0.85:
                pending = session.pending_intervention(task_id)
                if pending and pending[0] in ("code_quiz", "plan_quiz"):
                    quiz = pending[1]
                    session.answer_quiz(
                        task_id, rng.randrange(len(quiz.options)), rng.uniform(0.5, 30.0)
                    )
            elif op < 0.92:
                pending = session.pending_intervention(task_id)
                if pending and pending[0] == "code_rec":
                    if rng.random() < 0.5:
                        session.adopt_recommendation(task_id, rng.uniform(0.5, 10.0))
                    else:
                        session.keep_own_code(task_id, rng.uniform(0.5, 10.0))
            else:
                session.record_survey(rng.choice(["pre", "post"]), {"interest": rng.randint(1, 5)})
        except (FeedbackUnavailable, SessionError, QuizError):
            continue
    if rng.random() < 0.5:
        session.end_phase()
    return session


def test_event_sourcing_round_trip():
    """Replaying 1000 fuzzed session logs reproduces task states exactly."""
    start = time.time()
    catalog = bundled_catalog()
    for seed in range(1000):
        live = _fuzz_session(catalog, seed)
        replayed = replay_session(catalog, json.loads(json.dumps(live.events)))
        assert replayed.states_digest() == live.states_digest(), seed
        assert replayed.ended == live.ended
    elapsed = time.time() - start
    _announce("Event-sourcing round trip", f"1000 sessions byte-identical, {elapsed:.1f}s")
