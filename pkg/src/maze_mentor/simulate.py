"""Synthetic-student simulation of the two-phase study.

Students are parametric: per-concept skill drives first-try success, failed
attempts corrupt the solution with geometric-length random edit sequences,
and intervention effects differ mechanically by group. Recommendation
adoption advances the working program without teaching much; correct quiz
engagement deepens concept knowledge, which later transfers to novel
concept combinations. Everything is deterministic under a fixed seed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from .blocks import Program
from .catalog import (
    COMMON_L_IDS,
    COMMON_PL_IDS,
    EASY_L_IDS,
    EASY_PL_IDS,
    NEW_PL_IDS,
    Catalog,
    TaskSpec,
    bundled_catalog,
)
from .sessions import (
    GROUPS,
    GROUP_NONE,
    LEARNING,
    POST_LEARNING,
    EventLogWriter,
    Session,
    SessionMetrics,
)
from .tree_metrics import _all_sequence_variants

# components a novel concept combination draws on
COMBO_COMPONENTS = {
    "repeat_then_repeat_until": ("repeat", "repeat_until"),
    "repeat_in_repeat": ("repeat",),
    "if_in_repeat": ("repeat", "repeat_until_if"),
}


class SimClock:
    """Deterministic session clock; the simulator advances it explicitly."""

    def __init__(self, start: str = "2026-02-02T08:00:00+00:00"):
        self.now = datetime.fromisoformat(start).astimezone(timezone.utc)

    def advance(self, seconds: float) -> None:
        self.now += timedelta(seconds=float(seconds))

    def __call__(self) -> str:
        return self.now.isoformat(timespec="microseconds")


@dataclass
class StudentProfile:
    skills: dict[str, float]
    depth: dict[str, float]
    corruption_rate: float
    feedback_seek_propensity: float
    adopt_recommendation_prob: float
    quiz_learning_gain: float
    seed: int


def default_config() -> dict[str, Any]:
    path = resources.files("maze_mentor") / "data" / "study_default.json"
    return json.loads(path.read_text(encoding="utf-8"))


def load_config(path: str | Path | None) -> dict[str, Any]:
    if path is None:
        return default_config()
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def sample_profile(config: dict[str, Any], rng: np.random.Generator, seed: int) -> StudentProfile:
    p = config["profile"]
    skills = {}
    for concept, mean in p["concept_skill_means"].items():
        skills[concept] = float(np.clip(rng.normal(mean, p["concept_skill_sd"]), 0.01, 0.99))
    return StudentProfile(
        skills=skills,
        depth={c: 0.0 for c in skills},
        corruption_rate=float(p["corruption_rate"]),
        feedback_seek_propensity=float(
            np.clip(rng.normal(p["feedback_seek_propensity"], p["propensity_sd"]), 0.05, 0.98)
        ),
        adopt_recommendation_prob=float(p["adopt_recommendation_prob"]),
        quiz_learning_gain=float(p["quiz_learning_gain"]),
        seed=seed,
    )


def _random_neighbor(program: Program, palette: frozenset[str], rng: np.random.Generator) -> Program:
    """One random structural edit (reservoir sample over the raw variants)."""
    chosen = None
    count = 0
    for blocks in _all_sequence_variants(program.blocks, palette):
        count += 1
        if rng.integers(0, count) == 0:
            chosen = blocks
    if chosen is None:
        return program
    return Program(chosen)


def corrupt_program(
    solution: Program,
    palette: frozenset[str],
    k: int,
    rng: np.random.Generator,
    task: TaskSpec | None = None,
) -> Program:
    """Apply k random edits; with a task given, retry until the result fails.

    A student who does not know the solution should not stumble into one, so
    corruptions that happen to solve the task are redrawn a few times.
    """
    from .catalog import is_solution

    for _ in range(8):
        program = solution
        for _ in range(k):
            program = _random_neighbor(program, palette, rng)
        if program == solution:
            continue
        if task is None or not is_solution(program, task):
            return program
    return Program()


class StudentRunner:
    """Drives one synthetic student through one session."""

    def __init__(
        self,
        profile: StudentProfile,
        config: dict[str, Any],
        group: str,
    ):
        self.profile = profile
        self.config = config
        self.group = group
        self.rng = np.random.default_rng(profile.seed)
        self.p = config["profile"]
        self.timing = config["timing"]

    # -- skill model --------------------------------------------------------

    def effective_skill(self, task: TaskSpec, task_bonus: float) -> float:
        concept = task.concepts[0]
        skills = self.profile.skills
        depth = self.profile.depth
        base = skills.get(concept, 0.0)
        if concept in COMBO_COMPONENTS:
            comps = COMBO_COMPONENTS[concept]
            skill_part = sum(skills.get(c, 0.0) for c in comps) / len(comps)
            depth_part = sum(depth.get(c, 0.0) for c in comps) / len(comps)
            base = (
                base
                + self.p["transfer_skill_weight"] * skill_part
                + self.p["transfer_depth_weight"] * depth_part
            )
        return float(np.clip(base + task_bonus, 0.02, 0.98))

    def _gain(self, concept: str, amount: float) -> None:
        skills = self.profile.skills
        skills[concept] = float(np.clip(skills.get(concept, 0.0) + amount, 0.0, 0.99))

    def _deepen(self, concept: str, amount: float) -> None:
        depth = self.profile.depth
        depth[concept] = float(np.clip(depth.get(concept, 0.0) + amount, 0.0, 1.0))

    # -- timing -------------------------------------------------------------

    def attempt_seconds(self, task: TaskSpec, quick: bool) -> float:
        mean = (
            self.timing["attempt_seconds_easy"]
            if task.difficulty in ("Easy_L", "Easy_PL")
            else self.timing["attempt_seconds_hard"]
        )
        if quick:
            mean *= self.timing["adopted_attempt_factor"]
        sigma = self.timing["attempt_sigma"]
        return float(self.rng.lognormal(np.log(mean) - sigma**2 / 2, sigma))

    def intervention_seconds(self, kind: str, retry: bool = False) -> float:
        mean = self.timing["intervention_seconds"][kind]
        if retry:
            mean *= 0.5
        sigma = self.timing["intervention_sigma"]
        return float(self.rng.lognormal(np.log(mean) - sigma**2 / 2, sigma))

    # -- driving ------------------------------------------------------------

    def run_phase(self, session: Session, clock: SimClock) -> SessionMetrics:
        for task in session.curriculum:
            self._run_task(session, task, clock)
        session.end_phase()
        return session.metrics()

    def _run_task(self, session: Session, task: TaskSpec, clock: SimClock) -> None:
        rng = self.rng
        max_attempts = int(self.config["max_attempts"])
        task_bonus = 0.0
        adopted: Program | None = None
        prompted = False
        assisted = False
        last_attempt: Program = Program()

        for _ in range(max_attempts):
            quick = adopted is not None
            if adopted is not None:
                attempt = adopted
                adopted = None
            elif rng.random() < self.effective_skill(task, task_bonus):
                attempt = task.solution
            else:
                k = int(min(rng.geometric(1.0 / max(self.profile.corruption_rate, 1.0)), 3))
                attempt = corrupt_program(task.solution, task.palette, k, rng, task)
            elapsed = self.attempt_seconds(task, quick)
            clock.advance(elapsed)
            outcome = session.record_attempt(task.id, attempt, elapsed)
            last_attempt = attempt
            if outcome.prompt_now:
                prompted = True
            if outcome.solved:
                # solving with help teaches noticeably less than earning it
                concept = task.concepts[0]
                gain = self.p["assisted_practice_gain"] if assisted else self.p["practice_gain"]
                self._gain(concept, gain)
                for comp in COMBO_COMPONENTS.get(concept, ()):
                    self._gain(comp, gain / 2)
                return
            if session.group == GROUP_NONE or session.phase != LEARNING:
                continue
            seek_p = self.profile.feedback_seek_propensity * (
                self.p["prompt_boost"] if prompted else 1.0
            )
            if rng.random() >= min(seek_p, 1.0):
                continue
            payload = session.request_feedback(task.id, last_attempt)
            assisted = True
            adopted, bonus = self._engage_intervention(session, task, payload, clock)
            task_bonus += bonus

    def _engage_intervention(
        self, session: Session, task: TaskSpec, payload: dict[str, Any], clock: SimClock
    ) -> tuple[Program | None, float]:
        """Returns (program to submit next, task-local skill bonus earned)."""
        rng = self.rng
        kind = payload["kind"]
        if kind == "code_rec":
            elapsed = self.intervention_seconds("code_rec")
            clock.advance(elapsed)
            if rng.random() < self.profile.adopt_recommendation_prob:
                program = session.adopt_recommendation(task.id, elapsed)
                return program, self.p["adopt_task_bonus"]
            session.keep_own_code(task.id, elapsed)
            return None, 0.0

        concept = task.concepts[0]
        correct_p = float(
            np.clip(
                self.p["quiz_correct_base"]
                + self.p["quiz_correct_skill_weight"] * self.profile.skills.get(concept, 0.0),
                0.05,
                0.98,
            )
        )
        n_options = len(payload["options"])
        time_kind = "code_quiz" if kind == "code_quiz" else "plan_quiz"
        for retry in range(int(self.p["max_quiz_tries"])):
            elapsed = self.intervention_seconds(time_kind, retry=retry > 0)
            clock.advance(elapsed)
            pending = session.pending_intervention(task.id)
            assert pending is not None
            quiz = pending[1]
            if rng.random() < correct_p:
                chosen = quiz.correct_index
            else:
                chosen = int(rng.integers(0, n_options))
            verdict = session.answer_quiz(task.id, chosen, elapsed)
            if verdict.correct:
                self._gain(concept, self.profile.quiz_learning_gain)
                self._deepen(concept, self.p["quiz_depth_gain"])
                bonus = self.p["quiz_task_bonus"]
                if kind == "plan_quiz" and payload.get("stage") == "solution_finding":
                    bonus *= self.p["solution_quiz_bonus_factor"]
                return None, bonus
            correct_p = min(0.95, correct_p + 0.25)  # feedback text narrows the choice
        return None, 0.0


# ---------------------------------------------------------------------------
# Study runner and dataset


@dataclass(frozen=True)
class StudentRecord:
    pseudonym: str
    group: str
    learning: dict[str, Any]
    post_learning: dict[str, Any]
    slices: dict[str, float]

    def to_record(self) -> dict[str, Any]:
        return {
            "pseudonym": self.pseudonym,
            "group": self.group,
            "learning": self.learning,
            "post_learning": self.post_learning,
            "slices": self.slices,
        }


@dataclass(frozen=True)
class StudyDataset:
    groups: dict[str, list[StudentRecord]]
    seed: int

    def to_record(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "groups": {g: [s.to_record() for s in studs] for g, studs in self.groups.items()},
        }


def _percent_solved(metrics: SessionMetrics, ids: frozenset[str] | set[str]) -> float:
    hits = [metrics.per_task[tid]["solved"] for tid in metrics.per_task if tid in ids]
    return 100.0 * sum(hits) / len(hits) if hits else 0.0


def student_slices(learning: SessionMetrics, post: SessionMetrics) -> dict[str, float]:
    learning_ids = set(learning.per_task)
    post_ids = set(post.per_task)
    slices = {
        "overall_l": 100.0 * learning.score / learning.max_score,
        "easy_l": _percent_solved(learning, EASY_L_IDS),
        "hard_l": _percent_solved(learning, learning_ids - EASY_L_IDS),
        "common_l": _percent_solved(learning, COMMON_L_IDS),
        "time_l": learning.mean_time_per_task,
        "intervention_rate": learning.intervention_rate,
        "intervention_time": learning.mean_intervention_seconds_per_request,
        "overall_pl": 100.0 * post.score / post.max_score,
        "easy_pl": _percent_solved(post, EASY_PL_IDS),
        "hard_pl": _percent_solved(post, post_ids - EASY_PL_IDS),
        "common_pl": _percent_solved(post, COMMON_PL_IDS),
        "new_pl": _percent_solved(post, NEW_PL_IDS),
        "p12": _percent_solved(post, {"P12"}),
        "p13": _percent_solved(post, {"P13"}),
        "p14": _percent_solved(post, {"P14"}),
    }
    return {k: round(v, 6) for k, v in slices.items()}


def simulate_student(
    profile: StudentProfile,
    group: str,
    catalog: Catalog,
    config: dict[str, Any],
    log_dir: Path | None = None,
) -> StudentRecord:
    """Run one student through both phases; skills persist across phases."""
    pseudonym = f"{group}_{profile.seed % 10_000_000:07d}"
    clock = SimClock()
    records = {}
    for phase in (LEARNING, POST_LEARNING):
        sink = None
        writer = None
        if log_dir is not None:
            writer = EventLogWriter(log_dir / f"{pseudonym}_{phase}.jsonl")
            sink = writer
        session = Session(pseudonym, group, phase, catalog, clock=clock, sink=sink)
        runner = StudentRunner(profile, config, group)
        metrics = runner.run_phase(session, clock)
        records[phase] = metrics
        if writer is not None:
            writer.close()
        clock.advance(7 * 24 * 3600)  # phases happen a week apart
    return StudentRecord(
        pseudonym=pseudonym,
        group=group,
        learning=records[LEARNING].to_record(),
        post_learning=records[POST_LEARNING].to_record(),
        slices=student_slices(records[LEARNING], records[POST_LEARNING]),
    )


def simulate_study(
    config: dict[str, Any] | None = None,
    seed: int | None = None,
    catalog: Catalog | None = None,
    log_dir: str | Path | None = None,
) -> StudyDataset:
    """Simulate every group; (config, seed) fully determine the dataset."""
    config = config or default_config()
    catalog = catalog or bundled_catalog()
    seed = config["seed"] if seed is None else seed
    out_dir = Path(log_dir) if log_dir is not None else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    n = int(config["students_per_group"])
    groups: dict[str, list[StudentRecord]] = {}
    for gi, group in enumerate(GROUPS):
        students = []
        for si in range(n):
            child_seed = np.random.SeedSequence([seed, gi, si]).generate_state(1)[0]
            rng = np.random.default_rng(child_seed)
            profile = sample_profile(config, rng, int(child_seed))
            students.append(simulate_student(profile, group, catalog, config, out_dir))
        groups[group] = students
    return StudyDataset(groups=groups, seed=seed)


def dataset_from_logs(log_dir: str | Path, catalog: Catalog | None = None) -> StudyDataset:
    """Rebuild the dataset by replaying every session log in a directory."""
    from .sessions import read_event_log, replay_session

    catalog = catalog or bundled_catalog()
    by_student: dict[str, dict[str, SessionMetrics]] = {}
    group_of: dict[str, str] = {}
    for path in sorted(Path(log_dir).glob("*.jsonl")):
        events = read_event_log(path)
        session = replay_session(catalog, events)
        by_student.setdefault(session.pseudonym, {})[session.phase] = session.metrics()
        group_of[session.pseudonym] = session.group
    groups: dict[str, list[StudentRecord]] = {g: [] for g in GROUPS}
    for pseudonym in sorted(by_student):
        phases = by_student[pseudonym]
        if LEARNING not in phases or POST_LEARNING not in phases:
            raise ValueError(f"student {pseudonym} lacks one of the two phase logs")
        record = StudentRecord(
            pseudonym=pseudonym,
            group=group_of[pseudonym],
            learning=phases[LEARNING].to_record(),
            post_learning=phases[POST_LEARNING].to_record(),
            slices=student_slices(phases[LEARNING], phases[POST_LEARNING]),
        )
        groups[group_of[pseudonym]].append(record)
    return StudyDataset(groups=groups, seed=-1)
