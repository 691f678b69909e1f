"""Code quizzes synthesized from recommendations, and authored plan quizzes.

A code quiz blanks the deepest-rightmost basic action of the current
recommendation, synthesizes a small grid on which only the original action
succeeds, and attaches authored feedback for the two wrong choices. Plan
quizzes are authored per learning task and served in two stages: planning on
the first request, solution finding afterwards.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from importlib import resources
from typing import Any

from .blocks import (
    BASIC_KINDS,
    IF_ELSE,
    MOVE,
    PATH_AHEAD,
    PATH_LEFT,
    PATH_RIGHT,
    Block,
    Program,
    program_to_wire,
    serialize_program,
)
from .catalog import TaskSpec
from .grid import FREE, WALL, Pose, TaskGrid, execute
from .hints import RecommendLimits, recommend

BLANK_MARK = "___"

QUIZ_STEP_LIMIT = 250


class QuizError(ValueError):
    pass


class BlankError(QuizError):
    """The program holds no basic action to blank."""


class GridSynthesisError(QuizError):
    """No discriminating grid exists within the given bounds."""


class ContentError(QuizError):
    """Authored quiz content is missing for a task."""


# ---------------------------------------------------------------------------
# Blank placement
#
# Paths address blocks by child index; for if_else the else branch continues
# the body's numbering, so index len(body) + k means else_body[k].


def _child_at(b: Block, idx: int) -> Block:
    kids = b.children()
    return kids[idx]


def _replace_at(blocks: tuple[Block, ...], path: tuple[int, ...], new: Block) -> tuple[Block, ...]:
    i = path[0]
    b = blocks[i]
    if len(path) == 1:
        return blocks[:i] + (new,) + blocks[i + 1 :]
    rest = path[1:]
    if rest[0] < len(b.body):
        nb = replace(b, body=_replace_at(b.body, rest, new))
    else:
        shifted = (rest[0] - len(b.body),) + rest[1:]
        nb = replace(b, else_body=_replace_at(b.else_body, shifted, new))
    return blocks[:i] + (nb,) + blocks[i + 1 :]


def _rendered_lines(b: Block) -> int:
    if b.kind in BASIC_KINDS:
        return 1
    inner = sum(_rendered_lines(c) for c in b.body)
    if b.kind == IF_ELSE:
        inner_else = sum(_rendered_lines(c) for c in b.else_body)
        return 4 + inner + inner_else
    return 2 + inner


@dataclass(frozen=True)
class BlankedProgram:
    """A program with one basic-action leaf designated as the hole.

    ``source`` keeps the original action in place; ``fill`` swaps it.
    """

    source: Program
    blank_path: tuple[int, ...]
    correct_action: str

    def fill(self, action: str) -> Program:
        if action not in BASIC_KINDS:
            raise ValueError(f"not a basic action: {action}")
        return Program(_replace_at(self.source.blocks, self.blank_path, Block(action)))

    def blank_line_index(self) -> int:
        """Line number of the hole within the canonical template text."""
        line = 0
        blocks = self.source.blocks
        for depth, idx in enumerate(self.blank_path):
            local = idx
            b = None
            if depth > 0:
                parent = self._node_at(self.blank_path[:depth])
                if local >= len(parent.body):
                    line += 2 + sum(_rendered_lines(c) for c in parent.body)
                    local -= len(parent.body)
                    blocks = parent.else_body
                else:
                    blocks = parent.body
            for sib in blocks[:local]:
                line += _rendered_lines(sib)
            b = blocks[local]
            if depth == len(self.blank_path) - 1:
                return line
            line += 1  # the control block's header line
        raise AssertionError("unreachable")

    def _node_at(self, path: tuple[int, ...]) -> Block:
        blocks = self.source.blocks
        node: Block | None = None
        for idx in path:
            if node is None:
                node = blocks[idx]
            else:
                node = _child_at(node, idx)
        assert node is not None
        return node

    def template_text(self) -> str:
        lines = serialize_program(self.source).splitlines()
        idx = self.blank_line_index()
        pad = lines[idx][: len(lines[idx]) - len(lines[idx].lstrip())]
        lines[idx] = pad + BLANK_MARK
        return "".join(line + "\n" for line in lines)


def place_blank(p: Program) -> BlankedProgram:
    """Blank the basic-action leaf maximizing (depth, then leaf order)."""
    best: tuple[int, int] | None = None
    best_path: tuple[int, ...] | None = None
    best_action: str | None = None
    order = 0

    def walk(blocks: tuple[Block, ...], path: tuple[int, ...], depth: int, offset: int) -> None:
        nonlocal best, best_path, best_action, order
        for i, b in enumerate(blocks):
            here = path + (offset + i,)
            if b.kind in BASIC_KINDS:
                key = (depth, order)
                if best is None or key > best:
                    best, best_path, best_action = key, here, b.kind
                order += 1
            else:
                walk(b.body, here, depth + 1, 0)
                if b.kind == IF_ELSE:
                    walk(b.else_body, here, depth + 1, len(b.body))

    walk(p.blocks, (), 0, 0)
    if best_path is None or best_action is None:
        raise BlankError("program contains no basic action")
    return BlankedProgram(source=p, blank_path=best_path, correct_action=best_action)


# ---------------------------------------------------------------------------
# Grid synthesis via symbolic execution
#
# The filled template runs on an unbounded plane whose cells are unknown.
# Condition probes branch the execution and pin the probed cell; every move
# pins its target cell free. Each first visit of a cell becomes a candidate
# goal: truncating the run there yields a concrete, conflict-free grid.


@dataclass(frozen=True)
class GridBounds:
    max_height: int = 8
    max_width: int = 8
    max_candidates: int = 128
    max_steps: int = 24
    max_branches: int = 2048


_DELTAS = {"N": (-1, 0), "E": (0, 1), "S": (1, 0), "W": (0, -1)}
_LEFT_OF = {"N": "W", "W": "S", "S": "E", "E": "N"}
_RIGHT_OF = {v: k for k, v in _LEFT_OF.items()}


class _SymState:
    __slots__ = ("pos", "direction", "cells", "steps", "log", "visits", "box")

    def __init__(self) -> None:
        self.pos = (0, 0)
        self.direction = "E"
        self.cells: dict[tuple[int, int], str] = {(0, 0): FREE}
        self.steps = 0
        # constraints in the order they were pinned, so a run truncated at a
        # goal candidate only carries the constraints known by then
        self.log: list[tuple[tuple[int, int], str]] = [((0, 0), FREE)]
        self.visits: list[tuple[tuple[int, int], int]] = []
        self.box = (0, 0, 0, 0)  # min_row, max_row, min_col, max_col of free cells

    def pin(self, cell: tuple[int, int], value: str) -> None:
        self.cells[cell] = value
        self.log.append((cell, value))
        if value == FREE:
            r0, r1, c0, c1 = self.box
            self.box = (min(r0, cell[0]), max(r1, cell[0]), min(c0, cell[1]), max(c1, cell[1]))

    def box_fits(self, bounds: "GridBounds") -> bool:
        r0, r1, c0, c1 = self.box
        return r1 - r0 + 1 <= bounds.max_height and c1 - c0 + 1 <= bounds.max_width

    def clone(self) -> "_SymState":
        c = _SymState.__new__(_SymState)
        c.pos = self.pos
        c.direction = self.direction
        c.cells = dict(self.cells)
        c.steps = self.steps
        c.log = list(self.log)
        c.visits = list(self.visits)
        c.box = self.box
        return c


class _BranchBudget:
    def __init__(self, limit: int):
        self.remaining = limit

    def take(self) -> bool:
        if self.remaining <= 0:
            return False
        self.remaining -= 1
        return True


def _probe_cell(state: _SymState, cond: str) -> tuple[int, int]:
    d = state.direction
    if cond == PATH_LEFT:
        d = _LEFT_OF[d]
    elif cond == PATH_RIGHT:
        d = _RIGHT_OF[d]
    dr, dc = _DELTAS[d]
    return (state.pos[0] + dr, state.pos[1] + dc)


def _symbolic_paths(program: Program, bounds: GridBounds, wall_first: bool):
    """Yield per-branch states; candidates are harvested from their visits."""
    budget = _BranchBudget(bounds.max_branches)
    results: list[_SymState] = []

    def run_seq(blocks: tuple[Block, ...], state: _SymState, cont) -> None:
        if not blocks:
            cont(state)
            return
        head, rest = blocks[0], blocks[1:]
        run_block(head, state, lambda s: run_seq(rest, s, cont))

    def run_block(b: Block, state: _SymState, cont) -> None:
        if state.steps >= bounds.max_steps:
            results.append(state)
            return
        if b.kind == MOVE:
            target = (
                state.pos[0] + _DELTAS[state.direction][0],
                state.pos[1] + _DELTAS[state.direction][1],
            )
            known = state.cells.get(target)
            if known == WALL:
                results.append(state)  # crashes here; earlier visits still count
                return
            if known is None:
                state.pin(target, FREE)
                if not state.box_fits(bounds):
                    results.append(state)  # grid would overflow; keep the prefix
                    return
            first = target != (0, 0) and all(v != target for v, _ in state.visits)
            state.pos = target
            state.steps += 1
            if first:
                state.visits.append((target, len(state.log)))
            cont(state)
            return
        if b.kind in ("turn_left", "turn_right"):
            table = _LEFT_OF if b.kind == "turn_left" else _RIGHT_OF
            state.direction = table[state.direction]
            state.steps += 1
            cont(state)
            return
        if b.kind == "repeat":
            def loop(s: _SymState, remaining: int) -> None:
                if remaining == 0 or s.steps >= bounds.max_steps:
                    if remaining and s.steps >= bounds.max_steps:
                        results.append(s)
                        return
                    cont(s)
                    return
                run_seq(b.body, s, lambda s2: loop(s2, remaining - 1))

            loop(state, b.count or 0)
            return
        if b.kind == "repeat_until_goal":
            def loop(s: _SymState) -> None:
                if s.steps >= bounds.max_steps:
                    results.append(s)
                    return
                before = s.steps
                run_seq(b.body, s, lambda s2: loop(s2) if s2.steps > before else results.append(s2))

            loop(state)
            return
        # conditionals branch on unknown cells
        cell = _probe_cell(state, b.cond or "")
        known = state.cells.get(cell)
        if known is not None:
            outcomes = [known]
        else:
            outcomes = [WALL, FREE] if wall_first else [FREE, WALL]
        for value in outcomes:
            if known is None:
                if not budget.take():
                    continue
                s = state.clone()
                s.pin(cell, value)
                if not s.box_fits(bounds):
                    results.append(s)
                    continue
            else:
                s = state
            taken = value == FREE
            if b.kind == "if":
                if taken:
                    run_seq(b.body, s, cont)
                else:
                    cont(s)
            else:
                run_seq(b.body if taken else b.else_body, s, cont)

    root = _SymState()
    run_seq(program.blocks, root, results.append)
    return results


def _concretize(state: _SymState, cut: int, bounds: GridBounds) -> TaskGrid | None:
    """Grid for the prefix of a branch ending at its cut-th first visit."""
    goal, upto = state.visits[cut]
    free = set()
    walls = set()
    for cell, value in state.log[:upto]:
        (free if value == FREE else walls).add(cell)
    rows = [r for r, _ in free]
    cols = [c for _, c in free]
    r0, r1 = min(rows), max(rows)
    c0, c1 = min(cols), max(cols)
    height = r1 - r0 + 1
    width = c1 - c0 + 1
    if height > bounds.max_height or width > bounds.max_width:
        return None
    grid_rows = []
    for r in range(r0, r1 + 1):
        row = []
        for c in range(c0, c1 + 1):
            row.append(FREE if (r, c) in free else WALL)
        grid_rows.append("".join(row))
    start = Pose(-r0, -c0, "E")
    goal_t = (goal[0] - r0, goal[1] - c0)
    if (start.row, start.col) == goal_t:
        return None
    return TaskGrid(tuple(grid_rows), start, goal_t)


def _grid_key(grid: TaskGrid) -> str:
    return "|".join(grid.render_rows()) + "|" + grid.start.direction


def is_discriminating(blanked: BlankedProgram, grid: TaskGrid) -> bool:
    """Exactly the correct fill succeeds on the grid."""
    outcomes = []
    for action in BASIC_KINDS:
        result = execute(blanked.fill(action), grid, QUIZ_STEP_LIMIT)
        outcomes.append((action, result.succeeded))
    return all(ok == (action == blanked.correct_action) for action, ok in outcomes)


def synthesize_quiz_grids(
    blanked: BlankedProgram, bounds: GridBounds = GridBounds()
) -> list[TaskGrid]:
    """Discriminating grids, best first.

    Ranking: fewer free cells, then more condition checks exercised by the
    correct fill, then grid text.
    """
    filled = blanked.fill(blanked.correct_action)
    seen: dict[str, TaskGrid] = {}
    # both probe orders: wall-first surfaces compact bends for templates that
    # walk on a blocked probe, free-first for the opposite shape; each order
    # gets its own candidate allowance
    for wall_first in (True, False):
        found = 0
        for state in _symbolic_paths(filled, bounds, wall_first):
            for cut in range(len(state.visits)):
                grid = _concretize(state, cut, bounds)
                if grid is None:
                    continue
                key = _grid_key(grid)
                if key not in seen:
                    seen[key] = grid
                    found += 1
                if found >= bounds.max_candidates:
                    break
            if found >= bounds.max_candidates:
                break

    ranked: list[tuple[tuple, TaskGrid]] = []
    for key, grid in seen.items():
        if not is_discriminating(blanked, grid):
            continue
        run = execute(filled, grid, QUIZ_STEP_LIMIT)
        if not run.succeeded:
            continue
        ranked.append(((grid.free_cell_count(), -run.condition_checks, key), grid))
    ranked.sort(key=lambda pair: pair[0])
    if not ranked:
        raise GridSynthesisError("no discriminating grid within bounds")
    return [grid for _, grid in ranked]


# ---------------------------------------------------------------------------
# Code quiz assembly


@dataclass(frozen=True)
class CodeQuiz:
    grid: TaskGrid
    blanked: BlankedProgram
    options: tuple[str, str, str]
    correct_index: int
    feedback_per_option: dict[int, str]
    used_task_grid: bool = False

    def payload(self) -> dict[str, Any]:
        return {
            "kind": "code_quiz",
            "grid": {
                "rows": self.grid.render_rows(),
                "start_dir": self.grid.start.direction,
            },
            "template": self.blanked.template_text(),
            "template_ast": program_to_wire(self.blanked.source),
            "blank_path": list(self.blanked.blank_path),
            "options": list(self.options),
            "used_task_grid": self.used_task_grid,
        }


_feedback_cache: dict[str, str] | None = None


def _feedback_templates() -> dict[str, str]:
    global _feedback_cache
    if _feedback_cache is None:
        path = resources.files("maze_mentor") / "data" / "code_quiz_feedback.json"
        _feedback_cache = json.loads(path.read_text(encoding="utf-8"))
    return _feedback_cache


def feedback_for(wrong: str, correct: str) -> str:
    templates = _feedback_templates()
    return templates[f"{wrong}|{correct}"]


_code_quiz_cache: dict[tuple[str, str], CodeQuiz] = {}


def build_code_quiz(
    c_stu: Program,
    c_star: Program,
    task: TaskSpec,
    grid_index: int = 0,
    limits: RecommendLimits = RecommendLimits(),
    bounds: GridBounds = GridBounds(),
) -> CodeQuiz:
    """Recommendation -> blank -> synthesized grid -> quiz.

    Falls back to the task's own grid when synthesis yields nothing usable;
    raises QuizError when that grid cannot discriminate either (the session
    layer then degrades to a plain recommendation payload).
    """
    rec = recommend(c_stu, c_star, task.palette, limits)
    cache_key = (task.id, serialize_program(rec.c_rec))
    if cache_key in _code_quiz_cache and grid_index == 0:
        return _code_quiz_cache[cache_key]

    blanked = place_blank(rec.c_rec)  # BlankError propagates as QuizError
    used_task_grid = False
    try:
        grids = synthesize_quiz_grids(blanked, bounds)
        if not (0 <= grid_index < len(grids)):
            raise QuizError(f"grid index {grid_index} out of range 0..{len(grids) - 1}")
        grid = grids[grid_index]
    except GridSynthesisError:
        if is_discriminating(blanked, task.grid):
            grid = task.grid
            used_task_grid = True
        else:
            raise
    options = tuple(BASIC_KINDS)
    correct_index = options.index(blanked.correct_action)
    feedback = {
        i: feedback_for(action, blanked.correct_action)
        for i, action in enumerate(options)
        if i != correct_index
    }
    quiz = CodeQuiz(
        grid=grid,
        blanked=blanked,
        options=options,  # type: ignore[arg-type]
        correct_index=correct_index,
        feedback_per_option=feedback,
        used_task_grid=used_task_grid,
    )
    if grid_index == 0:
        _code_quiz_cache[cache_key] = quiz
    return quiz


# ---------------------------------------------------------------------------
# Plan quizzes


PLANNING = "planning"
SOLUTION_FINDING = "solution_finding"


@dataclass(frozen=True)
class PlanQuiz:
    task_id: str
    stage: str
    prompt: str
    options: tuple[str, str, str, str]
    correct_index: int
    feedback_per_option: dict[int, str]

    def payload(self) -> dict[str, Any]:
        return {
            "kind": "plan_quiz",
            "task_id": self.task_id,
            "stage": self.stage,
            "prompt": self.prompt,
            "options": list(self.options),
        }


_plan_content: dict[str, Any] | None = None


def _plan_quiz_content() -> dict[str, Any]:
    """Authored quizzes, indexed by task id.

    The file holds one record per task: {task_id, planning, solution_finding}.
    """
    global _plan_content
    if _plan_content is None:
        path = resources.files("maze_mentor") / "data" / "plan_quizzes.json"
        records = json.loads(path.read_text(encoding="utf-8"))
        _plan_content = {
            rec["task_id"]: {k: v for k, v in rec.items() if k != "task_id"}
            for rec in records
        }
    return _plan_content


def _plan_quiz_from_record(task_id: str, stage: str, rec: dict[str, Any]) -> PlanQuiz:
    options = tuple(rec["options"])
    if len(options) != 4:
        raise ContentError(f"{task_id}/{stage}: quizzes need exactly 4 options")
    correct = int(rec["correct"])
    feedback = {int(k): v for k, v in rec["feedback"].items()}
    missing = {i for i in range(4) if i != correct} - set(feedback)
    if missing:
        raise ContentError(f"{task_id}/{stage}: missing feedback for options {sorted(missing)}")
    return PlanQuiz(
        task_id=task_id,
        stage=stage,
        prompt=rec["prompt"],
        options=options,  # type: ignore[arg-type]
        correct_index=correct,
        feedback_per_option=feedback,
    )


def plan_quiz_for(task: TaskSpec | str, request_index: int) -> PlanQuiz:
    """Planning quiz on the first feedback request, solution finding after."""
    task_id = task if isinstance(task, str) else task.id
    if request_index < 1:
        raise ValueError("request_index counts from 1")
    content = _plan_quiz_content()
    if task_id not in content:
        raise ContentError(f"no authored plan quizzes for {task_id}")
    stage = PLANNING if request_index == 1 else SOLUTION_FINDING
    return _plan_quiz_from_record(task_id, stage, content[task_id][stage])


def plan_quiz_count() -> int:
    content = _plan_quiz_content()
    return sum(len(v) for v in content.values())


# ---------------------------------------------------------------------------
# Grading


@dataclass(frozen=True)
class QuizVerdict:
    correct: bool
    feedback: str | None = None


def grade_quiz_answer(quiz: CodeQuiz | PlanQuiz, chosen_index: int) -> QuizVerdict:
    n = len(quiz.options)
    if not (0 <= chosen_index < n):
        raise IndexError(f"option index {chosen_index} out of range 0..{n - 1}")
    if chosen_index == quiz.correct_index:
        return QuizVerdict(correct=True)
    return QuizVerdict(correct=False, feedback=quiz.feedback_per_option[chosen_index])
