"""Task specifications and the bundled two-phase curriculum.

The learning phase holds tasks T01-T12, the post-learning phase P01-P15.
Category memberships, concept rows, and the duplicated-task pairs are
validated every time a catalog is loaded.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .blocks import (
    ALL_KINDS,
    BASIC_KINDS,
    MAX_REPEAT,
    MIN_REPEAT,
    REPEAT,
    Block,
    Program,
    parse_program,
    serialize_program,
)
from .grid import DEFAULT_STEP_LIMIT, TaskGrid, execute

EASY_L = "Easy_L"
HARD_L = "Hard_L"
EASY_PL = "Easy_PL"
HARD_PL = "Hard_PL"
COMMON_PL = "Common_PL"
NEW_PL = "New_PL"

LEARNING_IDS = tuple(f"T{i:02d}" for i in range(1, 13))
POST_LEARNING_IDS = tuple(f"P{i:02d}" for i in range(1, 16))

EASY_L_IDS = frozenset({"T01", "T02", "T03", "T04"})
HARD_L_IDS = frozenset(LEARNING_IDS) - EASY_L_IDS
EASY_PL_IDS = frozenset({"P01", "P02", "P08"})
HARD_PL_IDS = frozenset(POST_LEARNING_IDS) - EASY_PL_IDS
COMMON_PL_IDS = frozenset({"P01", "P02", "P04", "P05", "P06", "P07"})
NEW_PL_IDS = frozenset({"P12", "P13", "P14"})

# learning-phase counterparts of the duplicated post-learning tasks
DUPLICATE_PAIRS = {
    "P01": "T01",
    "P02": "T03",
    "P04": "T07",
    "P05": "T08",
    "P06": "T10",
    "P07": "T12",
}
COMMON_L_IDS = frozenset(DUPLICATE_PAIRS.values())

# one concept row per task, mirroring the curriculum's concept table
EXPECTED_CONCEPTS = {
    "T01": ("moves_turns",),
    "T02": ("repeat",),
    "T03": ("repeat",),
    "T04": ("repeat_x2",),
    "T05": ("repeat",),
    "T06": ("repeat_until",),
    "T07": ("repeat_until",),
    "T08": ("repeat_until_if",),
    "T09": ("repeat_until_if",),
    "T10": ("repeat_until_ifelse",),
    "T11": ("repeat_until_ifelse",),
    "T12": ("repeat_until_ifelse_nested",),
    "P01": ("moves_turns",),
    "P02": ("repeat",),
    "P03": ("repeat_until",),
    "P04": ("repeat_until",),
    "P05": ("repeat_until_if",),
    "P06": ("repeat_until_ifelse",),
    "P07": ("repeat_until_ifelse_nested",),
    "P08": ("moves_turns",),
    "P09": ("repeat_until",),
    "P10": ("repeat_until_if",),
    "P11": ("repeat_x3",),
    "P12": ("repeat_then_repeat_until",),
    "P13": ("repeat_in_repeat",),
    "P14": ("if_in_repeat",),
    "P15": ("repeat_until_ifelse_nested",),
}

ALL_CONCEPTS = tuple(sorted({c for row in EXPECTED_CONCEPTS.values() for c in row}))


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class TaskSpec:
    id: str
    grid: TaskGrid
    palette: frozenset[str]
    block_limit: int
    solution: Program
    concepts: tuple[str, ...]
    difficulty: str
    novelty: str | None = None
    grid_provenance: str = "authored"

    @property
    def phase(self) -> str:
        return "learning" if self.id.startswith("T") else "post_learning"


def validate_program(p: Program, task: TaskSpec) -> ValidationReport:
    """Palette, block-limit, and repeat-count checks; empty report means valid."""
    violations: list[Violation] = []
    for block in p.walk():
        if block.kind not in task.palette:
            violations.append(
                Violation("palette", f"block kind {block.kind!r} not in the task palette")
            )
        if block.kind == REPEAT and not (MIN_REPEAT <= (block.count or 0) <= MAX_REPEAT):
            violations.append(
                Violation(
                    "repeat_count",
                    f"repeat count {block.count} outside {MIN_REPEAT}..{MAX_REPEAT}",
                )
            )
    count = p.node_count()
    if count > task.block_limit:
        violations.append(
            Violation("block_limit", f"{count} blocks used, limit is {task.block_limit}")
        )
    return ValidationReport(tuple(violations))


def is_solution(p: Program, task: TaskSpec, step_limit: int = DEFAULT_STEP_LIMIT) -> bool:
    if not validate_program(p, task).ok:
        return False
    return execute(p, task.grid, step_limit).succeeded


def task_to_record(task: TaskSpec) -> dict:
    rec = {
        "id": task.id,
        "grid": {
            "rows": task.grid.render_rows(),
            "start_dir": task.grid.start.direction,
        },
        "palette": sorted(task.palette),
        "block_limit": task.block_limit,
        "solution": serialize_program(task.solution),
        "concepts": list(task.concepts),
        "difficulty": task.difficulty,
        "grid_provenance": task.grid_provenance,
    }
    if task.novelty is not None:
        rec["novelty"] = task.novelty
    return rec


def task_from_record(rec: dict) -> TaskSpec:
    bad = set(rec.get("palette", [])) - set(ALL_KINDS)
    if bad:
        raise CatalogError(f"task {rec.get('id')}: unknown palette kinds {sorted(bad)}")
    return TaskSpec(
        id=rec["id"],
        grid=TaskGrid.from_marked_rows(rec["grid"]["rows"], rec["grid"]["start_dir"]),
        palette=frozenset(rec["palette"]),
        block_limit=int(rec["block_limit"]),
        solution=parse_program(rec["solution"]),
        concepts=tuple(rec["concepts"]),
        difficulty=rec["difficulty"],
        novelty=rec.get("novelty"),
        grid_provenance=rec.get("grid_provenance", "authored"),
    )


@dataclass(frozen=True)
class Catalog:
    tasks: tuple[TaskSpec, ...]

    def __getitem__(self, task_id: str) -> TaskSpec:
        for t in self.tasks:
            if t.id == task_id:
                return t
        raise KeyError(task_id)

    def __contains__(self, task_id: str) -> bool:
        return any(t.id == task_id for t in self.tasks)

    def __len__(self) -> int:
        return len(self.tasks)

    @property
    def learning(self) -> tuple[TaskSpec, ...]:
        return tuple(t for t in self.tasks if t.phase == "learning")

    @property
    def post_learning(self) -> tuple[TaskSpec, ...]:
        return tuple(t for t in self.tasks if t.phase == "post_learning")

    def curriculum(self, phase: str) -> tuple[TaskSpec, ...]:
        if phase == "learning":
            return self.learning
        if phase == "post_learning":
            return self.post_learning
        raise ValueError(f"unknown phase {phase!r}")


def _check_catalog(tasks: list[TaskSpec]) -> None:
    ids = [t.id for t in tasks]
    expected = list(LEARNING_IDS + POST_LEARNING_IDS)
    if sorted(ids) != sorted(expected):
        missing = sorted(set(expected) - set(ids))
        extra = sorted(set(ids) - set(expected))
        raise CatalogError(f"catalog ids wrong; missing {missing}, unexpected {extra}")
    by_id = {t.id: t for t in tasks}

    for t in tasks:
        for kind in t.solution.kinds_used():
            if kind not in t.palette:
                raise CatalogError(f"{t.id}: solution uses {kind!r} outside its palette")
        if not is_solution(t.solution, t):
            raise CatalogError(f"{t.id}: bundled solution does not solve the task")
        want_difficulty = (
            EASY_L if t.id in EASY_L_IDS else
            HARD_L if t.id.startswith("T") else
            EASY_PL if t.id in EASY_PL_IDS else
            HARD_PL
        )
        if t.difficulty != want_difficulty:
            raise CatalogError(f"{t.id}: difficulty {t.difficulty!r}, expected {want_difficulty!r}")
        want_novelty = (
            COMMON_PL if t.id in COMMON_PL_IDS else NEW_PL if t.id in NEW_PL_IDS else None
        )
        if t.novelty != want_novelty:
            raise CatalogError(f"{t.id}: novelty {t.novelty!r}, expected {want_novelty!r}")
        if t.concepts != EXPECTED_CONCEPTS[t.id]:
            raise CatalogError(
                f"{t.id}: concepts {t.concepts!r}, expected {EXPECTED_CONCEPTS[t.id]!r}"
            )

    for dup, original in DUPLICATE_PAIRS.items():
        a, b = by_id[dup], by_id[original]
        same = (
            a.grid == b.grid
            and serialize_program(a.solution) == serialize_program(b.solution)
            and a.palette == b.palette
            and a.block_limit == b.block_limit
        )
        if not same:
            raise CatalogError(f"{dup} must be structurally identical to {original}")


def load_task_catalog(path: str | Path) -> Catalog:
    """Load and validate a catalog from a directory of per-task JSON files."""
    directory = Path(path)
    if not directory.is_dir():
        raise CatalogError(f"not a catalog directory: {directory}")
    tasks = []
    for file in sorted(directory.glob("*.json")):
        with open(file, encoding="utf-8") as fh:
            tasks.append(task_from_record(json.load(fh)))
    _check_catalog(tasks)
    order = {tid: i for i, tid in enumerate(LEARNING_IDS + POST_LEARNING_IDS)}
    tasks.sort(key=lambda t: order[t.id])
    return Catalog(tuple(tasks))


_bundled: Catalog | None = None


def bundled_catalog() -> Catalog:
    """The catalog shipped inside the package (27 tasks)."""
    global _bundled
    if _bundled is None:
        root = resources.files("maze_mentor") / "data" / "tasks"
        with resources.as_file(root) as path:
            _bundled = load_task_catalog(path)
    return _bundled
