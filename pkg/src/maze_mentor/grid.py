"""Grid world and deterministic execution semantics for maze programs."""

from __future__ import annotations

from dataclasses import dataclass

from .blocks import (
    IF,
    IF_ELSE,
    MOVE,
    PATH_AHEAD,
    PATH_LEFT,
    PATH_RIGHT,
    REPEAT,
    REPEAT_UNTIL_GOAL,
    TURN_LEFT,
    TURN_RIGHT,
    Block,
    Program,
)

NORTH, EAST, SOUTH, WEST = "N", "E", "S", "W"
DIRECTIONS = (NORTH, EAST, SOUTH, WEST)

_DELTAS = {NORTH: (-1, 0), EAST: (0, 1), SOUTH: (1, 0), WEST: (0, -1)}
_LEFT_OF = {NORTH: WEST, WEST: SOUTH, SOUTH: EAST, EAST: NORTH}
_RIGHT_OF = {v: k for k, v in _LEFT_OF.items()}

SUCCESS = "success"
INCOMPLETE = "incomplete"
CRASH = "crash"
STEP_LIMIT_EXCEEDED = "step_limit_exceeded"

DEFAULT_STEP_LIMIT = 1000

MAX_GRID_SIDE = 12

WALL = "#"
FREE = "."


@dataclass(frozen=True)
class Pose:
    row: int
    col: int
    direction: str

    def as_tuple(self) -> tuple[int, int, str]:
        return (self.row, self.col, self.direction)


@dataclass(frozen=True)
class TaskGrid:
    """Rectangular maze: '#' walls, '.' free cells, one start pose, one goal cell."""

    rows: tuple[str, ...]
    start: Pose
    goal: tuple[int, int]

    def __post_init__(self) -> None:
        h = len(self.rows)
        if h == 0:
            raise ValueError("grid has no rows")
        w = len(self.rows[0])
        if w == 0:
            raise ValueError("grid has empty rows")
        if h > MAX_GRID_SIDE or w > MAX_GRID_SIDE:
            raise ValueError(f"grid exceeds {MAX_GRID_SIDE}x{MAX_GRID_SIDE}")
        if any(len(r) != w for r in self.rows):
            raise ValueError("grid rows have differing widths")
        if any(ch not in (WALL, FREE) for r in self.rows for ch in r):
            raise ValueError("grid rows may contain only '#' and '.'")
        if self.start.direction not in DIRECTIONS:
            raise ValueError(f"bad start direction {self.start.direction!r}")
        if (self.start.row, self.start.col) == self.goal:
            raise ValueError("start and goal must differ")
        for name, (r, c) in (("start", (self.start.row, self.start.col)), ("goal", self.goal)):
            if not (0 <= r < h and 0 <= c < w):
                raise ValueError(f"{name} lies outside the grid")
            if self.rows[r][c] == WALL:
                raise ValueError(f"{name} lies on a wall")

    @property
    def height(self) -> int:
        return len(self.rows)

    @property
    def width(self) -> int:
        return len(self.rows[0])

    def is_free(self, row: int, col: int) -> bool:
        """In-bounds and not a wall. Off-grid cells behave as walls."""
        return 0 <= row < self.height and 0 <= col < self.width and self.rows[row][col] == FREE

    def free_cell_count(self) -> int:
        return sum(r.count(FREE) for r in self.rows)

    def render_rows(self) -> list[str]:
        """Rows with 'S' and 'G' marked, the task-file encoding."""
        out = [list(r) for r in self.rows]
        out[self.start.row][self.start.col] = "S"
        gr, gc = self.goal
        out[gr][gc] = "G"
        return ["".join(r) for r in out]

    @staticmethod
    def from_marked_rows(rows: list[str], start_dir: str) -> "TaskGrid":
        """Build from task-file rows where 'S' marks the start and 'G' the goal."""
        start_pos = None
        goal_pos = None
        clean = []
        for r, row in enumerate(rows):
            chars = []
            for c, ch in enumerate(row):
                if ch == "S":
                    if start_pos is not None:
                        raise ValueError("more than one start cell")
                    start_pos = (r, c)
                    chars.append(FREE)
                elif ch == "G":
                    if goal_pos is not None:
                        raise ValueError("more than one goal cell")
                    goal_pos = (r, c)
                    chars.append(FREE)
                elif ch in (WALL, FREE):
                    chars.append(ch)
                else:
                    raise ValueError(f"bad grid character {ch!r}")
            clean.append("".join(chars))
        if start_pos is None or goal_pos is None:
            raise ValueError("grid needs exactly one 'S' and one 'G'")
        return TaskGrid(tuple(clean), Pose(start_pos[0], start_pos[1], start_dir), goal_pos)


@dataclass(frozen=True)
class ExecutionResult:
    """Outcome of running a program: halting reason, step count, and trace.

    ``trace`` holds one (action, pose-after) entry per counted step. A
    repeat_until_goal iteration that performs no basic action burns one
    'noop' step so execution always halts within the step limit.
    """

    outcome: str
    steps: int
    trace: tuple[tuple[str, tuple[int, int, str]], ...]
    condition_checks: int = 0

    @property
    def succeeded(self) -> bool:
        return self.outcome == SUCCESS


class _Halt(Exception):
    pass


class _Machine:
    def __init__(self, grid: TaskGrid, step_limit: int):
        self.grid = grid
        self.limit = step_limit
        self.pose = grid.start
        self.steps = 0
        self.trace: list[tuple[str, tuple[int, int, str]]] = []
        self.outcome = INCOMPLETE
        self.condition_checks = 0

    def _tick(self, action: str) -> None:
        if self.steps >= self.limit:
            self.outcome = STEP_LIMIT_EXCEEDED
            raise _Halt
        self.steps += 1
        self.trace.append((action, self.pose.as_tuple()))

    def at_goal(self) -> bool:
        return (self.pose.row, self.pose.col) == self.grid.goal

    def do_move(self) -> None:
        if self.steps >= self.limit:
            self.outcome = STEP_LIMIT_EXCEEDED
            raise _Halt
        dr, dc = _DELTAS[self.pose.direction]
        nr, nc = self.pose.row + dr, self.pose.col + dc
        if not self.grid.is_free(nr, nc):
            self.steps += 1
            self.trace.append((MOVE, self.pose.as_tuple()))
            self.outcome = CRASH
            raise _Halt
        self.pose = Pose(nr, nc, self.pose.direction)
        self.steps += 1
        self.trace.append((MOVE, self.pose.as_tuple()))
        if self.at_goal():
            self.outcome = SUCCESS
            raise _Halt

    def do_turn(self, kind: str) -> None:
        table = _LEFT_OF if kind == TURN_LEFT else _RIGHT_OF
        new = Pose(self.pose.row, self.pose.col, table[self.pose.direction])
        if self.steps >= self.limit:
            self.outcome = STEP_LIMIT_EXCEEDED
            raise _Halt
        self.pose = new
        self.steps += 1
        self.trace.append((kind, self.pose.as_tuple()))

    def condition(self, cond: str) -> bool:
        self.condition_checks += 1
        d = self.pose.direction
        if cond == PATH_LEFT:
            d = _LEFT_OF[d]
        elif cond == PATH_RIGHT:
            d = _RIGHT_OF[d]
        dr, dc = _DELTAS[d]
        return self.grid.is_free(self.pose.row + dr, self.pose.col + dc)

    def run_sequence(self, blocks: tuple[Block, ...]) -> None:
        for b in blocks:
            self.run_block(b)

    def run_block(self, b: Block) -> None:
        if b.kind == MOVE:
            self.do_move()
        elif b.kind in (TURN_LEFT, TURN_RIGHT):
            self.do_turn(b.kind)
        elif b.kind == REPEAT:
            for _ in range(b.count or 0):
                self.run_sequence(b.body)
        elif b.kind == REPEAT_UNTIL_GOAL:
            while not self.at_goal():
                before = self.steps
                self.run_sequence(b.body)
                if self.steps == before:
                    # No basic action ran this iteration; burn a step so the
                    # loop hits the limit instead of spinning forever.
                    self._tick("noop")
        elif b.kind == IF:
            if self.condition(b.cond or ""):
                self.run_sequence(b.body)
        elif b.kind == IF_ELSE:
            if self.condition(b.cond or ""):
                self.run_sequence(b.body)
            else:
                self.run_sequence(b.else_body)
        else:  # pragma: no cover - Block validates kinds
            raise AssertionError(b.kind)


def execute(program: Program, grid: TaskGrid, step_limit: int = DEFAULT_STEP_LIMIT) -> ExecutionResult:
    """Run a program on a grid.

    Deterministic. Moving into a wall or off the grid crashes immediately;
    entering the goal cell halts with success immediately; running off the
    end of the program without reaching the goal is incomplete; exceeding
    ``step_limit`` basic actions halts with step_limit_exceeded.
    """
    if step_limit < 1:
        raise ValueError("step_limit must be positive")
    machine = _Machine(grid, step_limit)
    try:
        machine.run_sequence(program.blocks)
    except _Halt:
        pass
    return ExecutionResult(
        outcome=machine.outcome,
        steps=machine.steps,
        trace=tuple(machine.trace),
        condition_checks=machine.condition_checks,
    )
