"""Regenerate src/maze_mentor/data/plan_quizzes.json.

Planning quizzes ask students to reason about the route before coding; the
solution-finding quizzes offer four code candidates. Every code option is
checked against the bundled catalog: the marked answer must solve its task
and every distractor must fail it.
"""

from __future__ import annotations

import json
from pathlib import Path

from maze_mentor.blocks import parse_program
from maze_mentor.catalog import bundled_catalog, is_solution

# task -> (planning quiz, solution-finding quiz)
# each quiz: (prompt, [4 options], correct index, {wrong index: feedback})

PLANNING = {
    "T01": (
        "Trace the route with your eyes before coding. Starting at the explorer, "
        "which plan reaches the goal?",
        [
            "Walk 2 tiles, turn right, then walk 2 more",
            "Walk 4 tiles straight ahead",
            "Turn right first, then walk 4 tiles",
            "Walk 2 tiles, turn left, then walk 2 more",
        ],
        0,
        {
            1: "Look again: after two tiles the corridor is blocked ahead. The goal sits below the bend.",
            2: "The tile on the explorer's right at the start is a wall. It has to walk east first.",
            3: "Turning left at the bend faces away from the goal, which lies on the lower side.",
        },
    ),
    "T02": (
        "The goal lies straight ahead. Which action pattern matches the corridor?",
        [
            "The same step forward, done 4 times",
            "The same step forward, done 3 times",
            "A step forward and a left turn, done twice",
            "A right turn, then 4 steps forward",
        ],
        0,
        {
            1: "Count the tiles between the explorer and the goal: three steps stop one tile short.",
            2: "There is nothing to turn around; the corridor runs straight to the goal.",
            3: "Turning right at the start faces a wall, so the first move would crash.",
        },
    ),
    "T03": (
        "Plan the route: where does the explorer have to turn?",
        [
            "After 4 steps east, turn right, then 1 step down",
            "Never; 5 steps straight reach the goal",
            "After 4 steps east, turn left, then 1 step up",
            "Immediately; turn right, then walk 5 steps",
        ],
        0,
        {
            1: "The goal is not on the explorer's row; going only straight passes above it.",
            2: "Turning left at the corner faces out of the maze; the goal is below the corridor.",
            3: "The tile right of the start is a wall, so the route must begin by going east.",
        },
    ),
    "T04": (
        "This maze has two straight runs. Which description fits?",
        [
            "4 tiles east, a right turn, then 4 tiles south",
            "4 tiles east, a left turn, then 4 tiles north",
            "8 tiles straight east",
            "4 tiles south, a right turn, then 4 tiles east",
        ],
        0,
        {
            1: "A left turn at the corner points to the top edge; the goal waits at the bottom.",
            2: "The corridor ends after four tiles; walking on crashes into the wall.",
            3: "The explorer cannot start south; the tile below the start is a wall.",
        },
    ),
    "T05": (
        "The path descends like a staircase. Which little dance repeats 3 times?",
        [
            "Step, turn right, step, turn left",
            "Step, turn left, step, turn right",
            "Step, step, turn right",
            "Turn right, step, turn left",
        ],
        0,
        {
            1: "Turning left first climbs toward the top wall; the stairs run down to the right.",
            2: "Two steps in a row crash into the stair wall; each landing is one tile long.",
            3: "A right turn at the very start faces a wall. Each stair starts with a step forward.",
        },
    ),
    "T06": (
        "You cannot see how long the corridor is. What is the sturdiest plan?",
        [
            "Keep stepping forward until the goal is reached",
            "Step forward exactly 4 times",
            "Step forward twice, then turn back",
            "Turn left once, then keep stepping forward",
        ],
        0,
        {
            1: "Four steps leave the explorer short of the goal. Let the loop decide when to stop.",
            2: "Turning back walks away from the goal; this corridor has only one useful direction.",
            3: "A left turn points at the corridor wall; the goal lies straight ahead.",
        },
    ),
    "T07": (
        "What must happen before the long run to the goal?",
        [
            "Walk 2 tiles east, turn left, then keep going north",
            "Turn left immediately, then keep going",
            "Walk 3 tiles east, then turn left",
            "Keep walking east until the goal appears",
        ],
        0,
        {
            1: "Turning at the start faces a wall; the opening upward comes after two tiles.",
            2: "Three tiles east is one too many; the corridor upward starts after the second tile.",
            3: "The goal is not on this row, and the corridor east ends in a wall.",
        },
    ),
    "T08": (
        "Watch the side openings. When should the explorer turn?",
        [
            "Whenever a path opens on its right: turn right, then step",
            "Whenever a path opens on its left: turn left, then step",
            "At every single step, turn right",
            "Never; just keep stepping forward",
        ],
        0,
        {
            1: "The maze only ever opens to the right of the walking direction; there are no left doors.",
            2: "Turning on every tile spins the explorer into walls; only turn where a path opens.",
            3: "Going straight runs off the corridor at its end; the goal hides behind right turns.",
        },
    ),
    "T09": (
        "Watch the side openings. When should the explorer turn?",
        [
            "Whenever a path opens on its left: turn left, then step",
            "Whenever a path opens on its right: turn right, then step",
            "At every single step, turn left",
            "Never; just keep stepping forward",
        ],
        0,
        {
            1: "The maze only ever opens to the left of the walking direction; there are no right doors.",
            2: "Turning on every tile spins the explorer into walls; only turn where a path opens.",
            3: "Going straight runs off the corridor at its end; the goal hides behind left turns.",
        },
    ),
    "T10": (
        "The corridor keeps bending. What should the explorer decide at every step?",
        [
            "If the way ahead is clear, step; otherwise turn left",
            "If the way ahead is clear, step; otherwise turn right",
            "Always step forward",
            "Turn left and step, at every tile",
        ],
        0,
        {
            1: "Every bend in this maze folds to the explorer's left; right turns face dead walls.",
            2: "Always stepping crashes at the first bend; check the tile ahead first.",
            3: "Turning on every tile leaves the corridor; turn only when the way ahead is blocked.",
        },
    ),
    "T11": (
        "The corridor keeps bending. What should the explorer decide at every step?",
        [
            "If the way ahead is clear, step; otherwise turn right",
            "If the way ahead is clear, step; otherwise turn left",
            "Always step forward",
            "Turn right and step, at every tile",
        ],
        0,
        {
            1: "Every bend in this maze folds to the explorer's right; left turns face dead walls.",
            2: "Always stepping crashes at the first bend; check the tile ahead first.",
            3: "Turning on every tile leaves the corridor; turn only when the way ahead is blocked.",
        },
    ),
    "T12": (
        "This maze bends both ways. Which full rule always works here?",
        [
            "Step if clear ahead; otherwise turn left if the left is open, else turn right",
            "Step if clear ahead; otherwise always turn left",
            "Step if clear ahead; otherwise always turn right",
            "Always step forward",
        ],
        0,
        {
            1: "One bend opens only to the right; always turning left walks the explorer backwards.",
            2: "One bend opens only to the left; always turning right walks the explorer backwards.",
            3: "Always stepping crashes at the first bend; the rule must look before it moves.",
        },
    ),
}

SOLUTION_FINDING = {
    "T01": (
        "Which code brings the explorer to the goal?",
        [
            "move move turn_left move move",
            "move move turn_right move move",
            "move move move move",
            "turn_right move move move move",
        ],
        1,
        {
            0: "The left turn points at the top wall; step through it line by line at the bend.",
            2: "Without a turn the third move crashes into the wall after the bend.",
            3: "Turning right before walking faces a wall, so the first move already crashes.",
        },
    ),
    "T02": (
        "Which code reaches the goal within the block limit?",
        [
            "repeat 3 { move }",
            "move move move",
            "repeat 4 { move }",
            "repeat 4 { turn_right }",
        ],
        2,
        {
            0: "Three repetitions stop one tile before the goal; count the tiles again.",
            1: "Three single moves stop short, and unrolled moves waste the block budget.",
            3: "Repeating a turn spins in place; the loop body must move the explorer.",
        },
    ),
    "T03": (
        "Which code reaches the goal?",
        [
            "repeat 4 { move } turn_right move",
            "repeat 4 { move } turn_left move",
            "repeat 5 { move }",
            "repeat 3 { move } turn_right move",
        ],
        0,
        {
            1: "After the loop the goal is below the corridor; a left turn faces the wrong way.",
            2: "The fifth move crashes into the wall at the corridor's end; a turn is needed.",
            3: "Three loop rounds stop before the corner, so the turn happens too early.",
        },
    ),
    "T04": (
        "Two runs, one corner. Which code is right?",
        [
            "repeat 8 { move }",
            "repeat 4 { move } turn_left repeat 4 { move }",
            "repeat 4 { move turn_right move }",
            "repeat 4 { move } turn_right repeat 4 { move }",
        ],
        3,
        {
            0: "Eight straight moves crash at the corner; the path turns after four tiles.",
            1: "The left turn at the corner faces the top edge; the goal lies to the south.",
            2: "Turning inside every loop round zigzags into walls; turn once, between the runs.",
        },
    ),
    "T05": (
        "Which loop descends the staircase?",
        [
            "repeat 3 { move turn_right move turn_left }",
            "repeat 3 { move turn_left move turn_right }",
            "repeat 3 { move move turn_right }",
            "repeat 4 { move turn_right }",
        ],
        0,
        {
            1: "The first turn must be to the right; turning left climbs into the top wall.",
            2: "Two moves in a row overshoot each stair; every landing is one tile.",
            3: "Without the closing left turn the explorer keeps facing down and leaves the stairs.",
        },
    ),
    "T06": (
        "Which code works no matter how long the corridor is?",
        [
            "repeat 4 { move }",
            "repeat_until_goal { move }",
            "move move move",
            "repeat_until_goal { turn_left move }",
        ],
        1,
        {
            0: "Four moves stop short of this goal; the loop should run until the goal is reached.",
            2: "Three moves stop short, and listing moves one by one breaks the block limit.",
            3: "The extra left turn aims at the corridor wall, so the first move crashes.",
        },
    ),
    "T07": (
        "Which code matches the plan: east first, then north until the goal?",
        [
            "move move turn_left repeat_until_goal { move }",
            "move move turn_right repeat_until_goal { move }",
            "repeat_until_goal { move }",
            "move turn_left repeat_until_goal { move }",
        ],
        0,
        {
            1: "A right turn after two tiles faces the bottom edge; the open corridor is upward.",
            2: "Without the turn the explorer crashes at the end of the short east corridor.",
            3: "Turning after one tile faces a wall; the upward opening comes one tile later.",
        },
    ),
    "T08": (
        "Which loop follows the corridor with its right-side openings?",
        [
            "repeat_until_goal { move }",
            "repeat_until_goal { if path_left { turn_left } move }",
            "repeat_until_goal { turn_right move }",
            "repeat_until_goal { if path_right { turn_right } move }",
        ],
        3,
        {
            0: "With no turns at all the explorer runs past the first opening and crashes.",
            1: "This maze never opens on the left, so that check never fires and the run crashes.",
            2: "Turning right on every tile leaves the corridor immediately; turn only at openings.",
        },
    ),
    "T09": (
        "Which loop follows the corridor with its left-side openings?",
        [
            "repeat_until_goal { if path_left { turn_left } move }",
            "repeat_until_goal { if path_right { turn_right } move }",
            "repeat_until_goal { move }",
            "repeat_until_goal { turn_left move }",
        ],
        0,
        {
            1: "This maze never opens on the right, so that check never fires and the run crashes.",
            2: "With no turns at all the explorer runs past the first opening and crashes.",
            3: "Turning left on every tile spins into the wall; turn only where a path opens.",
        },
    ),
    "T10": (
        "Which code bends with the corridor?",
        [
            "repeat_until_goal { move }",
            "repeat_until_goal { if_else path_ahead { move } else { turn_left } }",
            "repeat_until_goal { if_else path_ahead { move } else { turn_right } }",
            "repeat_until_goal { turn_left move }",
        ],
        1,
        {
            0: "Plain moving crashes at the first bend; the code must react to the wall ahead.",
            2: "The bends here fold left; turning right at a wall spins the explorer backwards.",
            3: "Turning before every step leaves the corridor at once; only turn at walls.",
        },
    ),
    "T11": (
        "Which code bends with the corridor?",
        [
            "repeat_until_goal { if_else path_ahead { move } else { turn_right } }",
            "repeat_until_goal { if_else path_ahead { move } else { turn_left } }",
            "repeat_until_goal { move }",
            "repeat_until_goal { turn_right move }",
        ],
        0,
        {
            1: "The bends here fold right; turning left at a wall spins the explorer backwards.",
            2: "Plain moving crashes at the first bend; the code must react to the wall ahead.",
            3: "Turning before every step leaves the corridor at once; only turn at walls.",
        },
    ),
    "T12": (
        "The corridor bends both ways. Which code handles every corner?",
        [
            "repeat_until_goal { if_else path_ahead { move } else { turn_left } }",
            "repeat_until_goal { if_else path_ahead { move } else "
            "{ if_else path_left { turn_left } else { turn_right } } }",
            "repeat_until_goal { if_else path_ahead { move } else { turn_right } }",
            "repeat_until_goal { move }",
        ],
        1,
        {
            0: "One corner only opens rightward; always turning left walks back down the corridor.",
            2: "The first corner only opens leftward; always turning right walks the explorer backwards.",
            3: "Plain moving crashes at the very first corner; the code has to check the walls.",
        },
    ),
}


# where each quiz's correct option should land, so answers do not pattern up
PLANNING_CORRECT_AT = {
    "T01": 2, "T02": 1, "T03": 0, "T04": 3, "T05": 1, "T06": 0,
    "T07": 2, "T08": 3, "T09": 0, "T10": 1, "T11": 2, "T12": 0,
}


def place_correct_at(quiz: tuple, target: int) -> tuple:
    prompt, options, correct, feedback = quiz
    order = list(range(4))
    order.remove(correct)
    order.insert(target, correct)
    new_options = [options[i] for i in order]
    new_feedback = {
        order.index(old): text for old, text in feedback.items()
    }
    return prompt, new_options, target, new_feedback


def main() -> None:
    catalog = bundled_catalog()
    content: dict[str, dict] = {}
    for task in catalog.learning:
        plan = place_correct_at(PLANNING[task.id], PLANNING_CORRECT_AT[task.id])
        solve = SOLUTION_FINDING[task.id]
        for quiz, stage in ((plan, "planning"), (solve, "solution_finding")):
            prompt, options, correct, feedback = quiz
            assert len(options) == 4, (task.id, stage)
            assert 0 <= correct < 4
            assert set(feedback) == {i for i in range(4) if i != correct}, (task.id, stage)
        # every code option must parse; the marked one solves, the others fail
        prompt, options, correct, feedback = solve
        for i, text in enumerate(options):
            program = parse_program(text)
            solves = is_solution(program, task)
            assert solves == (i == correct), (task.id, i, text, solves)
        content[task.id] = {
            "task_id": task.id,
            "planning": {
                "prompt": plan[0],
                "options": plan[1],
                "correct": plan[2],
                "feedback": {str(k): v for k, v in plan[3].items()},
            },
            "solution_finding": {
                "prompt": solve[0],
                "options": solve[1],
                "correct": solve[2],
                "feedback": {str(k): v for k, v in solve[3].items()},
            },
        }
    records = [content[tid] for tid in sorted(content)]
    out = Path(__file__).resolve().parents[1] / "src" / "maze_mentor" / "data" / "plan_quizzes.json"
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(records, fh, indent=2)
        fh.write("\n")
    print(f"wrote {2 * len(records)} quizzes for {len(records)} tasks to {out}")


if __name__ == "__main__":
    main()
