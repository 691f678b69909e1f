"""Regenerate the bundled task catalog under src/maze_mentor/data/tasks/.

Every grid is authored for this project. Solutions are written in the DSL,
executed against their grids, and the full catalog is revalidated before
anything is written to disk.
"""

from __future__ import annotations

import json
from pathlib import Path

from maze_mentor.catalog import (
    COMMON_PL_IDS,
    DUPLICATE_PAIRS,
    EASY_L_IDS,
    EASY_PL_IDS,
    EXPECTED_CONCEPTS,
    NEW_PL_IDS,
    _check_catalog,
    task_from_record,
    task_to_record,
)

BASICS = ["move", "turn_left", "turn_right"]

# id -> (rows, start_dir, palette extras, block_limit, solution)
TASKS: dict[str, tuple[list[str], str, list[str], int, str]] = {
    "T01": (
        ["S..#", "##.#", "##G#"],
        "E",
        [],
        6,
        "move move turn_right move move",
    ),
    "T02": (
        ["S...G"],
        "E",
        ["repeat"],
        3,
        "repeat 4 { move }",
    ),
    "T03": (
        ["S....", "####G"],
        "E",
        ["repeat"],
        5,
        "repeat 4 { move } turn_right move",
    ),
    "T04": (
        ["S....", "####.", "####.", "####.", "####G"],
        "E",
        ["repeat"],
        7,
        "repeat 4 { move } turn_right repeat 4 { move }",
    ),
    "T05": (
        ["S.##", "#..#", "##..", "###G"],
        "E",
        ["repeat"],
        6,
        "repeat 3 { move turn_right move turn_left }",
    ),
    "T06": (
        ["S.....G"],
        "E",
        ["repeat", "repeat_until_goal"],
        3,
        "repeat_until_goal { move }",
    ),
    "T07": (
        ["##G##", "##.##", "##.##", "##.##", "S..##"],
        "E",
        ["repeat", "repeat_until_goal"],
        5,
        "move move turn_left repeat_until_goal { move }",
    ),
    "T08": (
        ["S....", "####.", "#G..."],
        "E",
        ["repeat_until_goal", "if"],
        5,
        "repeat_until_goal { if path_right { turn_right } move }",
    ),
    "T09": (
        ["G...", "###.", "###.", "S..."],
        "E",
        ["repeat_until_goal", "if"],
        5,
        "repeat_until_goal { if path_left { turn_left } move }",
    ),
    "T10": (
        ["G....", "####.", "####.", "####.", "S...."],
        "E",
        ["repeat_until_goal", "if_else"],
        5,
        "repeat_until_goal { if_else path_ahead { move } else { turn_left } }",
    ),
    "T11": (
        ["S....", "####.", "####.", "####.", "G...."],
        "E",
        ["repeat_until_goal", "if_else"],
        5,
        "repeat_until_goal { if_else path_ahead { move } else { turn_right } }",
    ),
    "T12": (
        ["####G", "####.", "####.", "##...", "##.##", "S..##"],
        "E",
        ["repeat_until_goal", "if_else"],
        6,
        "repeat_until_goal { if_else path_ahead { move } "
        "else { if_else path_left { turn_left } else { turn_right } } }",
    ),
    "P03": (
        ["G....S"],
        "W",
        ["repeat", "repeat_until_goal"],
        3,
        "repeat_until_goal { move }",
    ),
    "P08": (
        ["#.G", "S.#"],
        "E",
        [],
        5,
        "move turn_left move turn_right move",
    ),
    "P09": (
        ["##G", "##.", "##.", "##.", "##S"],
        "E",
        ["repeat", "repeat_until_goal"],
        3,
        "turn_left repeat_until_goal { move }",
    ),
    "P10": (
        ["S...", "###.", "G..."],
        "E",
        ["repeat_until_goal", "if"],
        5,
        "repeat_until_goal { if path_right { turn_right } move }",
    ),
    "P11": (
        ["S...###", "###.###", "###.###", "###...G"],
        "E",
        ["repeat"],
        8,
        "repeat 3 { move } turn_right repeat 3 { move } turn_left repeat 3 { move }",
    ),
    "P12": (
        ["S.....", "###.##", "###.##", "###.##", "###.##", "###G##"],
        "E",
        ["repeat", "repeat_until_goal"],
        5,
        "repeat 3 { move } turn_right repeat_until_goal { move }",
    ),
    "P13": (
        ["G..", "##.", "S.."],
        "E",
        ["repeat"],
        4,
        "repeat 3 { repeat 2 { move } turn_left }",
    ),
    "P14": (
        ["S.#", "#.#", "G.#"],
        "E",
        ["repeat", "if"],
        4,
        "repeat 4 { move if path_right { turn_right } }",
    ),
    "P15": (
        ["S..##", "##.##", "##...", "####.", "####G"],
        "E",
        ["repeat_until_goal", "if_else"],
        6,
        "repeat_until_goal { if_else path_ahead { move } "
        "else { if_else path_left { turn_left } else { turn_right } } }",
    ),
}


def build_records() -> list[dict]:
    records = {}
    for tid, (rows, start_dir, extras, limit, solution) in TASKS.items():
        records[tid] = {
            "id": tid,
            "grid": {"rows": rows, "start_dir": start_dir},
            "palette": BASICS + extras,
            "block_limit": limit,
            "solution": solution,
            "concepts": list(EXPECTED_CONCEPTS[tid]),
            "grid_provenance": "authored",
        }
    for dup, original in DUPLICATE_PAIRS.items():
        rec = dict(records[original])
        rec["id"] = dup
        rec["concepts"] = list(EXPECTED_CONCEPTS[dup])
        records[dup] = rec
    for tid, rec in records.items():
        if tid.startswith("T"):
            rec["difficulty"] = "Easy_L" if tid in EASY_L_IDS else "Hard_L"
        else:
            rec["difficulty"] = "Easy_PL" if tid in EASY_PL_IDS else "Hard_PL"
            if tid in COMMON_PL_IDS:
                rec["novelty"] = "Common_PL"
            elif tid in NEW_PL_IDS:
                rec["novelty"] = "New_PL"
    return [records[tid] for tid in sorted(records)]


def main() -> None:
    records = build_records()
    tasks = [task_from_record(r) for r in records]
    _check_catalog(tasks)
    out_dir = Path(__file__).resolve().parents[1] / "src" / "maze_mentor" / "data" / "tasks"
    out_dir.mkdir(parents=True, exist_ok=True)
    for task in tasks:
        rec = task_to_record(task)
        with open(out_dir / f"{task.id}.json", "w", encoding="utf-8") as fh:
            json.dump(rec, fh, indent=2)
            fh.write("\n")
    print(f"wrote {len(tasks)} task files to {out_dir}")


if __name__ == "__main__":
    main()
