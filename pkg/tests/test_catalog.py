from __future__ import annotations

import json
import shutil
from pathlib import Path

import pytest

from maze_mentor.blocks import Program, parse_program
from maze_mentor.catalog import (
    COMMON_PL_IDS,
    DUPLICATE_PAIRS,
    EASY_L_IDS,
    EASY_PL_IDS,
    EXPECTED_CONCEPTS,
    NEW_PL_IDS,
    CatalogError,
    bundled_catalog,
    is_solution,
    load_task_catalog,
    validate_program,
)

BUNDLED_DIR = Path(__file__).resolve().parents[1] / "src" / "maze_mentor" / "data" / "tasks"


def test_bundled_counts(catalog):
    assert len(catalog) == 27
    assert [t.id for t in catalog.learning] == [f"T{i:02d}" for i in range(1, 13)]
    assert [t.id for t in catalog.post_learning] == [f"P{i:02d}" for i in range(1, 16)]


def test_every_solution_solves_its_task(catalog):
    for task in catalog.tasks:
        assert is_solution(task.solution, task), task.id


def test_concept_rows_match_curriculum_table(catalog):
    for task in catalog.tasks:
        assert task.concepts == EXPECTED_CONCEPTS[task.id], task.id


def test_difficulty_categories(catalog):
    for task in catalog.tasks:
        if task.id.startswith("T"):
            expected = "Easy_L" if task.id in EASY_L_IDS else "Hard_L"
        else:
            expected = "Easy_PL" if task.id in EASY_PL_IDS else "Hard_PL"
        assert task.difficulty == expected, task.id


def test_novelty_categories(catalog):
    for task in catalog.post_learning:
        if task.id in COMMON_PL_IDS:
            assert task.novelty == "Common_PL"
        elif task.id in NEW_PL_IDS:
            assert task.novelty == "New_PL"
        else:
            assert task.novelty is None


def test_duplicated_tasks_structurally_identical(catalog):
    for dup, original in DUPLICATE_PAIRS.items():
        a, b = catalog[dup], catalog[original]
        assert a.grid == b.grid
        assert a.solution == b.solution
        assert a.palette == b.palette
        assert a.block_limit == b.block_limit


def test_missing_task_rejected(tmp_path):
    shutil.copytree(BUNDLED_DIR, tmp_path / "catalog")
    (tmp_path / "catalog" / "P12.json").unlink()
    with pytest.raises(CatalogError, match="P12"):
        load_task_catalog(tmp_path / "catalog")


def test_duplication_constraint_rejected(tmp_path):
    shutil.copytree(BUNDLED_DIR, tmp_path / "catalog")
    p06 = json.loads((tmp_path / "catalog" / "P06.json").read_text())
    p06["block_limit"] = p06["block_limit"] + 1  # still solvable, no longer a twin
    (tmp_path / "catalog" / "P06.json").write_text(json.dumps(p06))
    with pytest.raises(CatalogError, match="structurally identical"):
        load_task_catalog(tmp_path / "catalog")


def test_unsolvable_solution_rejected(tmp_path):
    shutil.copytree(BUNDLED_DIR, tmp_path / "catalog")
    t06 = json.loads((tmp_path / "catalog" / "T06.json").read_text())
    t06["solution"] = "turn_left"
    (tmp_path / "catalog" / "T06.json").write_text(json.dumps(t06))
    with pytest.raises(CatalogError, match="does not solve"):
        load_task_catalog(tmp_path / "catalog")


def test_validate_palette_violation(catalog):
    t01 = catalog["T01"]  # palette has no repeat
    report = validate_program(parse_program("repeat 4 { move }"), t01)
    kinds = [v.kind for v in report.violations]
    assert kinds == ["palette"]


def test_validate_block_limit_violation(catalog):
    t02 = catalog["T02"]  # limit 3
    report = validate_program(parse_program("move move move move"), t02)
    assert [v.kind for v in report.violations] == ["block_limit"]


def test_validate_repeat_count_flagged(catalog):
    t02 = catalog["T02"]
    report = validate_program(parse_program("repeat 12 { move }"), t02)
    assert [v.kind for v in report.violations] == ["repeat_count"]


def test_validate_solution_clean(catalog):
    for task in catalog.tasks:
        assert validate_program(task.solution, task).ok, task.id


def test_is_solution_negative_cases(catalog):
    assert not is_solution(Program(), catalog["T01"])
    assert not is_solution(catalog["T01"].solution, catalog["T12"])


def test_grid_provenance_recorded(catalog):
    assert all(t.grid_provenance == "authored" for t in catalog.tasks)
