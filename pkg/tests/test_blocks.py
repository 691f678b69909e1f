from __future__ import annotations

import pytest
from hypothesis import given, settings

from maze_mentor.blocks import (
    Block,
    ParseError,
    Program,
    parse_program,
    program_from_wire,
    program_to_wire,
    serialize_program,
)

from .conftest import programs, random_programs


def test_parse_repeat():
    p = parse_program("repeat 4 { move }")
    assert p == Program((Block("repeat", count=4, body=(Block("move"),)),))


def test_parse_adjacent_blocks_without_separator():
    p = parse_program("move move")
    assert [b.kind for b in p.blocks] == ["move", "move"]


def test_parse_separators_newline_and_semicolon():
    assert parse_program("move; turn_left") == parse_program("move\nturn_left")


def test_parse_unbalanced_brace():
    with pytest.raises(ParseError) as err:
        parse_program("repeat 4 { move")
    assert err.value.line == 1


def test_parse_unknown_kind_rejected():
    with pytest.raises(ParseError, match="unknown block"):
        parse_program("hop")


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as err:
        parse_program("move\nrepeat x { move }")
    assert err.value.line == 2


def test_parse_bad_condition():
    with pytest.raises(ParseError, match="condition"):
        parse_program("if wall_ahead { move }")


def test_parse_zero_count():
    with pytest.raises(ParseError, match="positive"):
        parse_program("repeat 0 { move }")


def test_parse_count_outside_palette_range_is_parse_valid():
    # validation flags these later; the grammar accepts any positive count
    assert parse_program("repeat 12 { move }").blocks[0].count == 12


def test_parse_empty_input_gives_empty_program():
    assert parse_program("") == Program()
    assert parse_program("  \n ; ") == Program()


def test_serialize_single_move():
    assert serialize_program(Program((Block("move"),))) == "move\n"


def test_serialize_golden_nested_if_else():
    text = (
        "repeat_until_goal {\n"
        "  if_else path_ahead {\n"
        "    move\n"
        "  }\n"
        "  else {\n"
        "    if_else path_left {\n"
        "      turn_left\n"
        "    }\n"
        "    else {\n"
        "      turn_right\n"
        "    }\n"
        "  }\n"
        "}\n"
    )
    assert parse_program(text).text == text


def test_round_trip_seeded_generator():
    for p in random_programs(seed=11, count=300, max_depth=4, max_size=20):
        assert parse_program(serialize_program(p)) == p


@settings(max_examples=200, deadline=None)
@given(programs)
def test_round_trip_property(p):
    assert parse_program(serialize_program(p)) == p


@settings(max_examples=100, deadline=None)
@given(programs)
def test_wire_round_trip(p):
    assert program_from_wire(program_to_wire(p)) == p


def test_wire_shape():
    p = parse_program("if_else path_left { move } else { turn_right }")
    wire = program_to_wire(p)
    assert wire == [
        {
            "kind": "if_else",
            "cond": "path_left",
            "body": [{"kind": "move"}],
            "else_body": [{"kind": "turn_right"}],
        }
    ]


def test_block_invariants_enforced():
    with pytest.raises(ValueError):
        Block("move", count=3)
    with pytest.raises(ValueError):
        Block("repeat")
    with pytest.raises(ValueError):
        Block("if", cond="path_ahead", else_body=(Block("move"),))
    with pytest.raises(ValueError):
        Block("repeat", count=2, cond="path_ahead")


def test_node_count_and_walk():
    p = parse_program("repeat 3 { move turn_left } move")
    assert p.node_count() == 4
    assert [b.kind for b in p.walk()] == ["repeat", "move", "turn_left", "move"]
