from __future__ import annotations

import random

import pytest
from hypothesis import strategies as st

from maze_mentor.blocks import (
    ALL_KINDS,
    BASIC_KINDS,
    CONDITIONS,
    Block,
    Program,
)
from maze_mentor.catalog import bundled_catalog

FULL_PALETTE = frozenset(ALL_KINDS)


@pytest.fixture(scope="session")
def catalog():
    return bundled_catalog()


# ---------------------------------------------------------------------------
# Seeded random program generation (plain `random`, independent of numpy)


def random_program(
    rng: random.Random,
    max_depth: int = 4,
    max_size: int = 20,
    kinds: tuple[str, ...] = ALL_KINDS,
) -> Program:
    budget = rng.randint(0, max_size)

    def gen_sequence(depth: int, budget: int) -> tuple[list[Block], int]:
        blocks: list[Block] = []
        while budget > 0 and rng.random() < 0.7:
            block, budget = gen_block(depth, budget)
            if block is None:
                break
            blocks.append(block)
        return blocks, budget

    def gen_block(depth: int, budget: int):
        if budget <= 0:
            return None, budget
        choices = [k for k in kinds if depth < max_depth or k in BASIC_KINDS]
        kind = rng.choice(choices)
        budget -= 1
        if kind in BASIC_KINDS:
            return Block(kind), budget
        if kind == "repeat":
            body, budget = gen_sequence(depth + 1, budget)
            return Block("repeat", count=rng.randint(2, 9), body=tuple(body)), budget
        if kind == "repeat_until_goal":
            body, budget = gen_sequence(depth + 1, budget)
            return Block("repeat_until_goal", body=tuple(body)), budget
        if kind == "if":
            body, budget = gen_sequence(depth + 1, budget)
            return Block("if", cond=rng.choice(CONDITIONS), body=tuple(body)), budget
        body, budget = gen_sequence(depth + 1, budget)
        else_body, budget = gen_sequence(depth + 1, budget)
        return (
            Block(
                "if_else",
                cond=rng.choice(CONDITIONS),
                body=tuple(body),
                else_body=tuple(else_body),
            ),
            budget,
        )

    blocks, _ = gen_sequence(0, budget)
    return Program(tuple(blocks))


def random_programs(seed: int, count: int, **kwargs) -> list[Program]:
    rng = random.Random(seed)
    return [random_program(rng, **kwargs) for _ in range(count)]


# ---------------------------------------------------------------------------
# Hypothesis strategy mirroring the generator


def block_strategy(depth: int = 0):
    basic = st.sampled_from(BASIC_KINDS).map(Block)
    if depth >= 3:
        return basic
    child_seq = st.lists(block_strategy(depth + 1), max_size=3).map(tuple)
    repeat = st.tuples(st.integers(2, 9), child_seq).map(
        lambda t: Block("repeat", count=t[0], body=t[1])
    )
    rug = child_seq.map(lambda b: Block("repeat_until_goal", body=b))
    if_ = st.tuples(st.sampled_from(CONDITIONS), child_seq).map(
        lambda t: Block("if", cond=t[0], body=t[1])
    )
    if_else = st.tuples(st.sampled_from(CONDITIONS), child_seq, child_seq).map(
        lambda t: Block("if_else", cond=t[0], body=t[1], else_body=t[2])
    )
    return st.one_of(basic, repeat, rug, if_, if_else)


programs = st.lists(block_strategy(), max_size=6).map(lambda bs: Program(tuple(bs)))


# ---------------------------------------------------------------------------
# Inverse-edit corruption used by hint and quiz tests


def inverse_corrupt(solution: Program, palette, k: int, rng: random.Random) -> Program:
    from maze_mentor.tree_metrics import _all_sequence_variants

    blocks = solution.blocks
    for _ in range(k):
        variants = list(_all_sequence_variants(blocks, frozenset(palette)))
        blocks = rng.choice(variants)
    return Program(blocks)
