"""Ordered-tree edit distance and edit neighborhoods over maze programs.

Programs are viewed as ordered labeled trees under a virtual root. Node
labels are (kind, count, cond) tuples; an if_else block additionally carries
an '@else' separator leaf between its two bodies so that structurally
different branch splits never collapse to the same tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .blocks import (
    BASIC_KINDS,
    CONDITIONS,
    IF,
    IF_ELSE,
    MAX_REPEAT,
    MIN_REPEAT,
    REPEAT,
    REPEAT_UNTIL_GOAL,
    Block,
    Program,
    serialize_program,
)

ROOT_LABEL = ("@program", None, None)
ELSE_LABEL = ("@else", None, None)

WRAP_REPEAT_COUNT = MIN_REPEAT  # wrapping always introduces `repeat 2`


# ---------------------------------------------------------------------------
# Tree views


def _zs_children(block: Block) -> tuple:
    kids = tuple(_zs_node(c) for c in block.body)
    if block.kind == IF_ELSE:
        kids = kids + ((ELSE_LABEL, ()),) + tuple(_zs_node(c) for c in block.else_body)
    return kids


def _zs_node(block: Block) -> tuple:
    return (block.label, _zs_children(block))


def zs_tree(program: Program) -> tuple:
    """(label, children) view used by the distance algorithms."""
    return (ROOT_LABEL, tuple(_zs_node(b) for b in program.blocks))


def zs_size(program: Program) -> int:
    """Node count of the tree view, virtual root excluded."""

    def size(node: tuple) -> int:
        return 1 + sum(size(c) for c in node[1])

    return sum(size(c) for c in zs_tree(program)[1])


def _block_from_zs(node: tuple) -> Block:
    label, children = node
    kind, count, cond = label
    if kind == IF_ELSE:
        split = [i for i, c in enumerate(children) if c[0] == ELSE_LABEL]
        if len(split) != 1:
            raise ValueError("if_else node needs exactly one '@else' separator")
        i = split[0]
        if children[i][1]:
            raise ValueError("'@else' separator cannot have children")
        return Block(
            kind,
            cond=cond,
            body=tuple(_block_from_zs(c) for c in children[:i]),
            else_body=tuple(_block_from_zs(c) for c in children[i + 1 :]),
        )
    if kind == "@else" or kind == "@program":
        raise ValueError(f"marker label {kind!r} where a block was expected")
    return Block(kind, count=count, cond=cond, body=tuple(_block_from_zs(c) for c in children))


def program_from_zs(root: tuple) -> Program:
    label, children = root
    if label != ROOT_LABEL:
        raise ValueError("tree root must carry the program label")
    return Program(tuple(_block_from_zs(c) for c in children))


# ---------------------------------------------------------------------------
# Zhang-Shasha distance


class _Annotated:
    """Postorder node labels, leftmost-leaf descendants, and keyroots."""

    def __init__(self, root: tuple):
        self.labels: list[tuple] = []
        self.lmds: list[int] = []
        lmd_seen: dict[int, int] = {}

        def visit(node: tuple) -> int:
            label, children = node
            if children:
                first = None
                for c in children:
                    idx = visit(c)
                    if first is None:
                        first = idx
                lmd = self.lmds[first]
            else:
                lmd = len(self.labels)
            self.labels.append(label)
            self.lmds.append(lmd)
            return len(self.labels) - 1

        visit(root)
        for i, lmd in enumerate(self.lmds):
            lmd_seen[lmd] = i
        self.keyroots = sorted(lmd_seen.values())

    def __len__(self) -> int:
        return len(self.labels)


def _zs_distance(a_root: tuple, b_root: tuple) -> int:
    A = _Annotated(a_root)
    B = _Annotated(b_root)
    treedists = [[0] * len(B) for _ in range(len(A))]

    def treedist(i: int, j: int) -> None:
        al, bl = A.lmds, B.lmds
        m = i - al[i] + 2
        n = j - bl[j] + 2
        fd = [[0] * n for _ in range(m)]
        ioff = al[i] - 1
        joff = bl[j] - 1
        for x in range(1, m):
            fd[x][0] = fd[x - 1][0] + 1
        for y in range(1, n):
            fd[0][y] = fd[0][y - 1] + 1
        for x in range(1, m):
            for y in range(1, n):
                if al[i] == al[x + ioff] and bl[j] == bl[y + joff]:
                    cost = 0 if A.labels[x + ioff] == B.labels[y + joff] else 1
                    fd[x][y] = min(
                        fd[x - 1][y] + 1,
                        fd[x][y - 1] + 1,
                        fd[x - 1][y - 1] + cost,
                    )
                    treedists[x + ioff][y + joff] = fd[x][y]
                else:
                    p = al[x + ioff] - 1 - ioff
                    q = bl[y + joff] - 1 - joff
                    fd[x][y] = min(
                        fd[x - 1][y] + 1,
                        fd[x][y - 1] + 1,
                        fd[p][q] + treedists[x + ioff][y + joff],
                    )

    for i in A.keyroots:
        for j in B.keyroots:
            treedist(i, j)
    return treedists[-1][-1]


@lru_cache(maxsize=1 << 16)
def ted(a: Program, b: Program) -> int:
    """Zhang-Shasha ordered tree edit distance with unit costs.

    Symmetric, zero exactly on structural equality, and satisfies the
    triangle inequality.
    """
    if a == b:
        return 0
    return _zs_distance(zs_tree(a), zs_tree(b))


# ---------------------------------------------------------------------------
# Minimal edit scripts (forest recursion with backtracking)


@dataclass(frozen=True)
class Relabel:
    path: tuple[int, ...]
    label: tuple


@dataclass(frozen=True)
class Delete:
    path: tuple[int, ...]


@dataclass(frozen=True)
class Insert:
    parent_path: tuple[int, ...]
    index: int
    label: tuple
    adopt: int


@dataclass(frozen=True)
class EditScript:
    """Ordered edits transforming one program's tree into another's."""

    edits: tuple

    @property
    def cost(self) -> int:
        return len(self.edits)


class _Indexed:
    def __init__(self, root: tuple):
        self.labels: list[tuple] = []
        self.children: list[tuple[int, ...]] = []
        self.paths: list[tuple[int, ...]] = []
        self.parents: list[int] = []
        self.sizes: list[int] = []

        def build(node: tuple, path: tuple[int, ...], parent: int) -> int:
            idx = len(self.labels)
            self.labels.append(node[0])
            self.children.append(())
            self.paths.append(path)
            self.parents.append(parent)
            self.sizes.append(1)
            kids = []
            for i, c in enumerate(node[1]):
                kids.append(build(c, path + (i,), idx))
            self.children[idx] = tuple(kids)
            self.sizes[idx] = 1 + sum(self.sizes[k] for k in kids)
            return idx

        self.root = build(root, (), -1)


def _forest_distance(src: _Indexed, dst: _Indexed):
    memo: dict[tuple, int] = {}
    choice: dict[tuple, tuple] = {}

    def d(f1: tuple[int, ...], f2: tuple[int, ...]) -> int:
        key = (f1, f2)
        if key in memo:
            return memo[key]
        if not f1 and not f2:
            memo[key] = 0
            choice[key] = ("done",)
            return 0
        if not f1:
            cost = sum(dst.sizes[w] for w in f2)
            memo[key] = cost
            choice[key] = ("ins_all",)
            return cost
        if not f2:
            cost = sum(src.sizes[v] for v in f1)
            memo[key] = cost
            choice[key] = ("del_all",)
            return cost
        v = f1[-1]
        w = f2[-1]
        match = (
            d(f1[:-1], f2[:-1])
            + d(src.children[v], dst.children[w])
            + (0 if src.labels[v] == dst.labels[w] else 1)
        )
        delete = d(f1[:-1] + src.children[v], f2) + 1
        insert = d(f1, f2[:-1] + dst.children[w]) + 1
        best = min(match, delete, insert)
        memo[key] = best
        if best == match:
            choice[key] = ("match", v, w)
        elif best == delete:
            choice[key] = ("delete", v)
        else:
            choice[key] = ("insert", w)
        return best

    cost = d((src.root,), (dst.root,))
    matched: list[tuple[int, int]] = []
    deleted: list[int] = []
    inserted: list[int] = []

    def subtree(tree: _Indexed, n: int) -> list[int]:
        out = [n]
        for c in tree.children[n]:
            out.extend(subtree(tree, c))
        return out

    def walk(f1: tuple[int, ...], f2: tuple[int, ...]) -> None:
        decision = choice[(f1, f2)]
        if decision[0] == "done":
            return
        if decision[0] == "ins_all":
            for w in f2:
                inserted.extend(subtree(dst, w))
            return
        if decision[0] == "del_all":
            for v in f1:
                deleted.extend(subtree(src, v))
            return
        if decision[0] == "match":
            _, v, w = decision
            matched.append((v, w))
            walk(src.children[v], dst.children[w])
            walk(f1[:-1], f2[:-1])
        elif decision[0] == "delete":
            v = decision[1]
            deleted.append(v)
            walk(f1[:-1] + src.children[v], f2)
        else:
            w = decision[1]
            inserted.append(w)
            walk(f1, f2[:-1] + dst.children[w])

    walk((src.root,), (dst.root,))
    return cost, matched, deleted, inserted


def edit_script(a: Program, b: Program) -> EditScript:
    """A minimal edit script; its length equals ted(a, b)."""
    src = _Indexed(zs_tree(a))
    dst = _Indexed(zs_tree(b))
    _, matched, deleted, inserted = _forest_distance(src, dst)

    edits: list = []
    matched_dst = {w for _, w in matched}
    for v, w in sorted(matched, key=lambda p: src.paths[p[0]]):
        if src.labels[v] != dst.labels[w]:
            edits.append(Relabel(src.paths[v], dst.labels[w]))
    for v in sorted(deleted, key=lambda v: (len(src.paths[v]), src.paths[v]), reverse=True):
        edits.append(Delete(src.paths[v]))

    def contracted_width(w: int) -> int:
        if w in matched_dst:
            return 1
        return sum(contracted_width(c) for c in dst.children[w])

    for w in sorted(inserted, key=lambda w: (len(dst.paths[w]), dst.paths[w])):
        parent = dst.parents[w]
        adopt = sum(contracted_width(c) for c in dst.children[w])
        edits.append(Insert(dst.paths[parent], dst.paths[w][-1], dst.labels[w], adopt))
    return EditScript(tuple(edits))


def apply_edit_script(a: Program, script: EditScript) -> Program:
    """Apply an edit script; a script from edit_script(a, b) yields b."""

    def to_mutable(node: tuple) -> list:
        return [node[0], [to_mutable(c) for c in node[1]]]

    def to_tuple(node: list) -> tuple:
        return (node[0], tuple(to_tuple(c) for c in node[1]))

    root = to_mutable(zs_tree(a))

    def locate(path: tuple[int, ...]) -> list:
        node = root
        for i in path:
            node = node[1][i]
        return node

    for edit in script.edits:
        if isinstance(edit, Relabel):
            locate(edit.path)[0] = edit.label
        elif isinstance(edit, Delete):
            if not edit.path:
                raise ValueError("cannot delete the virtual root")
            parent = locate(edit.path[:-1])
            i = edit.path[-1]
            node = parent[1][i]
            parent[1][i : i + 1] = node[1]
        elif isinstance(edit, Insert):
            parent = locate(edit.parent_path)
            i, n = edit.index, edit.adopt
            adopted = parent[1][i : i + n]
            parent[1][i : i + n] = [[edit.label, adopted]]
        else:
            raise TypeError(f"unknown edit {edit!r}")
    return program_from_zs(to_tuple(root))


# ---------------------------------------------------------------------------
# Rooted subtrees: the rightmost-leaf deletion chain


def _drop_last_preorder(blocks: tuple[Block, ...]) -> tuple[Block, ...]:
    last = blocks[-1]
    if last.else_body:
        trimmed = Block(
            last.kind,
            count=last.count,
            cond=last.cond,
            body=last.body,
            else_body=_drop_last_preorder(last.else_body),
        )
        return blocks[:-1] + (trimmed,)
    if last.body:
        trimmed = Block(
            last.kind,
            count=last.count,
            cond=last.cond,
            body=_drop_last_preorder(last.body),
            else_body=(),
        )
        return blocks[:-1] + (trimmed,)
    return blocks[:-1]


@lru_cache(maxsize=4096)
def subtree_chain(p: Program) -> tuple[Program, ...]:
    """Rooted subtrees of ``p`` ordered from the empty program up to ``p``.

    Each element removes the rightmost leaf of the next; equivalently the
    chain enumerates preorder prefixes of the tree, so it has node_count + 1
    members.
    """
    chain = [p]
    cur = p.blocks
    while cur:
        cur = _drop_last_preorder(cur)
        chain.append(Program(cur))
    chain.reverse()
    return tuple(chain)


def rooted_subtrees(p: Program) -> frozenset[Program]:
    """All trees reachable by repeatedly deleting the rightmost leaf block."""
    return frozenset(subtree_chain(p))


def matches_rooted_subtree(candidate: Program, target: Program) -> bool:
    return candidate in rooted_subtrees(target)


# ---------------------------------------------------------------------------
# Single-edit neighborhood


@dataclass(frozen=True)
class NeighborhoodLimits:
    max_members: int = 5000


@dataclass(frozen=True)
class Neighborhood:
    origin: Program
    members: tuple[Program, ...]

    def texts(self) -> list[str]:
        return [serialize_program(m) for m in self.members]


_BASIC_BLOCKS = {k: Block(k) for k in BASIC_KINDS}


def _with_body(b: Block, body: tuple[Block, ...]) -> Block:
    return Block._make(b.kind, b.count, b.cond, body, b.else_body)


def _with_else(b: Block, else_body: tuple[Block, ...]) -> Block:
    return Block._make(b.kind, b.count, b.cond, b.body, else_body)


def _wrap_blocks(kind: str, cond: str | None, content: tuple[Block, ...]) -> Block:
    if kind == REPEAT:
        return Block._make(REPEAT, WRAP_REPEAT_COUNT, None, content, ())
    if kind == REPEAT_UNTIL_GOAL:
        return Block._make(REPEAT_UNTIL_GOAL, None, None, content, ())
    if kind == IF:
        return Block._make(IF, None, cond, content, ())
    return Block._make(IF_ELSE, None, cond, content, ())


def _sequence_edits(seq: tuple[Block, ...], palette: frozenset[str]):
    """All single-edit variants of one block sequence (children untouched)."""
    basics = [_BASIC_BLOCKS[k] for k in BASIC_KINDS if k in palette]
    # insert a basic action at any position
    for i in range(len(seq) + 1):
        for block in basics:
            yield seq[:i] + (block,) + seq[i:]
    # delete: remove childless blocks, splice control blocks
    for i, b in enumerate(seq):
        if not b.body and not b.else_body:
            yield seq[:i] + seq[i + 1 :]
        else:
            yield seq[:i] + b.body + b.else_body + seq[i + 1 :]
    # replace one basic action by another
    for i, b in enumerate(seq):
        if b.kind in BASIC_KINDS:
            for block in basics:
                if block.kind != b.kind:
                    yield seq[:i] + (block,) + seq[i + 1 :]
    # wrap any contiguous (possibly empty) run in an allowed control block
    wrap_kinds = [k for k in (REPEAT, REPEAT_UNTIL_GOAL, IF, IF_ELSE) if k in palette]
    for i in range(len(seq) + 1):
        for j in range(i, len(seq) + 1):
            content = seq[i:j]
            for kind in wrap_kinds:
                if kind in (IF, IF_ELSE):
                    for cond in CONDITIONS:
                        yield seq[:i] + (_wrap_blocks(kind, cond, content),) + seq[j:]
                else:
                    yield seq[:i] + (_wrap_blocks(kind, None, content),) + seq[j:]


def _block_edits(b: Block, palette: frozenset[str]):
    """Single-edit variants of one block: parameter tweaks and child edits."""
    if b.kind in BASIC_KINDS:
        return
    if b.kind == REPEAT and b.count is not None:
        for c in (b.count - 1, b.count + 1):
            if MIN_REPEAT <= c <= MAX_REPEAT:
                yield Block._make(REPEAT, c, None, b.body, ())
    if b.kind in (IF, IF_ELSE):
        for cond in CONDITIONS:
            if cond != b.cond:
                yield Block._make(b.kind, None, cond, b.body, b.else_body)
    for body in _all_sequence_variants(b.body, palette):
        yield _with_body(b, body)
    if b.kind == IF_ELSE:
        for else_body in _all_sequence_variants(b.else_body, palette):
            yield _with_else(b, else_body)


def _all_sequence_variants(seq: tuple[Block, ...], palette: frozenset[str]):
    yield from _sequence_edits(seq, palette)
    for i, b in enumerate(seq):
        for nb in _block_edits(b, palette):
            yield seq[:i] + (nb,) + seq[i + 1 :]


def neighborhood(
    p: Program,
    palette: frozenset[str] | set[str],
    limits: NeighborhoodLimits = NeighborhoodLimits(),
) -> Neighborhood:
    """Programs one structural edit away from ``p``.

    Edits: insert a basic action, delete a block (splicing control bodies),
    replace a basic action, nudge a repeat count, swap a condition, or wrap a
    contiguous run (possibly empty) in an allowed control block. Members are
    deduplicated, exclude ``p`` itself, and come back sorted by canonical
    text, truncated to ``limits.max_members``.
    """
    pal = frozenset(palette)
    unique = set(_all_sequence_variants(p.blocks, pal))
    unique.discard(p.blocks)
    members = sorted(
        (Program(blocks) for blocks in unique), key=serialize_program
    )[: limits.max_members]
    return Neighborhood(origin=p, members=tuple(members))


# ---------------------------------------------------------------------------
# Inverse neighborhood (used by the hint search to probe deeper BFS layers
# without materializing them)


def _sequence_inverse_edits(seq: tuple[Block, ...], palette: frozenset[str]):
    basics = [_BASIC_BLOCKS[k] for k in BASIC_KINDS if k in palette]
    # inverse of inserting a basic: drop one
    for i, b in enumerate(seq):
        if b.kind in BASIC_KINDS:
            yield seq[:i] + seq[i + 1 :]
    # inverse of deleting an empty-bodied block: add one back anywhere
    empties: list[Block] = list(basics)
    if REPEAT in palette:
        empties.extend(Block._make(REPEAT, c, None, (), ()) for c in range(MIN_REPEAT, MAX_REPEAT + 1))
    if REPEAT_UNTIL_GOAL in palette:
        empties.append(Block._make(REPEAT_UNTIL_GOAL, None, None, (), ()))
    if IF in palette:
        empties.extend(Block._make(IF, None, c, (), ()) for c in CONDITIONS)
    if IF_ELSE in palette:
        empties.extend(Block._make(IF_ELSE, None, c, (), ()) for c in CONDITIONS)
    for i in range(len(seq) + 1):
        for e in empties:
            yield seq[:i] + (e,) + seq[i:]
    # inverse of splicing a control block: wrap any run, any parameters
    for i in range(len(seq) + 1):
        for j in range(i, len(seq) + 1):
            content = seq[i:j]
            if REPEAT in palette:
                for c in range(MIN_REPEAT, MAX_REPEAT + 1):
                    yield seq[:i] + (Block._make(REPEAT, c, None, content, ()),) + seq[j:]
            if REPEAT_UNTIL_GOAL in palette:
                yield seq[:i] + (Block._make(REPEAT_UNTIL_GOAL, None, None, content, ()),) + seq[j:]
            if IF in palette:
                for c in CONDITIONS:
                    yield seq[:i] + (Block._make(IF, None, c, content, ()),) + seq[j:]
            if IF_ELSE in palette:
                for c in CONDITIONS:
                    for x in range(len(content) + 1):
                        yield seq[:i] + (
                            Block._make(IF_ELSE, None, c, content[:x], content[x:]),
                        ) + seq[j:]
    # replacements are symmetric
    for i, b in enumerate(seq):
        if b.kind in BASIC_KINDS:
            for block in basics:
                if block.kind != b.kind:
                    yield seq[:i] + (block,) + seq[i + 1 :]


def _block_inverse_edits(b: Block, palette: frozenset[str]):
    if b.kind in BASIC_KINDS:
        return
    # count and condition tweaks are their own inverses
    if b.kind == REPEAT and b.count is not None:
        for c in (b.count - 1, b.count + 1):
            if MIN_REPEAT <= c <= MAX_REPEAT:
                yield Block._make(REPEAT, c, None, b.body, ())
    if b.kind in (IF, IF_ELSE):
        for cond in CONDITIONS:
            if cond != b.cond:
                yield Block._make(b.kind, None, cond, b.body, b.else_body)
    for body in _all_sequence_inverse_variants(b.body, palette):
        yield _with_body(b, body)
    if b.kind == IF_ELSE:
        for else_body in _all_sequence_inverse_variants(b.else_body, palette):
            yield _with_else(b, else_body)


def _all_sequence_inverse_variants(seq: tuple[Block, ...], palette: frozenset[str]):
    yield from _sequence_inverse_edits(seq, palette)
    for i, b in enumerate(seq):
        for nb in _block_inverse_edits(b, palette):
            yield seq[:i] + (nb,) + seq[i + 1 :]


def _wrapper_splices(blocks: tuple[Block, ...], palette: frozenset[str]):
    """Inverse of the wrap edit: splice out each wrapper-shaped node."""
    results: list[tuple[Block, ...]] = []

    def walk(seq: tuple[Block, ...], rebuild) -> None:
        for i, b in enumerate(seq):
            is_wrapper = b.kind in palette and (
                (b.kind == REPEAT and b.count == WRAP_REPEAT_COUNT)
                or b.kind == REPEAT_UNTIL_GOAL
                or b.kind == IF
                or (b.kind == IF_ELSE and not b.else_body)
            )
            if is_wrapper:
                results.append(rebuild(seq[:i] + b.body + b.else_body + seq[i + 1 :]))
            if b.kind in BASIC_KINDS:
                continue
            walk(b.body, lambda nb, i=i, b=b: rebuild(seq[:i] + (_with_body(b, nb),) + seq[i + 1 :]))
            if b.kind == IF_ELSE:
                walk(
                    b.else_body,
                    lambda nb, i=i, b=b: rebuild(seq[:i] + (_with_else(b, nb),) + seq[i + 1 :]),
                )

    walk(blocks, lambda bs: bs)
    return results


def predecessors(p: Program, palette: frozenset[str] | set[str]) -> dict[str, Program]:
    """Programs m with p in neighborhood(m): the exact one-edit preimage.

    Includes the splice-inverse of wrapper insertions, so the relation
    mirrors the forward edit set edit-for-edit.
    """
    pal = frozenset(palette)
    unique = set(_all_sequence_inverse_variants(p.blocks, pal))
    unique.update(_wrapper_splices(p.blocks, pal))
    unique.discard(p.blocks)
    return {serialize_program(Program(blocks)): Program(blocks) for blocks in unique}
