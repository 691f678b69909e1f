"""Maze DSL: block AST, parser, canonical serializer, and wire format.

The language has three basic actions (move, turn_left, turn_right) and four
control blocks (repeat N, repeat_until_goal, if COND, if_else COND ... else).
Programs are immutable values; parsing and serialization are exact inverses
on canonical text.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Iterator

MOVE = "move"
TURN_LEFT = "turn_left"
TURN_RIGHT = "turn_right"
REPEAT = "repeat"
REPEAT_UNTIL_GOAL = "repeat_until_goal"
IF = "if"
IF_ELSE = "if_else"

BASIC_KINDS = (MOVE, TURN_LEFT, TURN_RIGHT)
CONTROL_KINDS = (REPEAT, REPEAT_UNTIL_GOAL, IF, IF_ELSE)
ALL_KINDS = BASIC_KINDS + CONTROL_KINDS

PATH_AHEAD = "path_ahead"
PATH_LEFT = "path_left"
PATH_RIGHT = "path_right"
CONDITIONS = (PATH_AHEAD, PATH_LEFT, PATH_RIGHT)

MIN_REPEAT = 2
MAX_REPEAT = 9


class ParseError(ValueError):
    """Syntax error with 1-based line/column position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


@dataclass(frozen=True, eq=False)
class Block:
    """One maze-language block.

    Basic kinds carry no count, condition, or children. ``repeat`` carries a
    count and a body; ``repeat_until_goal`` a body; ``if`` a condition and a
    body; ``if_else`` a condition plus body and else_body.
    """

    kind: str
    count: int | None = None
    cond: str | None = None
    body: tuple["Block", ...] = ()
    else_body: tuple["Block", ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in ALL_KINDS:
            raise ValueError(f"unknown block kind {self.kind!r}")
        if self.kind in BASIC_KINDS:
            if self.count is not None or self.cond is not None:
                raise ValueError(f"{self.kind} takes no count or condition")
            if self.body or self.else_body:
                raise ValueError(f"{self.kind} takes no children")
        if self.kind == REPEAT and (self.count is None or self.count < 1):
            raise ValueError("repeat needs a positive count")
        if self.kind in (IF, IF_ELSE) and self.cond not in CONDITIONS:
            raise ValueError(f"{self.kind} needs a condition")
        if self.kind != REPEAT and self.count is not None:
            raise ValueError(f"{self.kind} takes no count")
        if self.kind in (REPEAT, REPEAT_UNTIL_GOAL) and self.cond is not None:
            raise ValueError(f"{self.kind} takes no condition")
        if self.kind != IF_ELSE and self.else_body:
            raise ValueError(f"{self.kind} takes no else body")
        # children carry cached hashes, so this is O(len(children)) and
        # makes later hashing of whole trees O(1)
        object.__setattr__(
            self, "_hash", hash((self.kind, self.count, self.cond, self.body, self.else_body))
        )

    def __hash__(self) -> int:
        return self._hash  # type: ignore[attr-defined]

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Block):
            return NotImplemented
        return (
            self._hash == other._hash  # type: ignore[attr-defined]
            and self.kind == other.kind
            and self.count == other.count
            and self.cond == other.cond
            and self.body == other.body
            and self.else_body == other.else_body
        )

    @classmethod
    def _make(
        cls,
        kind: str,
        count: int | None,
        cond: str | None,
        body: tuple["Block", ...],
        else_body: tuple["Block", ...],
    ) -> "Block":
        """Validation-free constructor for hot paths rebuilding valid blocks."""
        self = object.__new__(cls)
        setattr_ = object.__setattr__
        setattr_(self, "kind", kind)
        setattr_(self, "count", count)
        setattr_(self, "cond", cond)
        setattr_(self, "body", body)
        setattr_(self, "else_body", else_body)
        setattr_(self, "_hash", hash((kind, count, cond, body, else_body)))
        return self

    @property
    def label(self) -> tuple:
        """Node label used by tree edit distance: (kind, count, cond)."""
        return (self.kind, self.count, self.cond)

    def children(self) -> tuple["Block", ...]:
        return self.body + self.else_body


@dataclass(frozen=True, eq=False)
class Program:
    """An ordered sequence of blocks: the unit the rest of the system moves around."""

    blocks: tuple[Block, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(self.blocks))

    def __hash__(self) -> int:
        return self._hash  # type: ignore[attr-defined]

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Program):
            return NotImplemented
        return self._hash == other._hash and self.blocks == other.blocks  # type: ignore[attr-defined]

    @property
    def text(self) -> str:
        return serialize_program(self)

    def node_count(self) -> int:
        return sum(1 for _ in self.walk())

    def walk(self) -> Iterator[Block]:
        """Preorder traversal of every block."""

        def rec(blocks: tuple[Block, ...]) -> Iterator[Block]:
            for b in blocks:
                yield b
                yield from rec(b.body)
                yield from rec(b.else_body)

        return rec(self.blocks)

    def is_empty(self) -> bool:
        return not self.blocks

    def kinds_used(self) -> set[str]:
        return {b.kind for b in self.walk()}


def basic(kind: str) -> Block:
    if kind not in BASIC_KINDS:
        raise ValueError(f"not a basic action: {kind}")
    return Block(kind)


def repeat(count: int, *body: Block) -> Block:
    return Block(REPEAT, count=count, body=tuple(body))


def repeat_until_goal(*body: Block) -> Block:
    return Block(REPEAT_UNTIL_GOAL, body=tuple(body))


def if_path(cond: str, *body: Block) -> Block:
    return Block(IF, cond=cond, body=tuple(body))


def if_else(cond: str, body: tuple[Block, ...], else_body: tuple[Block, ...]) -> Block:
    return Block(IF_ELSE, cond=cond, body=tuple(body), else_body=tuple(else_body))


# ---------------------------------------------------------------------------
# Tokenizer


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    col: int


_PUNCT = {"{", "}"}
_SEPARATORS = {";", "\n"}


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r;":
            col += 1
            i += 1
            continue
        if ch in _PUNCT:
            tokens.append(_Token(ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token(text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token(text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    return tokens


# ---------------------------------------------------------------------------
# Parser (recursive descent; newline / ';' are plain separators)


class _Parser:
    def __init__(self, tokens: list[_Token], source: str):
        self.tokens = tokens
        self.pos = 0
        self.source = source

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> _Token:
        tok = self.peek()
        if tok is None:
            raise self._eof("unexpected end of input")
        self.pos += 1
        return tok

    def _eof(self, msg: str) -> ParseError:
        lines = self.source.splitlines() or [""]
        return ParseError(msg, len(lines), len(lines[-1]) + 1)

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok is None:
            raise self._eof(f"expected {text!r}, found end of input")
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text!r}", tok.line, tok.col)
        self.pos += 1
        return tok

    def parse_sequence(self) -> tuple[Block, ...]:
        blocks: list[Block] = []
        while True:
            tok = self.peek()
            if tok is None or tok.text == "}":
                return tuple(blocks)
            blocks.append(self.parse_block())

    def parse_block(self) -> Block:
        tok = self.next()
        kind = tok.text
        if kind in BASIC_KINDS:
            return Block(kind)
        if kind == REPEAT:
            count_tok = self.next()
            if not count_tok.text.isdigit():
                raise ParseError(
                    f"repeat needs an integer count, found {count_tok.text!r}",
                    count_tok.line,
                    count_tok.col,
                )
            count = int(count_tok.text)
            if count < 1:
                raise ParseError("repeat count must be positive", count_tok.line, count_tok.col)
            self.expect("{")
            body = self.parse_sequence()
            self.expect("}")
            return Block(REPEAT, count=count, body=body)
        if kind == REPEAT_UNTIL_GOAL:
            self.expect("{")
            body = self.parse_sequence()
            self.expect("}")
            return Block(REPEAT_UNTIL_GOAL, body=body)
        if kind in (IF, IF_ELSE):
            cond_tok = self.next()
            if cond_tok.text not in CONDITIONS:
                raise ParseError(
                    f"expected a condition, found {cond_tok.text!r}", cond_tok.line, cond_tok.col
                )
            self.expect("{")
            body = self.parse_sequence()
            self.expect("}")
            if kind == IF:
                return Block(IF, cond=cond_tok.text, body=body)
            self.expect("else")
            self.expect("{")
            else_body = self.parse_sequence()
            self.expect("}")
            return Block(IF_ELSE, cond=cond_tok.text, body=body, else_body=else_body)
        raise ParseError(f"unknown block kind {kind!r}", tok.line, tok.col)


def parse_program(text: str) -> Program:
    """Parse DSL text into a Program.

    Blocks are separated by newlines or ';' (both optional where the grammar
    is unambiguous). Empty input parses to the empty program so that student
    attempts and intermediate recommendations round-trip.
    """
    parser = _Parser(_tokenize(text), text)
    blocks = parser.parse_sequence()
    tok = parser.peek()
    if tok is not None:
        raise ParseError(f"unexpected {tok.text!r}", tok.line, tok.col)
    return Program(blocks)


# ---------------------------------------------------------------------------
# Canonical serializer: 2-space indent, one block per line, `else` on its own line.


def _emit(blocks: tuple[Block, ...], indent: int, out: list[str]) -> None:
    pad = "  " * indent
    for b in blocks:
        if b.kind in BASIC_KINDS:
            out.append(pad + b.kind)
        elif b.kind == REPEAT:
            out.append(f"{pad}repeat {b.count} {{")
            _emit(b.body, indent + 1, out)
            out.append(pad + "}")
        elif b.kind == REPEAT_UNTIL_GOAL:
            out.append(pad + "repeat_until_goal {")
            _emit(b.body, indent + 1, out)
            out.append(pad + "}")
        elif b.kind == IF:
            out.append(f"{pad}if {b.cond} {{")
            _emit(b.body, indent + 1, out)
            out.append(pad + "}")
        else:
            out.append(f"{pad}if_else {b.cond} {{")
            _emit(b.body, indent + 1, out)
            out.append(pad + "}")
            out.append(pad + "else {")
            _emit(b.else_body, indent + 1, out)
            out.append(pad + "}")


@lru_cache(maxsize=1 << 16)
def _serialize_cached(program: Program) -> str:
    out: list[str] = []
    _emit(program.blocks, 0, out)
    return "".join(line + "\n" for line in out)


def serialize_program(program: Program) -> str:
    """Canonical DSL text; the empty program serializes to the empty string."""
    return _serialize_cached(program)


# ---------------------------------------------------------------------------
# Wire AST: nested records {kind, count?, cond?, body?, else_body?}


def block_to_wire(block: Block) -> dict[str, Any]:
    rec: dict[str, Any] = {"kind": block.kind}
    if block.count is not None:
        rec["count"] = block.count
    if block.cond is not None:
        rec["cond"] = block.cond
    if block.kind in CONTROL_KINDS:
        rec["body"] = [block_to_wire(b) for b in block.body]
    if block.kind == IF_ELSE:
        rec["else_body"] = [block_to_wire(b) for b in block.else_body]
    return rec


def program_to_wire(program: Program) -> list[dict[str, Any]]:
    return [block_to_wire(b) for b in program.blocks]


def block_from_wire(rec: dict[str, Any]) -> Block:
    kind = rec.get("kind")
    if kind not in ALL_KINDS:
        raise ValueError(f"unknown block kind in wire AST: {kind!r}")
    return Block(
        kind,
        count=rec.get("count"),
        cond=rec.get("cond"),
        body=tuple(block_from_wire(r) for r in rec.get("body", [])),
        else_body=tuple(block_from_wire(r) for r in rec.get("else_body", [])),
    )


def program_from_wire(records: list[dict[str, Any]]) -> Program:
    return Program(tuple(block_from_wire(r) for r in records))
