"""Code-edit recommendations: from a student attempt toward the task solution.

The search expands single-edit neighborhoods of the attempt breadth-first and
stops at the first layer containing a rooted subtree of the solution that is
strictly closer to it than the attempt. Among those the one with minimal
distance to the solution wins. If nothing is found within the depth budget,
the fallback picks the closest-to-the-student rooted subtree that still makes
progress.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .blocks import Block, Program, program_to_wire, serialize_program
from .tree_metrics import (
    _all_sequence_inverse_variants,
    _all_sequence_variants,
    _wrapper_splices,
    subtree_chain,
    ted,
    zs_size,
)

KEEP_MY_CODE = "keep_my_code"
USE_NEW_CODE = "use_new_code"

Blocks = tuple[Block, ...]


@dataclass(frozen=True)
class RecommendLimits:
    max_depth: int = 3
    max_members: int = 5000


@dataclass(frozen=True)
class Recommendation:
    c_rec: Program
    distance_to_solution: int
    layers_explored: int
    via_fallback: bool


def _raw_neighbors(blocks: Blocks, palette: frozenset[str]) -> set[Blocks]:
    out = set(_all_sequence_variants(blocks, palette))
    out.discard(blocks)
    return out


def _raw_predecessors(blocks: Blocks, palette: frozenset[str]) -> set[Blocks]:
    out = set(_all_sequence_inverse_variants(blocks, palette))
    out.update(_wrapper_splices(blocks, palette))
    out.discard(blocks)
    return out


class _SolutionIndex:
    """Per-solution search tables, shared across every attempt on a task.

    The rooted-subtree chain is tiny, so instead of materializing the second
    BFS layer we intersect the first layer with each chain member's one-edit
    preimage.
    """

    def __init__(self, c_star: Program, palette: frozenset[str]):
        self.c_star = c_star
        self.palette = palette
        self.chain = subtree_chain(c_star)
        star_size = zs_size(c_star)
        # a rooted subtree embeds into the solution, so its distance to the
        # solution is exactly the node deficit
        self.distances = tuple(star_size - zs_size(p) for p in self.chain)
        self.by_blocks = {p.blocks: i for i, p in enumerate(self.chain)}
        self._preimage: dict[Blocks, set[int]] | None = None

    def preimage_map(self) -> dict[Blocks, set[int]]:
        if self._preimage is None:
            table: dict[Blocks, set[int]] = {}
            for i, member in enumerate(self.chain):
                for blocks in _raw_predecessors(member.blocks, self.palette):
                    table.setdefault(blocks, set()).add(i)
            self._preimage = table
        return self._preimage


_index_cache: dict[tuple[Blocks, frozenset[str]], _SolutionIndex] = {}
_recommend_cache: dict[tuple, Recommendation] = {}


def _solution_index(c_star: Program, palette: frozenset[str]) -> _SolutionIndex:
    key = (c_star.blocks, palette)
    idx = _index_cache.get(key)
    if idx is None:
        idx = _SolutionIndex(c_star, palette)
        _index_cache[key] = idx
    return idx


def _pick(idx: _SolutionIndex, hits: set[int], layer: int) -> Recommendation:
    best = min(hits, key=lambda i: idx.distances[i])
    return Recommendation(
        c_rec=idx.chain[best],
        distance_to_solution=idx.distances[best],
        layers_explored=layer,
        via_fallback=False,
    )


def recommend(
    c_stu: Program,
    c_star: Program,
    palette: frozenset[str] | set[str],
    limits: RecommendLimits = RecommendLimits(),
) -> Recommendation:
    """Compute the intermediate recommendation for a student attempt.

    Deterministic; the returned program always matches a rooted subtree of
    ``c_star`` and, except for the degenerate attempt == solution case, is
    strictly closer to the solution than the attempt was.
    """
    pal = frozenset(palette)
    cache_key = (c_stu, c_star, pal, limits.max_depth, limits.max_members)
    cached = _recommend_cache.get(cache_key)
    if cached is not None:
        return cached
    result = _recommend_uncached(c_stu, c_star, pal, limits)
    _recommend_cache[cache_key] = result
    return result


def _recommend_uncached(
    c_stu: Program, c_star: Program, pal: frozenset[str], limits: RecommendLimits
) -> Recommendation:
    idx = _solution_index(c_star, pal)
    attempt_distance = ted(c_stu, c_star)
    if attempt_distance == 0:
        return Recommendation(c_star, 0, 0, False)

    def eligible_hits(candidates: set[int]) -> set[int]:
        return {i for i in candidates if idx.distances[i] < attempt_distance}

    # layer 1: the attempt's neighborhood
    layer1: set[Blocks] = _raw_neighbors(c_stu.blocks, pal) if limits.max_depth >= 1 else set()
    hits = eligible_hits({idx.by_blocks[b] for b in layer1 if b in idx.by_blocks})
    if hits:
        return _pick(idx, hits, 1)

    frontier = layer1
    if len(frontier) > limits.max_members:
        ordered = sorted(frontier, key=lambda b: serialize_program(Program(b)))
        frontier = set(ordered[: limits.max_members])

    # layer 2: probe via the chain's one-edit preimage instead of expanding
    if limits.max_depth >= 2:
        pre = idx.preimage_map()
        found: set[int] = set()
        for b in frontier:
            found |= pre.get(b, set())
        hits = eligible_hits(found)
        if hits:
            return _pick(idx, hits, 2)

    # layers 3+: expand frontiers for real, probing one edit ahead
    if limits.max_depth >= 3:
        pre = idx.preimage_map()
        visited: set[Blocks] = {c_stu.blocks} | layer1
        for depth in range(3, limits.max_depth + 1):
            grown: set[Blocks] = set()
            found = set()
            for member in frontier:
                for nb in _all_sequence_variants(member, pal):
                    if nb in visited or nb in grown:
                        continue
                    grown.add(nb)
                    if nb in pre:
                        found |= pre[nb]
            hits = eligible_hits(found)
            if hits:
                return _pick(idx, hits, depth)
            visited |= grown
            if len(grown) > limits.max_members:
                ordered = sorted(grown, key=lambda b: serialize_program(Program(b)))
                frontier = set(ordered[: limits.max_members])
            else:
                frontier = grown

    # fallback: nearest progressing rooted subtree of the solution
    candidates = [i for i in range(len(idx.chain)) if idx.distances[i] < attempt_distance]
    best = min(
        candidates,
        key=lambda i: (
            ted(idx.chain[i], c_stu),
            idx.chain[i].node_count(),
            serialize_program(idx.chain[i]),
        ),
    )
    return Recommendation(
        c_rec=idx.chain[best],
        distance_to_solution=idx.distances[best],
        layers_explored=limits.max_depth,
        via_fallback=True,
    )


def render_recommendation(rec: Recommendation, c_stu: Program) -> dict[str, Any]:
    """Intervention payload for the session layer and UI."""
    return {
        "kind": "code_rec",
        "current_program": {
            "text": serialize_program(c_stu),
            "ast": program_to_wire(c_stu),
        },
        "recommended_program": {
            "text": serialize_program(rec.c_rec),
            "ast": program_to_wire(rec.c_rec),
        },
        "distance_to_solution": rec.distance_to_solution,
        "layers_explored": rec.layers_explored,
        "via_fallback": rec.via_fallback,
        "actions": [KEEP_MY_CODE, USE_NEW_CODE],
    }
