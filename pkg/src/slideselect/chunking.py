"""Sibling-chunk lookup over the constituency tree.

A chunk is the span of the node adjacent to the current selection
boundary, found by ascending from the boundary token's leaf until a
same-parent sibling exists.  Forward chunks additionally sweep the run
of punctuation tokens that immediately follows them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .textmodel import PUNCT, Document, TokenRange
from .treebank import ParseTree

BACKWARD = "backward"
FORWARD = "forward"


@dataclass(frozen=True)
class Chunk:
    range: TokenRange
    source_node: int
    level_hint: int


@dataclass(frozen=True)
class BracketPreview:
    backward: tuple[Chunk, ...]
    forward: tuple[Chunk, ...]


def adjust_punctuation(doc: Document, chunk: Chunk, direction: str) -> Chunk:
    """Extend a forward chunk over the punctuation run right after it."""
    if direction != FORWARD:
        return chunk
    end = chunk.range.end
    while end + 1 < len(doc.tokens) and doc.tokens[end + 1].kind == PUNCT:
        end += 1
    if end == chunk.range.end:
        return chunk
    return Chunk(TokenRange(chunk.range.start, end), chunk.source_node,
                 chunk.level_hint)


def next_sibling_chunk(tree: ParseTree, doc: Document, selection: TokenRange,
                       direction: str) -> Chunk | None:
    """Adjacent node at the same or closest higher level, or None at corpus end.

    Anchors at the leaf of the selection's boundary token on the given
    side and ascends until the anchor has an immediate sibling; ascending
    keeps the anchor's span boundary glued to the selection boundary, so
    the sibling is always contiguous with the selection.
    """
    doc.check_range(selection)
    boundary = selection.end if direction == FORWARD else selection.start
    node_id = tree.leaf_of_token[boundary]
    while True:
        parent = tree.node(node_id).parent
        if parent is None:
            return None
        siblings = tree.node(parent).children
        at = siblings.index(node_id)
        neighbor = at + 1 if direction == FORWARD else at - 1
        if 0 <= neighbor < len(siblings):
            sibling = tree.node(siblings[neighbor])
            chunk = Chunk(sibling.span, sibling.id, tree.depth(sibling.id))
            return adjust_punctuation(doc, chunk, direction)
        node_id = parent


def expansion_sequence(tree: ParseTree, doc: Document, selection: TokenRange,
                       direction: str, count: int) -> list[Chunk]:
    """Successive chunks outward from the selection, re-anchoring at each end."""
    chunks: list[Chunk] = []
    current = selection
    for _ in range(count):
        chunk = next_sibling_chunk(tree, doc, current, direction)
        if chunk is None:
            break
        chunks.append(chunk)
        current = current.union(chunk.range)
    return chunks


def compute_brackets(tree: ParseTree, doc: Document, selection: TokenRange,
                     levels: int = 3) -> BracketPreview:
    return BracketPreview(
        backward=tuple(expansion_sequence(tree, doc, selection, BACKWARD, levels)),
        forward=tuple(expansion_sequence(tree, doc, selection, FORWARD, levels)),
    )
