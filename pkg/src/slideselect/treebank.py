"""Bracketed constituency parse ingestion and the flat fallback tree.

Per-sentence bracketed parses (one per line) are joined under a single
whole-text root so sibling walks can cross sentence boundaries.  Leaves
align 1:1 with document tokens; when a supplied parse tokenizes
differently from the rule-based tokenizer, the parse leaves win and the
document is rebuilt from them with offsets recovered by greedy matching.
"""

from __future__ import annotations

import json
import urllib.error
import urllib.request
from dataclasses import dataclass

from .textmodel import (PUNCT, WORD, Document, Token, TokenRange,
                        is_punct_char, tokenize)

DOC_LABEL = "DOC"
SENT_LABEL = "ROOT"

PTB_UNESCAPE = {
    "-LRB-": "(", "-RRB-": ")",
    "-LSB-": "[", "-RSB-": "]",
    "-LCB-": "{", "-RCB-": "}",
}
PTB_ESCAPE = {v: k for k, v in PTB_UNESCAPE.items()}


class BracketParseError(ValueError):
    """Malformed bracketed parse input."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class AlignmentError(ValueError):
    """Parse leaves do not line up with document tokens."""


class ParseServiceError(RuntimeError):
    """External parser endpoint failed; caller should fall back."""


@dataclass(frozen=True)
class ParseNode:
    id: int
    label: str
    span: TokenRange
    children: tuple[int, ...]
    parent: int | None
    is_leaf: bool


@dataclass(frozen=True)
class ParseTree:
    nodes: tuple[ParseNode, ...]
    root: int
    leaf_of_token: tuple[int, ...]
    depths: tuple[int, ...]
    # sentence-level nodes whose children are all leaves, i.e. unparsed
    # regions where chunk-unit stepping degrades to word stepping
    flat_sentences: frozenset[int]

    def node(self, node_id: int) -> ParseNode:
        return self.nodes[node_id]

    def depth(self, node_id: int) -> int:
        return self.depths[node_id]

    def ancestors(self, node_id: int) -> list[int]:
        out = []
        parent = self.nodes[node_id].parent
        while parent is not None:
            out.append(parent)
            parent = self.nodes[parent].parent
        return out

    def child_position(self, node_id: int) -> int:
        parent = self.nodes[node_id].parent
        assert parent is not None
        return self.nodes[parent].children.index(node_id)


# ---------------------------------------------------------------------------
# S-expression reading

@dataclass
class _Sexp:
    label: str
    children: list  # list[_Sexp] | empty for atoms
    is_atom: bool


def _read_sexp(line: str, line_no: int) -> _Sexp:
    pos = 0
    n = len(line)

    def error(msg: str, at: int) -> BracketParseError:
        return BracketParseError(msg, line_no, at + 1)

    def skip_ws() -> None:
        nonlocal pos
        while pos < n and line[pos].isspace():
            pos += 1

    def read_atom() -> str:
        nonlocal pos
        start = pos
        while pos < n and not line[pos].isspace() and line[pos] not in "()":
            pos += 1
        if pos == start:
            raise error("expected a label or token", pos)
        return line[start:pos]

    def read_node() -> _Sexp:
        nonlocal pos
        skip_ws()
        if pos >= n:
            raise error("unexpected end of line", pos)
        if line[pos] != "(":
            return _Sexp(read_atom(), [], True)
        open_at = pos
        pos += 1
        skip_ws()
        label = read_atom() if pos < n and line[pos] not in "()" else ""
        children: list[_Sexp] = []
        while True:
            skip_ws()
            if pos >= n:
                raise error("unbalanced '('", open_at)
            if line[pos] == ")":
                pos += 1
                break
            children.append(read_node())
        if not children:
            # "(TAG token)" parses as label TAG with token atom child; a
            # bare "(TAG)" has nothing to align with a token
            raise error(f"constituent '{label}' has no children", open_at)
        return _Sexp(label, children, False)

    skip_ws()
    if pos >= n:
        raise BracketParseError("empty parse line", line_no, 1)
    node = read_node()
    skip_ws()
    if pos < n:
        raise error("unbalanced ')'" if line[pos] == ")" else "trailing content", pos)
    return node


def _sexp_leaves(node: _Sexp) -> list[str]:
    if node.is_atom:
        return [node.label]
    out: list[str] = []
    for child in node.children:
        out.extend(_sexp_leaves(child))
    return out


def unescape_leaf(text: str) -> str:
    return PTB_UNESCAPE.get(text, text)


def escape_leaf(text: str) -> str:
    return PTB_ESCAPE.get(text, text)


# ---------------------------------------------------------------------------
# Tree building

class _TreeBuilder:
    def __init__(self) -> None:
        self.labels: list[str] = []
        self.spans: list[TokenRange | None] = []
        self.children: list[list[int]] = []
        self.parents: list[int | None] = []
        self.is_leaf: list[bool] = []

    def add(self, label: str, parent: int | None, leaf_span: TokenRange | None = None) -> int:
        node_id = len(self.labels)
        self.labels.append(label)
        self.spans.append(leaf_span)
        self.children.append([])
        self.parents.append(parent)
        self.is_leaf.append(leaf_span is not None)
        if parent is not None:
            self.children[parent].append(node_id)
        return node_id

    def finish(self, root: int, token_count: int) -> ParseTree:
        # fill internal spans bottom-up; node ids are creation-ordered so
        # children always have higher ids than parents
        for node_id in range(len(self.labels) - 1, -1, -1):
            if self.spans[node_id] is None:
                kids = self.children[node_id]
                if kids:
                    self.spans[node_id] = TokenRange(
                        self.spans[kids[0]].start, self.spans[kids[-1]].end)
        leaf_of_token: list[int | None] = [None] * token_count
        depths = [0] * len(self.labels)
        for node_id in range(len(self.labels)):
            parent = self.parents[node_id]
            if parent is not None:
                depths[node_id] = depths[parent] + 1
            if self.is_leaf[node_id]:
                leaf_of_token[self.spans[node_id].start] = node_id
        nodes = tuple(
            ParseNode(i, self.labels[i],
                      self.spans[i] if self.spans[i] is not None else TokenRange(0, 0),
                      tuple(self.children[i]), self.parents[i], self.is_leaf[i])
            for i in range(len(self.labels)))
        flat = frozenset(
            sent for sent in self.children[root]
            if self.children[sent]
            and all(self.is_leaf[kid] for kid in self.children[sent]))
        return ParseTree(nodes, root, tuple(leaf_of_token), tuple(depths), flat)


def _attach_sexp(builder: _TreeBuilder, node: _Sexp, parent: int,
                 leaf_texts: list[str], cursor: list[int]) -> None:
    if node.is_atom:
        token_index = cursor[0]
        cursor[0] += 1
        builder.add(leaf_texts[token_index], parent,
                    TokenRange(token_index, token_index))
        return
    node_id = builder.add(node.label, parent)
    for child in node.children:
        _attach_sexp(builder, child, node_id, leaf_texts, cursor)


def parse_bracketed(doc: Document, lines: list[str]) -> ParseTree:
    """Join per-sentence bracketed parses under a whole-text root.

    Leaf counts must match the document's per-sentence token counts;
    mismatches raise AlignmentError naming the sentence.
    """
    sentences = doc.sentence_bounds
    if len(lines) != len(sentences):
        raise AlignmentError(
            f"document has {len(sentences)} sentences but parse input has "
            f"{len(lines)} lines")
    parsed = [_read_sexp(line, i + 1) for i, line in enumerate(lines)]
    for i, (sexp, bound) in enumerate(zip(parsed, sentences)):
        want = len(_sexp_leaves(sexp))
        have = len(bound)
        if want != have:
            raise AlignmentError(
                f"sentence {i + 1}: parse has {want} leaves but document "
                f"has {have} tokens")
    builder = _TreeBuilder()
    root = builder.add(DOC_LABEL, None)
    token_texts = [t.text for t in doc.tokens]
    cursor = [0]
    for sexp in parsed:
        _attach_sexp(builder, sexp, root, token_texts, cursor)
    return builder.finish(root, len(doc.tokens))


def fallback_tree(doc: Document) -> ParseTree:
    """Flat tree: every token a direct leaf child of its sentence root."""
    builder = _TreeBuilder()
    root = builder.add(DOC_LABEL, None)
    for bound in doc.sentence_bounds:
        sent = builder.add(SENT_LABEL, root)
        for i in range(bound.start, bound.end + 1):
            builder.add(doc.tokens[i].text, sent, TokenRange(i, i))
    return builder.finish(root, len(doc.tokens))


def document_from_parse_lines(raw_text: str, lines: list[str]) -> tuple[Document, ParseTree]:
    """Build (Document, ParseTree), letting parse leaves override tokenization.

    Tries the rule-based tokenization first; if leaf counts disagree the
    tokens are rebuilt from the parse leaves with character offsets
    recovered by left-to-right greedy matching in the raw text.
    """
    doc = tokenize(raw_text)
    try:
        return doc, parse_bracketed(doc, lines)
    except AlignmentError:
        pass
    parsed = [_read_sexp(line, i + 1) for i, line in enumerate(lines)]
    tokens: list[Token] = []
    bounds: list[TokenRange] = []
    cursor = 0
    for sent_no, sexp in enumerate(parsed):
        first = len(tokens)
        for leaf in _sexp_leaves(sexp):
            text = unescape_leaf(leaf)
            candidates = [text] if text == leaf else [text, leaf]
            if text in ("``", "''"):
                candidates.append('"')
            found, match = -1, ""
            for cand in candidates:
                at = raw_text.find(cand, cursor)
                if at != -1 and (found == -1 or at < found):
                    found, match = at, cand
            if found == -1:
                raise AlignmentError(
                    f"sentence {sent_no + 1}: leaf {leaf!r} not found in text")
            kind = PUNCT if match and all(is_punct_char(c) for c in match) else WORD
            tokens.append(Token(len(tokens), match, found, found + len(match),
                                kind, sent_no))
            cursor = found + len(match)
        if len(tokens) == first:
            raise AlignmentError(f"sentence {sent_no + 1}: parse has no leaves")
        bounds.append(TokenRange(first, len(tokens) - 1))
    rebuilt = Document.build(raw_text, tuple(tokens), tuple(bounds))
    return rebuilt, parse_bracketed(rebuilt, lines)


# ---------------------------------------------------------------------------
# Serialization (round-trip support)

def _serialize_node(tree: ParseTree, node_id: int, out: list[str]) -> None:
    node = tree.node(node_id)
    if node.is_leaf:
        out.append(escape_leaf(node.label))
        return
    out.append("(" + node.label)
    for child in node.children:
        out.append(" ")
        _serialize_node(tree, child, out)
    out.append(")")


def serialize_tree(tree: ParseTree) -> list[str]:
    """One bracketed line per sentence (per child of the whole-text root)."""
    lines = []
    for sent_id in tree.node(tree.root).children:
        parts: list[str] = []
        _serialize_node(tree, sent_id, parts)
        lines.append("".join(parts))
    return lines


def load_parse_file(path: str) -> list[str]:
    """Parse file: one bracketed sentence per line; blank lines separate paragraphs."""
    with open(path, encoding="utf-8") as fh:
        return [line.strip() for line in fh if line.strip()]


def fetch_external_parses(endpoint_url: str, text: str, timeout: float = 5.0) -> list[str]:
    """POST raw text to a constituency-parser HTTP endpoint.

    Expects a JSON response shaped like ``{"sentences": [{"parse": "(ROOT ..."}]}``
    and returns one single-line bracketed parse per sentence.  Any network,
    timeout, or format failure raises ParseServiceError; callers must
    substitute fallback_tree rather than abort.
    """
    request = urllib.request.Request(
        endpoint_url, data=text.encode("utf-8"), method="POST",
        headers={"Content-Type": "text/plain; charset=utf-8"})
    try:
        with urllib.request.urlopen(request, timeout=timeout) as response:
            body = response.read()
    except (urllib.error.URLError, OSError, ValueError) as exc:
        raise ParseServiceError(f"parser endpoint unreachable: {exc}") from exc
    try:
        payload = json.loads(body.decode("utf-8"))
        lines = [" ".join(str(s["parse"]).split()) for s in payload["sentences"]]
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseServiceError(f"parser endpoint returned bad payload: {exc}") from exc
    if not lines:
        raise ParseServiceError("parser endpoint returned no sentences")
    return lines
