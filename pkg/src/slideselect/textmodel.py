"""Tokenization, document representation, and token-range arithmetic.

The tokenizer is rule-based: whitespace splitting with leading/trailing
punctuation detached one token per character, so that e.g. a closing
``."`` becomes two punctuation tokens.  Interior punctuation (hyphens,
apostrophes) stays inside the word token.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field

WORD = "word"
PUNCT = "punct"

SENTENCE_FINAL = {".", "!", "?"}


class RangeError(ValueError):
    """A token range falls outside the document."""


def is_punct_char(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


@dataclass(frozen=True, order=True)
class TokenRange:
    """Contiguous inclusive span of token indices."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise RangeError(f"invalid range [{self.start}..{self.end}]")

    def __len__(self) -> int:
        return self.end - self.start + 1

    def contains(self, index: int) -> bool:
        return self.start <= index <= self.end

    def union(self, other: "TokenRange") -> "TokenRange":
        return TokenRange(min(self.start, other.start), max(self.end, other.end))

    def overlaps(self, other: "TokenRange") -> bool:
        return self.start <= other.end and other.start <= self.end

    def as_pair(self) -> list[int]:
        return [self.start, self.end]


@dataclass(frozen=True)
class Token:
    index: int
    text: str
    char_start: int
    char_end: int
    kind: str  # WORD or PUNCT
    sentence_index: int

    @property
    def is_word(self) -> bool:
        return self.kind == WORD


@dataclass(frozen=True)
class Document:
    raw_text: str
    tokens: tuple[Token, ...]
    sentence_bounds: tuple[TokenRange, ...]
    _word_indices: tuple[int, ...] = field(repr=False, default=())

    @staticmethod
    def build(raw_text: str, tokens: tuple[Token, ...],
              sentence_bounds: tuple[TokenRange, ...]) -> "Document":
        words = tuple(t.index for t in tokens if t.kind == WORD)
        return Document(raw_text, tokens, sentence_bounds, words)

    def __len__(self) -> int:
        return len(self.tokens)

    def full_range(self) -> TokenRange:
        if not self.tokens:
            raise RangeError("empty document has no range")
        return TokenRange(0, len(self.tokens) - 1)

    def check_range(self, rng: TokenRange) -> None:
        if rng.start < 0 or rng.end >= len(self.tokens):
            raise RangeError(
                f"range [{rng.start}..{rng.end}] out of bounds for "
                f"{len(self.tokens)} tokens")

    def word_indices(self, rng: TokenRange | None = None) -> list[int]:
        if rng is None:
            return list(self._word_indices)
        self.check_range(rng)
        return [i for i in self._word_indices if rng.start <= i <= rng.end]

    def word_after(self, index: int) -> int | None:
        for i in self._word_indices:
            if i > index:
                return i
        return None

    def word_before(self, index: int) -> int | None:
        found = None
        for i in self._word_indices:
            if i >= index:
                break
            found = i
        return found


def _split_blob(blob: str, offset: int) -> list[tuple[str, int]]:
    """Split a whitespace-delimited blob into (text, char_offset) pieces."""
    lead = 0
    while lead < len(blob) and is_punct_char(blob[lead]):
        lead += 1
    trail = len(blob)
    while trail > lead and is_punct_char(blob[trail - 1]):
        trail -= 1
    pieces: list[tuple[str, int]] = []
    for i in range(lead):
        pieces.append((blob[i], offset + i))
    if trail > lead:
        pieces.append((blob[lead:trail], offset + lead))
    for i in range(trail, len(blob)):
        pieces.append((blob[i], offset + i))
    return pieces


def tokenize(raw_text: str) -> Document:
    """Tokenize plain text into a Document.

    Whitespace-separated blobs shed leading/trailing punctuation as
    single-character punctuation tokens; sentence boundaries fall after
    final ``.!?`` (plus any attached closing punctuation) followed by
    whitespace, and at blank lines.
    """
    pieces: list[tuple[str, int]] = []
    pos = 0
    n = len(raw_text)
    while pos < n:
        if raw_text[pos].isspace():
            pos += 1
            continue
        end = pos
        while end < n and not raw_text[end].isspace():
            end += 1
        pieces.extend(_split_blob(raw_text[pos:end], pos))
        pos = end

    tokens: list[Token] = []
    bounds: list[TokenRange] = []
    sentence_start = 0
    sentence_index = 0
    pending_final = False

    def close_sentence(after: int) -> None:
        nonlocal sentence_start, sentence_index, pending_final
        bounds.append(TokenRange(sentence_start, after))
        sentence_start = after + 1
        sentence_index += 1
        pending_final = False

    for i, (text, start) in enumerate(pieces):
        kind = PUNCT if all(is_punct_char(c) for c in text) else WORD
        tokens.append(Token(i, text, start, start + len(text), kind, sentence_index))
        if kind == WORD:
            pending_final = False
        elif text in SENTENCE_FINAL:
            pending_final = True
        # punctuation apart from the token above keeps pending_final as-is
        # only while it abuts the previous token in the raw text
        if i + 1 < len(pieces):
            gap = raw_text[start + len(text):pieces[i + 1][1]]
        else:
            gap = raw_text[start + len(text):]
        if gap.count("\n") >= 2:
            close_sentence(i)
        elif pending_final and (gap != "" or i + 1 == len(pieces)):
            close_sentence(i)
    if tokens and sentence_start < len(tokens):
        bounds.append(TokenRange(sentence_start, len(tokens) - 1))

    return Document.build(raw_text, tuple(tokens), tuple(bounds))


def range_text(doc: Document, rng: TokenRange) -> str:
    """Raw-text substring covered by the range, gaps included."""
    doc.check_range(rng)
    return doc.raw_text[doc.tokens[rng.start].char_start:doc.tokens[rng.end].char_end]


def word_count(doc: Document, rng: TokenRange) -> int:
    doc.check_range(rng)
    return sum(1 for t in doc.tokens[rng.start:rng.end + 1] if t.kind == WORD)
