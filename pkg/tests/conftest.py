import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from slideselect.textmodel import Document, tokenize
from slideselect.treebank import ParseTree, escape_leaf, parse_bracketed

from corpus import BENCHMARK_PARSE, BENCHMARK_TEXT, CORPUS


@pytest.fixture
def benchmark() -> tuple[Document, ParseTree]:
    doc = tokenize(BENCHMARK_TEXT)
    return doc, parse_bracketed(doc, [BENCHMARK_PARSE])


def load_corpus() -> list[tuple[Document, ParseTree]]:
    out = []
    for text, lines in CORPUS:
        doc = tokenize(text)
        out.append((doc, parse_bracketed(doc, lines)))
    return out


@pytest.fixture(scope="session")
def corpus_trees() -> list[tuple[Document, ParseTree]]:
    return load_corpus()


WORDS = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta",
         "iota", "kappa", "lamda", "mu", "nu", "xi", "omicron", "pi", "rho"]
PUNCT = [",", ";", ":", ")", '"']
FINAL = [".", "!", "?"]


def random_text(rng: random.Random, n_tokens: int, punct_prob: float = 0.2) -> str:
    """Space-separated blobs so the tokenizer yields exactly these tokens."""
    pieces = []
    for i in range(n_tokens):
        last = i == n_tokens - 1
        if not last and pieces and rng.random() < punct_prob and not pieces[-1] in PUNCT + FINAL:
            pieces.append(rng.choice(PUNCT + FINAL))
        else:
            pieces.append(rng.choice(WORDS))
    return " ".join(pieces)


def random_parse_line(rng: random.Random, texts: list[str]) -> str:
    labels = ["NP", "VP", "PP", "ADJP", "SBAR", "X", "FRAG"]

    def build(lo: int, hi: int) -> str:
        if hi - lo == 1:
            leaf = escape_leaf(texts[lo])
            if rng.random() < 0.7:
                return f"(T{rng.randrange(4)} {leaf})"
            return leaf
        cuts = sorted(rng.sample(range(lo + 1, hi),
                                 min(rng.randint(1, 3), hi - lo - 1)))
        parts = []
        prev = lo
        for cut in cuts + [hi]:
            parts.append(build(prev, cut))
            prev = cut
        return "(" + rng.choice(labels) + " " + " ".join(parts) + ")"

    return "(ROOT " + build(0, len(texts)) + ")"


def random_document(rng: random.Random, n_tokens: int,
                    punct_prob: float = 0.2) -> tuple[Document, ParseTree]:
    doc = tokenize(random_text(rng, n_tokens, punct_prob))
    lines = []
    for bound in doc.sentence_bounds:
        texts = [doc.tokens[i].text for i in range(bound.start, bound.end + 1)]
        lines.append(random_parse_line(rng, texts))
    return doc, parse_bracketed(doc, lines)
