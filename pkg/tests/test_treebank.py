import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from slideselect.textmodel import tokenize
from slideselect.treebank import (AlignmentError, BracketParseError,
                                  ParseServiceError, document_from_parse_lines,
                                  fallback_tree, fetch_external_parses,
                                  parse_bracketed, serialize_tree)

from corpus import CORPUS


def test_single_sentence_structure():
    doc = tokenize("The fox")
    tree = parse_bracketed(doc, ["(ROOT (NP (DT The) (NN fox)))"])
    root = tree.node(tree.root)
    assert root.parent is None
    assert len(root.children) == 1
    sent = tree.node(root.children[0])
    assert sent.label == "ROOT"
    np = tree.node(sent.children[0])
    assert np.label == "NP"
    assert [tree.node(c).label for c in np.children] == ["DT", "NN"]
    leaves = [tree.node(tree.leaf_of_token[i]) for i in range(2)]
    assert [(l.span.start, l.span.end) for l in leaves] == [(0, 0), (1, 1)]


def test_two_one_word_sentences():
    doc = tokenize("Hi! Go.")
    tree = parse_bracketed(doc, ["(ROOT (UH Hi) (. !))", "(ROOT (VB Go) (. .))"])
    assert len(tree.node(tree.root).children) == 2


def test_unbalanced_brackets_report_position():
    doc = tokenize("The fox")
    with pytest.raises(BracketParseError) as err:
        parse_bracketed(doc, ["(ROOT (NP (DT The) (NN fox))"])
    assert err.value.line == 1
    assert err.value.column >= 1
    with pytest.raises(BracketParseError):
        parse_bracketed(doc, ["(ROOT (NP (DT The) (NN fox))))"])


def test_leaf_count_mismatch_names_sentence():
    doc = tokenize("The fox runs.")
    with pytest.raises(AlignmentError, match="sentence 1"):
        parse_bracketed(doc, ["(ROOT (NP (DT The) (NN fox)))"])


def test_sentence_count_mismatch():
    doc = tokenize("Hi! Go.")
    with pytest.raises(AlignmentError, match="2 sentences"):
        parse_bracketed(doc, ["(ROOT (UH Hi) (. !))"])


def test_fallback_tree_depths():
    doc = tokenize("The fox. It runs.")
    tree = fallback_tree(doc)
    for i in range(len(doc.tokens)):
        leaf = tree.leaf_of_token[i]
        assert tree.depth(leaf) == 2
        assert not tree.node(leaf).children
    assert len(tree.node(tree.root).children) == 2
    assert tree.flat_sentences == frozenset(tree.node(tree.root).children)


def test_fallback_tree_empty_document():
    tree = fallback_tree(tokenize(""))
    assert tree.node(tree.root).children == ()


def test_ancestors_terminate_at_root(corpus_trees):
    for doc, tree in corpus_trees:
        for i in range(len(doc.tokens)):
            chain = tree.ancestors(tree.leaf_of_token[i])
            assert chain[-1] == tree.root


def test_internal_spans_union_children(corpus_trees):
    for doc, tree in corpus_trees:
        for node in tree.nodes:
            if node.is_leaf or node.id == tree.root:
                continue
            kids = [tree.node(c) for c in node.children]
            assert node.span.start == kids[0].span.start
            assert node.span.end == kids[-1].span.end
            for a, b in zip(kids, kids[1:]):
                assert b.span.start == a.span.end + 1


def test_roundtrip_isomorphic(corpus_trees):
    def shape(tree, node_id):
        node = tree.node(node_id)
        if node.is_leaf:
            return (node.label, node.span.start, node.span.end)
        return (node.label, node.span.start, node.span.end,
                tuple(shape(tree, c) for c in node.children))

    for doc, tree in corpus_trees:
        lines = serialize_tree(tree)
        again = parse_bracketed(doc, lines)
        assert shape(tree, tree.root) == shape(again, again.root)


def test_corpus_aligns_with_tokenizer():
    for text, lines in CORPUS:
        doc = tokenize(text)
        tree = parse_bracketed(doc, lines)  # raises on any mismatch
        assert len(tree.leaf_of_token) == len(doc.tokens)


def test_leaf_authoritative_rebuild():
    # parse tokenizes "cannot" as two leaves; the document is rebuilt
    text = "She cannot go."
    lines = ["(ROOT (S (NP (PRP She)) (VP (MD can) (VB not) (VP (VB go))) (. .)))"]
    doc, tree = document_from_parse_lines(text, lines)
    assert [t.text for t in doc.tokens] == ["She", "can", "not", "go", "."]
    assert doc.tokens[1].char_start == text.index("can")
    assert doc.tokens[2].char_start == text.index("not")
    assert doc.raw_text == text
    assert len(tree.leaf_of_token) == 5


def test_rebuild_handles_ptb_escapes():
    text = "a (b) c"
    lines = ["(ROOT (X (T a) (-LRB- -LRB-) (T b) (-RRB- -RRB-) (T c)))"]
    doc, tree = document_from_parse_lines(text, lines)
    assert [t.text for t in doc.tokens] == ["a", "(", "b", ")", "c"]


def test_rebuild_failure_raises():
    with pytest.raises(AlignmentError, match="sentence 1"):
        document_from_parse_lines("plain words here.", ["(ROOT (X (T missing)))"])


def test_matching_parse_keeps_rule_based_tokens():
    text = "The fox runs."
    lines = ["(ROOT (S (NP (DT The) (NN fox)) (VP (VBZ runs)) (. .)))"]
    doc, tree = document_from_parse_lines(text, lines)
    assert doc == tokenize(text)


class _ParserStub(BaseHTTPRequestHandler):
    payload: bytes = b"{}"

    def do_POST(self):
        length = int(self.headers.get("Content-Length") or 0)
        self.rfile.read(length)
        self.send_response(200)
        self.send_header("Content-Length", str(len(self.payload)))
        self.end_headers()
        self.wfile.write(self.payload)

    def log_message(self, fmt, *args):
        pass


@pytest.fixture
def parser_stub():
    server = ThreadingHTTPServer(("127.0.0.1", 0), _ParserStub)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield server
    server.shutdown()
    server.server_close()


def test_fetch_external_parses_happy_path(parser_stub):
    parse = "(ROOT (S (NP (DT The) (NN fox)) (VP (VBZ runs)) (. .)))"
    _ParserStub.payload = json.dumps(
        {"sentences": [{"parse": "(ROOT\n  (S (NP (DT The) (NN fox)) "
                                 "(VP (VBZ runs)) (. .)))"}]}).encode()
    url = f"http://127.0.0.1:{parser_stub.server_address[1]}/"
    lines = fetch_external_parses(url, "The fox runs.", timeout=2.0)
    assert lines == [parse.replace("(ROOT (S", "(ROOT (S")]
    doc = tokenize("The fox runs.")
    tree = parse_bracketed(doc, lines)
    assert len(tree.leaf_of_token) == 4


def test_fetch_external_parses_unreachable():
    with pytest.raises(ParseServiceError):
        fetch_external_parses("http://127.0.0.1:1/", "text", timeout=0.2)


def test_fetch_external_parses_garbage(parser_stub):
    _ParserStub.payload = b"not json at all"
    url = f"http://127.0.0.1:{parser_stub.server_address[1]}/"
    with pytest.raises(ParseServiceError):
        fetch_external_parses(url, "text", timeout=2.0)


def test_parse_file_blank_lines_separate_paragraphs(tmp_path):
    from slideselect.treebank import load_parse_file

    path = tmp_path / "doc.parse"
    path.write_text("(ROOT (UH Hi) (. !))\n\n(ROOT (VB Go) (. .))\n",
                    encoding="utf-8")
    assert load_parse_file(str(path)) == [
        "(ROOT (UH Hi) (. !))", "(ROOT (VB Go) (. .))"]


def test_flat_sentences_detected_mixed():
    doc = tokenize("Hi! The fox runs.")
    tree = parse_bracketed(doc, [
        "(ROOT Hi !)",
        "(ROOT (S (NP (DT The) (NN fox)) (VP (VBZ runs)) (. .)))"])
    sents = tree.node(tree.root).children
    assert sents[0] in tree.flat_sentences
    assert sents[1] not in tree.flat_sentences
