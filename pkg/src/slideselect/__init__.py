"""Slide-driven coarse text selection.

A selection grows or shrinks from an anchor word as a function of a
one-dimensional slide distance: by words, or by constituency-derived
chunks with rewind, clutching, and feedforward bracket previews.
"""

from .chunking import (BACKWARD, FORWARD, BracketPreview, Chunk,
                       adjust_punctuation, compute_brackets,
                       expansion_sequence, next_sibling_chunk)
from .engine import (CHUNK_MODE, WORD_MODE, EngineEvent, GestureConfig,
                     GestureEngine, GestureState, progress_alpha,
                     units_from_distance)
from .replay import (TraceEvent, TrialMetrics, TrialSpec, aggregate,
                     run_trial, synthesize_trace)
from .textmodel import (Document, Token, TokenRange, range_text, tokenize,
                        word_count)
from .treebank import (ParseNode, ParseTree, fallback_tree,
                       fetch_external_parses, parse_bracketed, serialize_tree)

__all__ = [
    "BACKWARD", "FORWARD", "BracketPreview", "Chunk", "CHUNK_MODE",
    "Document", "EngineEvent", "GestureConfig", "GestureEngine",
    "GestureState", "ParseNode", "ParseTree", "Token", "TokenRange",
    "TraceEvent", "TrialMetrics", "TrialSpec", "WORD_MODE",
    "adjust_punctuation", "aggregate", "compute_brackets",
    "expansion_sequence", "fallback_tree", "fetch_external_parses",
    "next_sibling_chunk", "parse_bracketed", "progress_alpha", "range_text",
    "run_trial", "serialize_tree", "synthesize_trace", "tokenize",
    "units_from_distance", "word_count",
]
