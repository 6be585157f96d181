"""One-dimensional slide-selection state machine.

A gesture starts with a long press on a token, locks a direction once
the slide covers one unit's trigger distance, expands the selection by
word or chunk units driven by the furthest point reached, and rewinds
by words when the finger backs up.  Lifting keeps the selection so a
new press on it can continue expanding (clutching).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .chunking import BACKWARD, FORWARD, compute_brackets, next_sibling_chunk
from .textmodel import Document, TokenRange, word_count
from .treebank import ParseTree

WORD_MODE = "word"
CHUNK_MODE = "chunk"

IDLE = "idle"
PRESSING = "pressing"
ACTIVE = "active"
ENDED = "ended"

ACTIVATED = "Activated"
SELECTION_CHANGED = "SelectionChanged"
HAPTIC_TICK = "HapticTick"
BRACKETS_UPDATED = "BracketsUpdated"
PROGRESS_ALPHA = "ProgressAlpha"
CLEARED = "Cleared"
COMPLETED = "Completed"

MM_PER_INCH = Fraction(254, 10)


class ConfigError(ValueError):
    """Invalid gesture configuration value."""


class ProtocolError(RuntimeError):
    """Out-of-order or ill-phased input event."""


@dataclass(frozen=True)
class GestureConfig:
    ppi: float
    d_word_mm: float = 1.5
    d_chunk_mm: float = 10.0
    longpress_ms: int = 500
    slop_mm: float = 1.0
    alpha_max: float = 0.6
    bracket_levels: int = 3

    def __post_init__(self) -> None:
        for name in ("ppi", "d_word_mm", "d_chunk_mm", "longpress_ms", "slop_mm"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if not 0 < self.alpha_max <= 1:
            raise ConfigError("alpha_max must be in (0, 1]")

    def px(self, mm: float) -> float:
        return mm * self.ppi / 25.4

    def mm(self, px: float) -> float:
        return px * 25.4 / self.ppi

    def unit_distance_mm(self, mode: str) -> float:
        return self.d_chunk_mm if mode == CHUNK_MODE else self.d_word_mm


def units_from_distance(p_px: float, ppi: float, d_mm: float) -> int:
    """Number of units covered by a slide of p_px pixels.

    floor((25.4 / ppi) * p_px / d_mm), evaluated exactly so quantization
    boundaries land where the arithmetic says they do.
    """
    if ppi <= 0 or d_mm <= 0:
        raise ConfigError("ppi and trigger distance must be positive")
    if p_px <= 0:
        return 0
    n = MM_PER_INCH * Fraction(p_px) / (Fraction(str(ppi)) * Fraction(str(d_mm)))
    return math.floor(n)


def progress_alpha(p_since_last_unit_px: float, ppi: float, d_mm: float,
                   alpha_max: float) -> float:
    """Background density for the pending unit: linear up to alpha_max."""
    mm = p_since_last_unit_px * 25.4 / ppi
    return alpha_max * min(1.0, max(0.0, mm / d_mm))


def step_expand(doc: Document, tree: ParseTree, mode: str, rng: TokenRange,
                direction: str) -> TokenRange | None:
    """Grow a selection by one unit, or None at the corpus end.

    Word units step to the next word token, sweeping punctuation between.
    Chunk units merge successive siblings until the unit brings at least
    one word, so punctuation-only chunks never cost a trigger distance;
    inside flat (unparsed) sentences a chunk unit degrades to a word unit.
    """
    if mode == WORD_MODE:
        if direction == FORWARD:
            word = doc.word_after(rng.end)
            return None if word is None else TokenRange(rng.start, word)
        word = doc.word_before(rng.start)
        return None if word is None else TokenRange(word, rng.end)
    current = rng
    while True:
        chunk = next_sibling_chunk(tree, doc, current, direction)
        if chunk is None:
            return None
        node = tree.node(chunk.source_node)
        if node.id in tree.flat_sentences or node.parent in tree.flat_sentences:
            return step_expand(doc, tree, WORD_MODE, current, direction)
        current = current.union(chunk.range)
        if word_count(doc, chunk.range) > 0:
            return current


def retract_words(doc: Document, rng: TokenRange, direction: str,
                  k: int) -> tuple[TokenRange, int]:
    """Drop k words (and anything beyond them) off the moving end.

    The fixed end never moves and at least one token survives; returns
    the new range and the number of words actually dropped.
    """
    if k <= 0:
        return rng, 0
    words = doc.word_indices(rng)
    if direction == FORWARD:
        limit = len(words) - 1 if (words and words[0] == rng.start) else len(words)
        k_eff = min(k, limit)
        if k_eff <= 0:
            return rng, 0
        return TokenRange(rng.start, words[len(words) - k_eff] - 1), k_eff
    limit = len(words) - 1 if (words and words[-1] == rng.end) else len(words)
    k_eff = min(k, limit)
    if k_eff <= 0:
        return rng, 0
    return TokenRange(words[k_eff - 1] + 1, rng.end), k_eff


def expansion_states(doc: Document, tree: ParseTree, mode: str,
                     base: TokenRange, direction: str) -> list[TokenRange]:
    """All selections reachable by pure expansion: index n = n units."""
    states = [base]
    while True:
        grown = step_expand(doc, tree, mode, states[-1], direction)
        if grown is None:
            return states
        states.append(grown)


@dataclass
class EngineEvent:
    kind: str
    t_ms: int
    data: dict = field(default_factory=dict)

    def to_obj(self) -> dict:
        return {"kind": self.kind, "t_ms": self.t_ms, **self.data}


@dataclass
class GestureState:
    phase: str = IDLE
    anchor_token: int | None = None
    base_selection: TokenRange | None = None
    direction: str | None = None
    press_y: float = 0.0
    press_t: int = 0
    moved_px: float = 0.0
    p_px: float = 0.0
    p_max_px: float = 0.0
    n_units: int = 0
    r_words: int = 0
    selection: TokenRange | None = None


class GestureEngine:
    """Per-session selection engine; one in-flight gesture at a time.

    All entry points take monotonically nondecreasing timestamps and
    return the ordered engine events they produced.
    """

    def __init__(self, doc: Document, tree: ParseTree, mode: str,
                 config: GestureConfig, target: TokenRange | None = None):
        if mode not in (WORD_MODE, CHUNK_MODE):
            raise ConfigError(f"unknown mode {mode!r}")
        self.doc = doc
        self.tree = tree
        self.mode = mode
        self.config = config
        self.target = target
        self.state = GestureState()
        self._last_t: int | None = None
        self._expansions: list[TokenRange] = []
        self._expansion_full = False
        self._alpha_sent: tuple[float, tuple[int, int] | None] = (0.0, None)

    # -- trace entry point --------------------------------------------------

    def process(self, kind: str, t_ms: int, y_px: float = 0.0,
                token_hit: int | None = None) -> list[EngineEvent]:
        events = self._maybe_activate(t_ms)
        if kind == "down":
            events += self.begin_touch(token_hit, y_px, t_ms)
        elif kind == "move":
            events += self.update_touch(y_px, t_ms)
        elif kind == "up":
            events += self.end_touch(t_ms)
        elif kind == "tick":
            pass  # activation already handled above
        else:
            raise ProtocolError(f"unknown trace event kind {kind!r}")
        return events

    def tick(self, t_ms: int) -> list[EngineEvent]:
        self._check_time(t_ms)
        return self._maybe_activate(t_ms)

    # -- gesture phases -----------------------------------------------------

    def begin_touch(self, token_hit: int | None, y_px: float,
                    t_ms: int) -> list[EngineEvent]:
        self._check_time(t_ms)
        st = self.state
        if st.phase not in (IDLE, ENDED):
            raise ProtocolError(f"touch down while {st.phase}")
        if token_hit is None:
            events = []
            if st.selection is not None:
                st.selection = None
                events.append(EngineEvent(CLEARED, t_ms))
            st.phase = IDLE
            return events
        if token_hit < 0 or token_hit >= len(self.doc.tokens):
            raise ProtocolError(f"token_hit {token_hit} out of bounds")
        st.phase = PRESSING
        st.anchor_token = token_hit
        st.base_selection = (
            st.selection
            if st.selection is not None and st.selection.contains(token_hit)
            else None)
        st.press_y = y_px
        st.press_t = t_ms
        st.moved_px = 0.0
        st.direction = None
        st.p_px = 0.0
        st.p_max_px = 0.0
        st.n_units = 0
        st.r_words = 0
        return []

    def update_touch(self, y_px: float, t_ms: int) -> list[EngineEvent]:
        self._check_time(t_ms)
        st = self.state
        if st.phase == PRESSING:
            st.moved_px = max(st.moved_px, abs(y_px - st.press_y))
            if st.moved_px > self.config.px(self.config.slop_mm):
                # moved too far during the hold: hand the gesture back
                st.phase = IDLE
            return []
        if st.phase != ACTIVE:
            return []
        return self._slide(y_px, t_ms)

    def end_touch(self, t_ms: int) -> list[EngineEvent]:
        self._check_time(t_ms)
        st = self.state
        if st.phase == PRESSING:
            st.phase = IDLE
            return []
        if st.phase != ACTIVE:
            return []
        st.phase = ENDED
        if self.target is not None and st.selection == self.target:
            return [EngineEvent(COMPLETED, t_ms)]
        return []

    # -- internals ----------------------------------------------------------

    def _check_time(self, t_ms: int) -> None:
        if self._last_t is not None and t_ms < self._last_t:
            raise ProtocolError(
                f"timestamp {t_ms} precedes {self._last_t}")
        self._last_t = t_ms

    def _maybe_activate(self, now_ms: int) -> list[EngineEvent]:
        st = self.state
        deadline = st.press_t + self.config.longpress_ms
        if st.phase != PRESSING or now_ms < deadline:
            return []
        if st.moved_px > self.config.px(self.config.slop_mm):
            st.phase = IDLE
            return []
        st.phase = ACTIVE
        events = [EngineEvent(ACTIVATED, deadline), EngineEvent(HAPTIC_TICK, deadline)]
        if st.base_selection is None:
            st.selection = TokenRange(st.anchor_token, st.anchor_token)
            events.append(self._selection_event(deadline))
            if self.mode == CHUNK_MODE:
                events.append(self._brackets_event(deadline))
        else:
            st.selection = st.base_selection
        self._expansions = [st.selection]
        self._expansion_full = False
        self._alpha_sent = (0.0, None)
        return events

    def _slide(self, y_px: float, t_ms: int) -> list[EngineEvent]:
        st = self.state
        cfg = self.config
        disp = y_px - st.press_y
        d_unit = cfg.unit_distance_mm(self.mode)
        events: list[EngineEvent] = []

        if st.direction is None:
            if units_from_distance(abs(disp), cfg.ppi, d_unit) >= 1:
                st.direction = FORWARD if disp > 0 else BACKWARD
                self._expansions = [st.selection]
                self._expansion_full = False
            else:
                if self.mode == CHUNK_MODE:
                    event = self._pre_lock_alpha(disp, t_ms)
                    if event is not None:
                        events.append(event)
                return events

        p_old = st.p_px
        p_new = disp if st.direction == FORWARD else -disp
        st.p_px = p_new
        st.p_max_px = max(st.p_max_px, p_new)
        n_raw = units_from_distance(st.p_max_px, cfg.ppi, d_unit)
        r_raw = units_from_distance(st.p_max_px - p_new, cfg.ppi, cfg.d_word_mm)

        expanded, n_eff = self._expanded(n_raw)
        _, r_eff = self._retracted(expanded, r_raw)

        if p_new >= p_old:
            steps = [(st.n_units, r) for r in range(st.r_words - 1, r_eff - 1, -1)]
            steps += [(n, 0) for n in range(st.n_units + 1, n_eff + 1)]
        else:
            steps = [(st.n_units, r) for r in range(st.r_words + 1, r_eff + 1)]
        for n, r in steps:
            rng, _ = self._expanded(n)
            rng, _ = self._retracted(rng, r)
            st.selection = rng
            events.append(self._selection_event(t_ms))
            events.append(EngineEvent(HAPTIC_TICK, t_ms))
            if self.mode == CHUNK_MODE:
                events.append(self._brackets_event(t_ms))
        st.n_units = n_eff
        st.r_words = r_eff

        if self.mode == CHUNK_MODE:
            event = self._locked_alpha(n_raw, t_ms)
            if event is not None:
                events.append(event)
        return events

    # expansion states are gesture-scoped: index n holds the selection
    # after n effective units from the gesture base
    def _expanded(self, n: int) -> tuple[TokenRange, int]:
        cache = self._expansions
        while len(cache) - 1 < n and not self._expansion_full:
            grown = step_expand(self.doc, self.tree, self.mode, cache[-1],
                                self.state.direction)
            if grown is None:
                self._expansion_full = True
            else:
                cache.append(grown)
        n_eff = min(n, len(cache) - 1)
        return cache[n_eff], n_eff

    def _retracted(self, rng: TokenRange, k: int) -> tuple[TokenRange, int]:
        return retract_words(self.doc, rng, self.state.direction, k)

    def _next_unit_span(self, rng: TokenRange, direction: str) -> TokenRange | None:
        """The span the next unit would merge, for pending-chunk feedback."""
        grown = step_expand(self.doc, self.tree, self.mode, rng, direction)
        if grown is None:
            return None
        if direction == FORWARD:
            return TokenRange(rng.end + 1, grown.end)
        return TokenRange(grown.start, rng.start - 1)

    # -- events ---------------------------------------------------------------

    def _selection_event(self, t_ms: int) -> EngineEvent:
        return EngineEvent(SELECTION_CHANGED, t_ms,
                           {"range": self.state.selection.as_pair()})

    def _brackets_event(self, t_ms: int) -> EngineEvent:
        preview = compute_brackets(self.tree, self.doc, self.state.selection,
                                   self.config.bracket_levels)
        return EngineEvent(BRACKETS_UPDATED, t_ms, {
            "backward": [c.range.as_pair() for c in preview.backward],
            "forward": [c.range.as_pair() for c in preview.forward],
        })

    def _alpha_event(self, alpha: float, pending: TokenRange | None,
                     t_ms: int) -> EngineEvent | None:
        alpha = round(alpha, 6)
        key = (alpha, None if pending is None else (pending.start, pending.end))
        if key == self._alpha_sent:
            return None
        self._alpha_sent = key
        return EngineEvent(PROGRESS_ALPHA, t_ms, {
            "alpha": alpha,
            "pending": None if pending is None else pending.as_pair(),
        })

    def _pre_lock_alpha(self, disp: float, t_ms: int) -> EngineEvent | None:
        cfg = self.config
        if disp == 0:
            return self._alpha_event(0.0, None, t_ms)
        direction = FORWARD if disp > 0 else BACKWARD
        pending = self._next_unit_span(self.state.selection, direction)
        if pending is None:
            return self._alpha_event(0.0, None, t_ms)
        alpha = progress_alpha(abs(disp), cfg.ppi,
                               cfg.unit_distance_mm(self.mode), cfg.alpha_max)
        return self._alpha_event(alpha, pending, t_ms)

    def _locked_alpha(self, n_raw: int, t_ms: int) -> EngineEvent | None:
        st = self.state
        cfg = self.config
        pending = None
        if st.r_words == 0 and st.n_units == n_raw:
            pending = self._next_unit_span(st.selection, st.direction)
        if pending is None:
            return self._alpha_event(0.0, None, t_ms)
        d_unit = cfg.unit_distance_mm(self.mode)
        threshold = cfg.px(n_raw * d_unit)
        alpha = progress_alpha(max(0.0, st.p_px - threshold), cfg.ppi, d_unit,
                               cfg.alpha_max)
        return self._alpha_event(alpha, pending, t_ms)


def event_log_lines(events: list[EngineEvent]) -> list[str]:
    """Fixed-field-order JSON line per event (kind, t_ms, payload)."""
    return [json.dumps(ev.to_obj(), ensure_ascii=False, separators=(",", ":"))
            for ev in events]
