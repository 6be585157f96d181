"""Deterministic trial replay: drive the engine from recorded or
synthesized touch traces and compute per-trial measures.

Completion time runs from the first touch-down to the last selection
change; overshoots count moving-end crossings beyond the target
boundary; attempts count selection restarts (clear-outside followed by
a new activation).
"""

from __future__ import annotations

import json
import re
import statistics
from dataclasses import dataclass

from .chunking import BACKWARD, FORWARD
from .engine import (ACTIVATED, CLEARED, COMPLETED, SELECTION_CHANGED,
                     EngineEvent, GestureConfig, GestureEngine,
                     expansion_states, retract_words)
from .textmodel import Document, TokenRange, tokenize
from .treebank import ParseTree, document_from_parse_lines, fallback_tree

DOWN = "down"
MOVE = "move"
UP = "up"


class TraceError(ValueError):
    """Malformed trace input; message names the offending line."""


class SynthesisError(ValueError):
    """Target not reachable under the requested policy."""


@dataclass(frozen=True)
class TraceEvent:
    t_ms: int
    kind: str
    x_px: float
    y_px: float
    token_hit: int | None = None

    def to_obj(self) -> dict:
        return {"t_ms": self.t_ms, "kind": self.kind, "x_px": self.x_px,
                "y_px": self.y_px, "token_hit": self.token_hit}


@dataclass(frozen=True)
class TrialSpec:
    text: str
    parse_lines: tuple[str, ...] | None
    mode: str
    config: GestureConfig
    target: TokenRange
    tag: str = ""

    def build(self) -> tuple[Document, ParseTree]:
        if self.parse_lines:
            return document_from_parse_lines(self.text, list(self.parse_lines))
        doc = tokenize(self.text)
        return doc, fallback_tree(doc)


@dataclass(frozen=True)
class TrialMetrics:
    completed: bool
    completion_ms: int | None
    overshoots: int
    attempts: int


def validate_trace(events: list[TraceEvent]) -> None:
    last_t = None
    open_touch = False
    for line_no, ev in enumerate(events, start=1):
        if ev.kind not in (DOWN, MOVE, UP):
            raise TraceError(f"line {line_no}: unknown kind {ev.kind!r}")
        if last_t is not None and ev.t_ms < last_t:
            raise TraceError(f"line {line_no}: timestamp {ev.t_ms} decreases")
        last_t = ev.t_ms
        if ev.kind == DOWN:
            if open_touch:
                raise TraceError(f"line {line_no}: down while touch is open")
            open_touch = True
        elif ev.kind == UP:
            if not open_touch:
                raise TraceError(f"line {line_no}: up without a down")
            open_touch = False


def run_trial(spec: TrialSpec, trace: list[TraceEvent]) -> tuple[TrialMetrics, list[EngineEvent]]:
    """Feed a trace through a fresh engine and measure the trial."""
    validate_trace(trace)
    doc, tree = spec.build()
    doc.check_range(spec.target)
    engine = GestureEngine(doc, tree, spec.mode, spec.config, target=spec.target)

    log: list[EngineEvent] = []
    first_down_t: int | None = None
    last_change_t: int | None = None
    prev_selection: TokenRange | None = None
    overshoots = 0
    extra_attempts = 0
    cleared_pending = False
    completed = False

    for ev in trace:
        if ev.kind == DOWN and first_down_t is None:
            first_down_t = ev.t_ms
        events = engine.process(ev.kind, ev.t_ms, ev.y_px, ev.token_hit)
        direction = engine.state.direction
        # a fresh activation emits the anchor-word jump, which is not a
        # moving-end transition and never counts as an overshoot
        anchor_jump = (engine.state.base_selection is None
                       and any(e.kind == ACTIVATED for e in events))
        for event in events:
            log.append(event)
            if event.kind == CLEARED:
                cleared_pending = True
            elif event.kind == ACTIVATED and cleared_pending:
                extra_attempts += 1
                cleared_pending = False
            elif event.kind == SELECTION_CHANGED:
                last_change_t = event.t_ms
                selection = TokenRange(*event.data["range"])
                if anchor_jump:
                    anchor_jump = False
                    prev_selection = selection
                    continue
                if prev_selection is not None and direction is not None:
                    if direction == FORWARD:
                        crossed = (prev_selection.end <= spec.target.end
                                   < selection.end)
                    else:
                        crossed = (prev_selection.start >= spec.target.start
                                   > selection.start)
                    if crossed:
                        overshoots += 1
                prev_selection = selection
            elif event.kind == COMPLETED:
                completed = True
        if completed:
            break

    completion_ms = None
    if completed and first_down_t is not None and last_change_t is not None:
        completion_ms = last_change_t - first_down_t
    metrics = TrialMetrics(completed=completed, completion_ms=completion_ms,
                           overshoots=overshoots, attempts=1 + extra_attempts)
    return metrics, log


# ---------------------------------------------------------------------------
# Trace synthesis

@dataclass(frozen=True)
class GesturePlan:
    """One press: optional slide waypoints in signed unit-axis pixels."""
    anchor: int
    direction: str | None
    waypoints: tuple[float, ...] = ()


def _mid_px(config: GestureConfig, d_mm: float, units: int) -> float:
    """Pixel distance in the middle of the quantization band for n units."""
    return config.px(d_mm * (units + 0.5))


def _plan_to_trace(plans: list[GesturePlan], config: GestureConfig,
                   t_start: int = 1000, y_origin: float = 400.0,
                   step_ms: int = 16) -> list[TraceEvent]:
    events: list[TraceEvent] = []
    t = t_start
    for plan in plans:
        events.append(TraceEvent(t, DOWN, 100.0, y_origin, plan.anchor))
        t += config.longpress_ms
        for p in plan.waypoints:
            t += step_ms
            y = y_origin + p if plan.direction == FORWARD else y_origin - p
            events.append(TraceEvent(t, MOVE, 100.0, y, None))
        t += step_ms
        events.append(TraceEvent(t, UP, 100.0, events[-1].y_px, None))
        t += step_ms
    return events


def _exact_plan(doc: Document, tree: ParseTree, mode: str, base: TokenRange,
                direction: str, want: TokenRange) -> int | None:
    for n, state in enumerate(expansion_states(doc, tree, mode, base, direction)):
        if state == want:
            return n
    return None


def _rewind_landing(doc: Document, state: TokenRange, direction: str,
                    want: TokenRange) -> int | None:
    r = 1
    while True:
        rng, r_eff = retract_words(doc, state, direction, r)
        if r_eff < r:
            return None
        if rng == want:
            return r
        if direction == FORWARD and rng.end < want.end:
            return None
        if direction == BACKWARD and rng.start > want.start:
            return None
        r += 1


def _overshoot_plan(doc: Document, tree: ParseTree, mode: str,
                    config: GestureConfig, base: TokenRange, direction: str,
                    want: TokenRange, crossings: int) -> GesturePlan | None:
    states = expansion_states(doc, tree, mode, base, direction)
    d_unit = config.unit_distance_mm(mode)
    beyond = None
    for n, state in enumerate(states):
        past = (state.end > want.end if direction == FORWARD
                else state.start < want.start)
        if past:
            beyond = n
            break
    if beyond is None:
        return None
    landing = _rewind_landing(doc, states[beyond], direction, want)
    if landing is None:
        return None
    # oscillation depth: enough words to pull the moving end back inside
    under = None
    r = 1
    while True:
        rng, r_eff = retract_words(doc, states[beyond], direction, r)
        if r_eff < r:
            break
        inside = (rng.end <= want.end if direction == FORWARD
                  else rng.start >= want.start)
        if inside:
            under = r
            break
        r += 1
    if crossings > 1 and under is None:
        return None
    p_top = _mid_px(config, d_unit, beyond)
    waypoints = [p_top]
    for _ in range(crossings - 1):
        waypoints.append(p_top - _mid_px(config, config.d_word_mm, under))
        waypoints.append(p_top)
    waypoints.append(p_top - _mid_px(config, config.d_word_mm, landing))
    return GesturePlan(base.start, direction, tuple(waypoints))


def _ideal_plans(doc: Document, tree: ParseTree, mode: str,
                 config: GestureConfig, target: TokenRange) -> list[GesturePlan] | None:
    d_unit = config.unit_distance_mm(mode)
    if len(target) == 1:
        return [GesturePlan(target.start, None)]
    n = _exact_plan(doc, tree, mode, TokenRange(target.start, target.start),
                    FORWARD, target)
    if n is not None:
        return [GesturePlan(target.start, FORWARD, (_mid_px(config, d_unit, n),))]
    n = _exact_plan(doc, tree, mode, TokenRange(target.end, target.end),
                    BACKWARD, target)
    if n is not None:
        return [GesturePlan(target.end, BACKWARD, (_mid_px(config, d_unit, n),))]
    # two gestures from a mid anchor: cover one side, clutch for the other
    for first_dir, second_dir in ((FORWARD, BACKWARD), (BACKWARD, FORWARD)):
        for anchor in doc.word_indices(target):
            if first_dir == FORWARD:
                first = TokenRange(anchor, target.end)
            else:
                first = TokenRange(target.start, anchor)
            n1 = _exact_plan(doc, tree, mode, TokenRange(anchor, anchor),
                             first_dir, first)
            if n1 is None:
                continue
            n2 = _exact_plan(doc, tree, mode, first, second_dir, target)
            if n2 is None:
                continue
            plans = []
            if n1:
                plans.append(GesturePlan(anchor, first_dir,
                                         (_mid_px(config, d_unit, n1),)))
            else:
                plans.append(GesturePlan(anchor, None))
            if n2:
                plans.append(GesturePlan(anchor, second_dir,
                                         (_mid_px(config, d_unit, n2),)))
            return plans
    return None


def synthesize_trace(spec: TrialSpec, policy: str) -> list[TraceEvent]:
    """Build a trace that performs the trial under the given policy.

    Policies: ``ideal`` (pure expansion, zero overshoot), ``overshooting(k)``
    (slides past the target and rewinds, k boundary crossings), and
    ``clutching(n)`` (the ideal expansion split across n gestures).
    """
    doc, tree = spec.build()
    doc.check_range(spec.target)
    config = spec.config
    d_unit = config.unit_distance_mm(spec.mode)

    match = re.fullmatch(r"(ideal|overshooting|clutching)(?:[(:](\d+)\)?)?", policy)
    if not match:
        raise SynthesisError(f"unknown policy {policy!r}")
    name, arg = match.group(1), match.group(2)

    if name == "ideal":
        plans = _ideal_plans(doc, tree, spec.mode, config, spec.target)
        if plans is None:
            raise SynthesisError("target not reachable by pure expansion")
        return _plan_to_trace(plans, config)

    if name == "overshooting":
        crossings = int(arg or "1")
        if crossings < 1:
            raise SynthesisError("overshooting needs k >= 1")
        for direction, anchor in ((FORWARD, spec.target.start),
                                  (BACKWARD, spec.target.end)):
            base = TokenRange(anchor, anchor)
            plan = _overshoot_plan(doc, tree, spec.mode, config, base,
                                   direction, spec.target, crossings)
            if plan is not None:
                return _plan_to_trace([GesturePlan(anchor, direction,
                                                   plan.waypoints)], config)
        raise SynthesisError("no overshoot-and-rewind landing on this target")

    # clutching(n)
    gestures = int(arg or "2")
    if gestures < 1:
        raise SynthesisError("clutching needs n >= 1")
    for direction, anchor in ((FORWARD, spec.target.start),
                              (BACKWARD, spec.target.end)):
        base = TokenRange(anchor, anchor)
        total = _exact_plan(doc, tree, spec.mode, base, direction, spec.target)
        if total is None or total < gestures:
            continue
        states = expansion_states(doc, tree, spec.mode, base, direction)
        share, remainder = divmod(total, gestures)
        plans = []
        done = 0
        for g in range(gestures):
            units = share + (1 if g < remainder else 0)
            # clutch gestures expand from the carried selection, so each
            # plan needs only its own unit count
            plans.append(GesturePlan(anchor, direction,
                                     (_mid_px(config, d_unit, units),)))
            done += units
        assert done == total and states[total] == spec.target
        return _plan_to_trace(plans, config)
    raise SynthesisError("target not reachable by split expansion")


# ---------------------------------------------------------------------------
# Aggregation

def aggregate(rows: list[dict], keys: list[str]) -> list[dict]:
    """Group per-trial rows and summarize the measures per group."""
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        groups.setdefault(tuple(row.get(k, "") for k in keys), []).append(row)
    out = []
    for group_key in sorted(groups, key=lambda k: tuple(str(v) for v in k)):
        members = groups[group_key]
        times = [r["completion_ms"] for r in members
                 if r.get("completed") and r.get("completion_ms") is not None]
        summary = {k: v for k, v in zip(keys, group_key)}
        summary.update({
            "trials": len(members),
            "completed": sum(1 for r in members if r.get("completed")),
            "mean_completion_ms": round(statistics.mean(times), 3) if times else "",
            "median_completion_ms": round(statistics.median(times), 3) if times else "",
            "total_overshoots": sum(r.get("overshoots", 0) for r in members),
            "mean_attempts": round(statistics.mean(
                r.get("attempts", 1) for r in members), 3),
        })
        out.append(summary)
    return out


# ---------------------------------------------------------------------------
# File I/O

def trace_to_lines(trace: list[TraceEvent]) -> list[str]:
    return [json.dumps(ev.to_obj(), separators=(",", ":")) for ev in trace]


def load_trace_lines(lines: list[str]) -> list[TraceEvent]:
    events = []
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            events.append(TraceEvent(
                t_ms=int(obj["t_ms"]), kind=str(obj["kind"]),
                x_px=float(obj.get("x_px", 0.0)), y_px=float(obj["y_px"]),
                token_hit=(None if obj.get("token_hit") is None
                           else int(obj["token_hit"]))))
        except (ValueError, KeyError, TypeError) as exc:
            raise TraceError(f"line {line_no}: {exc}") from exc
    return events


def load_trace_file(path: str) -> list[TraceEvent]:
    with open(path, encoding="utf-8") as fh:
        return load_trace_lines(fh.read().splitlines())


def config_from_obj(obj: dict) -> GestureConfig:
    known = {"ppi", "d_word_mm", "d_chunk_mm", "longpress_ms", "slop_mm",
             "alpha_max", "bracket_levels"}
    unknown = set(obj) - known
    if unknown:
        raise ValueError(f"unknown config fields: {sorted(unknown)}")
    return GestureConfig(**obj)


def load_manifest_file(path: str) -> TrialSpec:
    """Trial manifest: {doc, parse, mode, config, target, tag?}; doc/parse
    are paths resolved relative to the manifest."""
    import os

    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    base_dir = os.path.dirname(os.path.abspath(path))

    def resolve(ref: str) -> str:
        return ref if os.path.isabs(ref) else os.path.join(base_dir, ref)

    with open(resolve(obj["doc"]), encoding="utf-8") as fh:
        text = fh.read()
    parse_lines = None
    if obj.get("parse"):
        from .treebank import load_parse_file
        parse_lines = tuple(load_parse_file(resolve(obj["parse"])))
    target = obj["target"]
    return TrialSpec(
        text=text,
        parse_lines=parse_lines,
        mode=obj["mode"],
        config=config_from_obj(obj.get("config", {})),
        target=TokenRange(int(target[0]), int(target[1])),
        tag=str(obj.get("tag", "")),
    )
