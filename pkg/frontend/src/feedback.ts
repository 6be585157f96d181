import type { EngineEvent } from "./protocol.js";

/**
 * Visual state is a pure fold over the engine's event stream: the UI
 * holds no selection logic of its own, so a scripted replay through
 * this reducer matches the engine state exactly.
 */
export interface VisualState {
  selection: [number, number] | null;
  brackets: { backward: [number, number][]; forward: [number, number][] } | null;
  alpha: number;
  pending: [number, number] | null;
  completed: boolean;
  selectionChanges: number;
  hapticTicks: number;
  lastSeq: number;
}

export function initialState(): VisualState {
  return {
    selection: null,
    brackets: null,
    alpha: 0,
    pending: null,
    completed: false,
    selectionChanges: 0,
    hapticTicks: 0,
    lastSeq: 0,
  };
}

export function applyEvent(state: VisualState, event: EngineEvent): VisualState {
  const next = { ...state, lastSeq: event.seq ?? state.lastSeq };
  switch (event.kind) {
    case "SelectionChanged":
      next.selection = event.range ?? null;
      next.selectionChanges = state.selectionChanges + 1;
      break;
    case "BracketsUpdated":
      next.brackets = {
        backward: event.backward ?? [],
        forward: event.forward ?? [],
      };
      break;
    case "ProgressAlpha":
      next.alpha = event.alpha ?? 0;
      next.pending = event.pending ?? null;
      break;
    case "HapticTick":
      next.hapticTicks = state.hapticTicks + 1;
      break;
    case "Cleared":
      next.selection = null;
      next.brackets = null;
      next.alpha = 0;
      next.pending = null;
      break;
    case "Completed":
      next.completed = true;
      break;
    case "Activated":
      break;
  }
  return next;
}

export function applyEvents(
  state: VisualState,
  events: EngineEvent[],
): VisualState {
  // events apply in sequence order; buffer anything that arrives early
  const ordered = [...events].sort((a, b) => a.seq - b.seq);
  return ordered.reduce(applyEvent, state);
}
