/** Wire types for the selection service (UTF-8 JSON, stable field order). */

export interface TokenInfo {
  index: number;
  text: string;
  kind: "word" | "punct";
  char_start: number;
  char_end: number;
  sentence: number;
}

export interface SessionDescriptor {
  session_id: string;
  mode: "word" | "chunk";
  fallback: boolean;
  tokens: TokenInfo[];
}

export interface EngineEvent {
  seq: number;
  kind:
    | "Activated"
    | "SelectionChanged"
    | "HapticTick"
    | "BracketsUpdated"
    | "ProgressAlpha"
    | "Cleared"
    | "Completed";
  t_ms: number;
  range?: [number, number];
  backward?: [number, number][];
  forward?: [number, number][];
  alpha?: number;
  pending?: [number, number] | null;
}

export interface Snapshot {
  session_id: string;
  seq: number;
  mode: string;
  fallback: boolean;
  phase: string;
  selection: [number, number] | null;
  brackets: { backward: [number, number][]; forward: [number, number][] } | null;
  alpha: number;
  pending: [number, number] | null;
}

export type TraceEventKind = "down" | "move" | "up" | "tick";

export interface TraceEventInput {
  kind: TraceEventKind;
  t_ms: number;
  x_px?: number;
  y_px?: number;
  token_hit?: number | null;
}

export interface EngineConfig {
  ppi: number;
  d_word_mm: number;
  d_chunk_mm: number;
  longpress_ms: number;
  slop_mm: number;
  alpha_max?: number;
}

export interface CreateSessionRequest {
  text: string;
  mode: "word" | "chunk";
  config?: EngineConfig;
  parse?: { lines?: string[]; endpoint?: string; timeout?: number; fallback?: boolean };
}
