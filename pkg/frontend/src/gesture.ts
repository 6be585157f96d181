import type { TraceEventInput } from "./protocol.js";

export interface GestureDriverOptions {
  /** Resolve a pointer position to a token index, or null outside text. */
  hitTest: (x: number, y: number) => number | null;
  /** Receives trace events to forward to the service. */
  send: (event: TraceEventInput) => void;
  longpressMs: number;
  /** Injectable clock/timer so tests can run synchronously. */
  now?: () => number;
  setTimer?: (fn: () => void, ms: number) => unknown;
  clearTimer?: (handle: unknown) => void;
}

/**
 * Turns a pointer stream into trace events.  The driver only resolves
 * the touched token and schedules the long-press tick; every selection
 * decision stays on the service side.
 */
export class GestureDriver {
  private readonly now: () => number;
  private readonly setTimer: (fn: () => void, ms: number) => unknown;
  private readonly clearTimer: (handle: unknown) => void;
  private timer: unknown = null;
  private down = false;

  constructor(private readonly options: GestureDriverOptions) {
    this.now = options.now ?? (() => performance.now());
    this.setTimer = options.setTimer ?? ((fn, ms) => setTimeout(fn, ms));
    this.clearTimer = options.clearTimer ?? ((h) => clearTimeout(h as number));
  }

  pointerDown(x: number, y: number): void {
    if (this.down) return;
    this.down = true;
    const t = Math.round(this.now());
    this.options.send({
      kind: "down",
      t_ms: t,
      x_px: x,
      y_px: y,
      token_hit: this.options.hitTest(x, y),
    });
    this.timer = this.setTimer(() => {
      this.timer = null;
      if (this.down) {
        this.options.send({ kind: "tick", t_ms: Math.round(this.now()) });
      }
    }, this.options.longpressMs);
  }

  pointerMove(x: number, y: number): void {
    if (!this.down) return;
    this.options.send({
      kind: "move",
      t_ms: Math.round(this.now()),
      x_px: x,
      y_px: y,
      token_hit: null,
    });
  }

  pointerUp(x: number, y: number): void {
    if (!this.down) return;
    this.down = false;
    if (this.timer !== null) {
      this.clearTimer(this.timer);
      this.timer = null;
    }
    this.options.send({
      kind: "up",
      t_ms: Math.round(this.now()),
      x_px: x,
      y_px: y,
      token_hit: null,
    });
  }

  get isDown(): boolean {
    return this.down;
  }
}
