import { SessionClient } from "./client.js";
import { applyEvents, initialState, VisualState } from "./feedback.js";
import { GestureDriver } from "./gesture.js";
import { hitTestSpans, renderDocument } from "./layout.js";
import type { EngineEvent, SessionDescriptor } from "./protocol.js";

const SAMPLE_TEXT =
  "The quick brown fox jumps over the lazy dog. " +
  "A small crowd gathered near the old station, and nobody said a word. " +
  "When the train finally arrived, everyone pushed toward the open doors.";

const BRACKET_OPACITY = [1.0, 0.6, 0.3];

const client = new SessionClient("");
const textPane = document.getElementById("text") as HTMLElement;
const statusLine = document.getElementById("status") as HTMLElement;
const textInput = document.getElementById("text-input") as HTMLTextAreaElement;
const modeSelect = document.getElementById("mode") as HTMLSelectElement;
const ppiInput = document.getElementById("ppi") as HTMLInputElement;
const dWordInput = document.getElementById("d-word") as HTMLInputElement;
const dChunkInput = document.getElementById("d-chunk") as HTMLInputElement;
const endpointInput = document.getElementById("endpoint") as HTMLInputElement;
const reloadButton = document.getElementById("reload") as HTMLButtonElement;

let session: SessionDescriptor | null = null;
let spans: HTMLElement[] = [];
let state: VisualState = initialState();
let sourceText = SAMPLE_TEXT;
let sendChain: Promise<void> = Promise.resolve();
let pendingMove: { x: number; y: number } | null = null;
let moveScheduled = false;

function guessPpi(): number {
  // CSS reference pixel is 1/96 inch; devicePixelRatio scales physical density
  return Math.round(96 * (window.devicePixelRatio || 1));
}

function paint(): void {
  const selection = state.selection;
  const pending = state.pending;
  const brackets = state.brackets;
  for (const span of spans) {
    const index = Number(span.dataset.index);
    span.className = "token";
    span.style.backgroundColor = "";
    span.style.removeProperty("--open-opacity");
    span.style.removeProperty("--close-opacity");
    if (selection && index >= selection[0] && index <= selection[1]) {
      span.classList.add("selected");
    } else if (pending && index >= pending[0] && index <= pending[1]) {
      span.style.backgroundColor = `rgba(255, 170, 0, ${state.alpha})`;
    }
  }
  if (brackets && selection) {
    for (const list of [brackets.backward, brackets.forward]) {
      list.forEach((range, level) => {
        const opacity = BRACKET_OPACITY[level] ?? 0.3;
        const openSpan = spans[range[0]];
        const closeSpan = spans[range[1]];
        if (!openSpan || !closeSpan) return;
        openSpan.classList.add("bracket-open");
        openSpan.style.setProperty("--open-opacity", String(opacity));
        closeSpan.classList.add("bracket-close");
        closeSpan.style.setProperty("--close-opacity", String(opacity));
      });
    }
  }
  const phase = state.completed ? "completed" : session ? "ready" : "loading";
  const fallbackNote = session?.fallback ? " (fallback tree)" : "";
  const span = selection ? `[${selection[0]}..${selection[1]}]` : "none";
  statusLine.textContent =
    `${phase}${fallbackNote} · mode ${session?.mode ?? "?"} · ` +
    `selection ${span} · changes ${state.selectionChanges}`;
}

function handleEvents(events: EngineEvent[]): void {
  const before = state.hapticTicks;
  state = applyEvents(state, events);
  if (state.hapticTicks > before && "vibrate" in navigator) {
    navigator.vibrate?.(10);
  }
  paint();
}

function enqueue(event: Parameters<SessionClient["sendEvents"]>[1][number]): void {
  const id = session?.session_id;
  if (!id) return;
  sendChain = sendChain
    .then(() => client.sendEvents(id, [event]))
    .then(handleEvents)
    .catch((error) => {
      statusLine.textContent = `error: ${error}`;
    });
}

const driver = new GestureDriver({
  hitTest: (x, y) => hitTestSpans(spans, x, y),
  send: enqueue,
  longpressMs: 500,
});

function flushMove(): void {
  moveScheduled = false;
  if (pendingMove) {
    driver.pointerMove(pendingMove.x, pendingMove.y);
    pendingMove = null;
  }
}

function bindPointer(): void {
  textPane.addEventListener("pointerdown", (event) => {
    textPane.setPointerCapture(event.pointerId);
    event.preventDefault();
    driver.pointerDown(event.clientX, event.clientY);
  });
  textPane.addEventListener("pointermove", (event) => {
    if (!driver.isDown) return;
    pendingMove = { x: event.clientX, y: event.clientY };
    if (!moveScheduled) {
      moveScheduled = true;
      requestAnimationFrame(flushMove);
    }
  });
  const finish = (event: PointerEvent) => {
    flushMove();
    driver.pointerUp(event.clientX, event.clientY);
  };
  textPane.addEventListener("pointerup", finish);
  textPane.addEventListener("pointercancel", finish);
}

async function loadSession(): Promise<void> {
  if (session) {
    void client.delete(session.session_id);
    session = null;
  }
  state = initialState();
  const endpoint = endpointInput.value.trim();
  const request = {
    text: sourceText,
    mode: modeSelect.value as "word" | "chunk",
    config: {
      ppi: Number(ppiInput.value) || guessPpi(),
      d_word_mm: Number(dWordInput.value) || 1.5,
      d_chunk_mm: Number(dChunkInput.value) || 10,
      longpress_ms: 500,
      slop_mm: 1.0,
    },
    parse: endpoint ? { endpoint } : undefined,
  };
  statusLine.textContent = "loading…";
  session = await client.create(request);
  spans = renderDocument(textPane, sourceText, session.tokens);
  paint();
}

function init(): void {
  ppiInput.value = String(guessPpi());
  textInput.value = SAMPLE_TEXT;
  bindPointer();
  reloadButton.addEventListener("click", () => {
    sourceText = textInput.value;
    void loadSession();
  });
  modeSelect.addEventListener("change", () => void loadSession());
  void loadSession();
}

init();
