import type { TokenInfo } from "./protocol.js";

/**
 * Lay the document out as one addressable span per token, preserving
 * the raw inter-token text so the rendered string equals the source.
 */
export function renderDocument(
  container: HTMLElement,
  text: string,
  tokens: TokenInfo[],
): HTMLElement[] {
  container.textContent = "";
  const spans: HTMLElement[] = [];
  let cursor = 0;
  for (const token of tokens) {
    if (token.char_start > cursor) {
      container.appendChild(
        document.createTextNode(text.slice(cursor, token.char_start)),
      );
    }
    const span = document.createElement("span");
    span.className = "token";
    span.dataset.index = String(token.index);
    span.textContent = text.slice(token.char_start, token.char_end);
    container.appendChild(span);
    spans.push(span);
    cursor = token.char_end;
  }
  if (cursor < text.length) {
    container.appendChild(document.createTextNode(text.slice(cursor)));
  }
  return spans;
}

/** Hit-test a client point against the laid-out token spans. */
export function hitTestSpans(
  spans: HTMLElement[],
  x: number,
  y: number,
): number | null {
  for (const span of spans) {
    for (const rect of span.getClientRects()) {
      if (x >= rect.left && x <= rect.right && y >= rect.top && y <= rect.bottom) {
        return Number(span.dataset.index);
      }
    }
  }
  return null;
}
