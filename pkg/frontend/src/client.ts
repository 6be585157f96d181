import type {
  CreateSessionRequest,
  EngineEvent,
  SessionDescriptor,
  Snapshot,
  TraceEventInput,
} from "./protocol.js";

/** Thin fetch client for the session service; events travel as NDJSON. */
export class SessionClient {
  constructor(private readonly baseUrl: string = "") {}

  async create(request: CreateSessionRequest): Promise<SessionDescriptor> {
    const response = await fetch(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    });
    if (!response.ok) throw new Error(`create failed: ${await response.text()}`);
    return (await response.json()) as SessionDescriptor;
  }

  async sendEvents(
    sessionId: string,
    events: TraceEventInput[],
  ): Promise<EngineEvent[]> {
    const body = events.map((event) => JSON.stringify(event)).join("\n");
    const response = await fetch(`${this.baseUrl}/sessions/${sessionId}/input`, {
      method: "POST",
      headers: { "Content-Type": "application/x-ndjson" },
      body,
    });
    if (!response.ok) throw new Error(`input failed: ${await response.text()}`);
    const text = await response.text();
    if (!text.trim()) return [];
    return text
      .trim()
      .split("\n")
      .map((line) => JSON.parse(line) as EngineEvent);
  }

  async snapshot(sessionId: string): Promise<Snapshot> {
    const response = await fetch(`${this.baseUrl}/sessions/${sessionId}`);
    if (!response.ok) throw new Error(`snapshot failed: ${response.status}`);
    return (await response.json()) as Snapshot;
  }

  async delete(sessionId: string): Promise<void> {
    await fetch(`${this.baseUrl}/sessions/${sessionId}`, { method: "DELETE" });
  }
}
