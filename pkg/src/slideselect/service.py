"""Session service: parse a document once, then stream gesture input
through a per-session engine and hand ordered events back.

Wire format is UTF-8 JSON with fixed field order.  Event input/output
uses newline-delimited JSON over keep-alive HTTP: the input endpoint
accepts one event object or several NDJSON lines and answers with one
engine event per line, each carrying the session's next sequence number.
"""

from __future__ import annotations

import json
import mimetypes
import os
import secrets
import threading
import time
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .engine import (BRACKETS_UPDATED, CLEARED, PROGRESS_ALPHA, EngineEvent,
                     GestureConfig, GestureEngine, ProtocolError)
from .replay import config_from_obj
from .textmodel import Document, tokenize
from .treebank import (ParseServiceError, ParseTree, document_from_parse_lines,
                       fallback_tree, fetch_external_parses)


class SessionError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code


@dataclass
class Session:
    id: str
    doc: Document
    tree: ParseTree
    engine: GestureEngine
    fallback: bool
    seq: int = 0
    brackets: dict | None = None
    alpha: float = 0.0
    pending: list[int] | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)


def _token_listing(doc: Document) -> list[dict]:
    return [{"index": t.index, "text": t.text, "kind": t.kind,
             "char_start": t.char_start, "char_end": t.char_end,
             "sentence": t.sentence_index} for t in doc.tokens]


class SessionManager:
    """Holds live sessions; input processing is serialized per session."""

    def __init__(self, default_config: GestureConfig | None = None,
                 parse_endpoint: str | None = None,
                 parse_timeout: float = 5.0, default_mode: str = "word"):
        self.default_config = default_config or GestureConfig(ppi=254.0)
        self.parse_endpoint = parse_endpoint
        self.parse_timeout = parse_timeout
        self.default_mode = default_mode
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, payload: dict) -> dict:
        text = payload.get("text", "")
        if not isinstance(text, str) or not text.strip():
            raise SessionError(400, "validation", "text must be nonempty")
        mode = payload.get("mode", self.default_mode)
        if mode not in ("word", "chunk"):
            raise SessionError(400, "validation", f"unknown mode {mode!r}")
        try:
            config = (config_from_obj(payload["config"])
                      if payload.get("config") else self.default_config)
        except (TypeError, ValueError) as exc:
            raise SessionError(400, "validation", f"bad config: {exc}") from exc

        doc, tree, fallback = self._parse_document(text, payload.get("parse"))
        session = Session(
            id=secrets.token_hex(8), doc=doc, tree=tree, fallback=fallback,
            engine=GestureEngine(doc, tree, mode, config))
        with self._lock:
            self._sessions[session.id] = session
        return {
            "session_id": session.id,
            "mode": mode,
            "fallback": fallback,
            "tokens": _token_listing(doc),
        }

    def _parse_document(self, text: str, parse: dict | None):
        parse = parse or {}
        if parse.get("lines"):
            try:
                lines = [str(line) for line in parse["lines"]]
                doc, tree = document_from_parse_lines(text, lines)
                return doc, tree, False
            except ValueError:
                pass  # malformed parse input: session survives on fallback
        elif not parse.get("fallback"):
            endpoint = parse.get("endpoint") or self.parse_endpoint
            if endpoint:
                timeout = float(parse.get("timeout") or self.parse_timeout)
                try:
                    lines = fetch_external_parses(endpoint, text, timeout)
                    doc, tree = document_from_parse_lines(text, lines)
                    return doc, tree, False
                except (ParseServiceError, ValueError):
                    pass
        doc = tokenize(text)
        return doc, fallback_tree(doc), True

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise SessionError(404, "not_found", f"no session {session_id}")
        return session

    def delete(self, session_id: str) -> None:
        with self._lock:
            if self._sessions.pop(session_id, None) is None:
                raise SessionError(404, "not_found", f"no session {session_id}")

    def input_events(self, session_id: str, payloads: list[dict]) -> list[dict]:
        session = self.get(session_id)
        out: list[dict] = []
        with session.lock:
            for payload in payloads:
                out.extend(self._apply(session, payload))
        return out

    def _apply(self, session: Session, payload: dict) -> list[dict]:
        kind = payload.get("kind")
        if kind not in ("down", "move", "up", "tick"):
            raise SessionError(400, "validation", f"unknown event kind {kind!r}")
        t_ms = payload.get("t_ms")
        if t_ms is None:
            t_ms = int(time.time() * 1000)  # replays carry client stamps
        token_hit = payload.get("token_hit")
        try:
            events = session.engine.process(
                kind, int(t_ms), float(payload.get("y_px", 0.0)),
                None if token_hit is None else int(token_hit))
        except ProtocolError as exc:
            raise SessionError(409, "protocol", str(exc)) from exc
        except (TypeError, ValueError) as exc:
            raise SessionError(400, "validation", str(exc)) from exc
        out = []
        for event in events:
            session.seq += 1
            self._track(session, event)
            out.append({"seq": session.seq, **event.to_obj()})
        return out

    @staticmethod
    def _track(session: Session, event: EngineEvent) -> None:
        if event.kind == BRACKETS_UPDATED:
            session.brackets = dict(event.data)
        elif event.kind == PROGRESS_ALPHA:
            session.alpha = event.data["alpha"]
            session.pending = event.data["pending"]
        elif event.kind == CLEARED:
            session.brackets = None
            session.alpha = 0.0
            session.pending = None

    def snapshot(self, session_id: str) -> dict:
        session = self.get(session_id)
        with session.lock:
            selection = session.engine.state.selection
            return {
                "session_id": session.id,
                "seq": session.seq,
                "mode": session.engine.mode,
                "fallback": session.fallback,
                "phase": session.engine.state.phase,
                "selection": None if selection is None else selection.as_pair(),
                "brackets": session.brackets,
                "alpha": session.alpha,
                "pending": session.pending,
            }


# ---------------------------------------------------------------------------
# HTTP layer

def _json_bytes(obj: dict) -> bytes:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":")).encode("utf-8")


class ServiceHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    manager: SessionManager
    web_root: str | None = None

    def log_message(self, fmt, *args):  # quiet; stderr noise breaks CLI contract
        pass

    # -- helpers --

    def _reply(self, status: int, body: bytes,
               content_type: str = "application/json") -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _reply_json(self, status: int, obj: dict) -> None:
        self._reply(status, _json_bytes(obj))

    def _reply_error(self, exc: SessionError) -> None:
        self._reply_json(exc.status, {"error": exc.code, "message": str(exc)})

    def _read_body(self) -> bytes:
        length = int(self.headers.get("Content-Length") or 0)
        return self.rfile.read(length) if length else b""

    # -- routes --

    def do_POST(self) -> None:
        try:
            if self.path == "/sessions":
                payload = self._parse_json(self._read_body())
                self._reply_json(200, self.manager.create(payload))
                return
            session_id = self._input_session_id()
            if session_id is not None:
                events = self._parse_event_lines(self._read_body())
                produced = self.manager.input_events(session_id, events)
                body = "".join(
                    json.dumps(e, ensure_ascii=False, separators=(",", ":")) + "\n"
                    for e in produced).encode("utf-8")
                self._reply(200, body, "application/x-ndjson")
                return
            self._reply_json(404, {"error": "not_found", "message": self.path})
        except SessionError as exc:
            self._reply_error(exc)

    def do_GET(self) -> None:
        try:
            if self.path.startswith("/sessions/"):
                session_id = self.path[len("/sessions/"):]
                self._reply_json(200, self.manager.snapshot(session_id))
                return
            self._serve_static()
        except SessionError as exc:
            self._reply_error(exc)

    def do_DELETE(self) -> None:
        try:
            if self.path.startswith("/sessions/"):
                self.manager.delete(self.path[len("/sessions/"):])
                self._reply_json(200, {"deleted": True})
                return
            self._reply_json(404, {"error": "not_found", "message": self.path})
        except SessionError as exc:
            self._reply_error(exc)

    def do_OPTIONS(self) -> None:
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    # -- parsing --

    def _input_session_id(self) -> str | None:
        if self.path.startswith("/sessions/") and self.path.endswith("/input"):
            return self.path[len("/sessions/"):-len("/input")]
        return None

    @staticmethod
    def _parse_json(body: bytes) -> dict:
        try:
            obj = json.loads(body.decode("utf-8"))
        except ValueError as exc:
            raise SessionError(400, "validation", f"bad JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise SessionError(400, "validation", "expected a JSON object")
        return obj

    @staticmethod
    def _parse_event_lines(body: bytes) -> list[dict]:
        text = body.decode("utf-8").strip()
        if not text:
            raise SessionError(400, "validation", "empty input body")
        events = []
        for line_no, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except ValueError as exc:
                raise SessionError(
                    400, "validation", f"line {line_no}: bad JSON: {exc}") from exc
            if not isinstance(obj, dict):
                raise SessionError(
                    400, "validation", f"line {line_no}: expected an object")
            events.append(obj)
        return events

    # -- static demo assets --

    def _serve_static(self) -> None:
        root = self.web_root
        if root is None:
            self._reply_json(404, {"error": "not_found", "message": self.path})
            return
        rel = self.path.lstrip("/") or "index.html"
        rel = rel.split("?", 1)[0]
        full = os.path.realpath(os.path.join(root, rel))
        if not full.startswith(os.path.realpath(root)) or not os.path.isfile(full):
            self._reply_json(404, {"error": "not_found", "message": self.path})
            return
        ctype = mimetypes.guess_type(full)[0] or "application/octet-stream"
        with open(full, "rb") as fh:
            self._reply(200, fh.read(), ctype)


def make_server(host: str, port: int, manager: SessionManager,
                web_root: str | None = None) -> ThreadingHTTPServer:
    handler = type("BoundServiceHandler", (ServiceHandler,),
                   {"manager": manager, "web_root": web_root})
    return ThreadingHTTPServer((host, port), handler)
