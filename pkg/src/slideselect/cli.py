"""Operator entry point.

Subcommands: ``chunks`` (inspect the expansion sequence from an anchor),
``replay`` (run one trial from a manifest + trace), ``bench`` (synthesize
and replay a directory of manifests), ``serve`` (run the session service).
Machine-readable output goes to stdout, everything human to stderr.
Every flag can also be set via a SLIDESELECT_* environment variable.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import signal
import sys

from .chunking import BACKWARD, FORWARD, expansion_sequence
from .engine import ConfigError, GestureConfig, event_log_lines
from .replay import (SynthesisError, TraceError, aggregate,
                     load_manifest_file, load_trace_file, run_trial,
                     synthesize_trace)
from .service import SessionManager, make_server
from .textmodel import RangeError, TokenRange, range_text, tokenize
from .treebank import document_from_parse_lines, fallback_tree, load_parse_file

ENV_PREFIX = "SLIDESELECT_"


def _env(name: str, default=None):
    return os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"), default)


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--ppi", type=float, default=float(_env("ppi", 254.0)))
    parser.add_argument("--d-word-mm", type=float,
                        default=float(_env("d_word_mm", 1.5)))
    parser.add_argument("--d-chunk-mm", type=float,
                        default=float(_env("d_chunk_mm", 10.0)))
    parser.add_argument("--longpress-ms", type=int,
                        default=int(_env("longpress_ms", 500)))
    parser.add_argument("--slop-mm", type=float, default=float(_env("slop_mm", 1.0)))


def _config_from_args(args) -> GestureConfig:
    return GestureConfig(ppi=args.ppi, d_word_mm=args.d_word_mm,
                         d_chunk_mm=args.d_chunk_mm,
                         longpress_ms=args.longpress_ms, slop_mm=args.slop_mm)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slideselect",
        description="Slide-driven coarse text selection: chunk inspection, "
                    "trial replay, batch metrics, and the session service.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_chunks = sub.add_parser("chunks", help="print the expansion sequence "
                              "from an anchor token")
    p_chunks.add_argument("--text", required=True, help="UTF-8 text file")
    p_chunks.add_argument("--parse", help="bracketed parse file, one sentence "
                          "per line (fallback tree when omitted)")
    p_chunks.add_argument("--anchor", type=int, required=True,
                          help="anchor token index")
    p_chunks.add_argument("--direction", choices=[FORWARD, BACKWARD],
                          default=FORWARD)
    p_chunks.add_argument("-k", type=int, default=3, help="chunks to list")

    p_replay = sub.add_parser("replay", help="replay one trial")
    p_replay.add_argument("--manifest", required=True)
    p_replay.add_argument("--trace", required=True)
    p_replay.add_argument("--log-out", help="event log destination "
                          "(default: <trace>.events.jsonl)")

    p_bench = sub.add_parser("bench", help="synthesize and replay a "
                             "directory of trial manifests")
    p_bench.add_argument("--manifest-dir", required=True)
    p_bench.add_argument("--policy", default=str(_env("policy", "ideal")),
                         help="ideal | overshooting(k) | clutching(n)")
    p_bench.add_argument("--log-dir", help="write per-trial event logs here")

    p_serve = sub.add_parser("serve", help="run the session service")
    p_serve.add_argument("--host", default=str(_env("host", "127.0.0.1")))
    p_serve.add_argument("--port", type=int, default=int(_env("port", 8765)))
    p_serve.add_argument("--mode", choices=["word", "chunk"],
                         default=str(_env("mode", "word")),
                         help="default mode for sessions that omit one")
    p_serve.add_argument("--parse-endpoint", default=_env("parse_endpoint"))
    p_serve.add_argument("--parse-timeout", type=float,
                         default=float(_env("parse_timeout", 5.0)))
    p_serve.add_argument("--web-root", default=_env("web_root"),
                         help="static demo assets to serve at /")
    _add_config_flags(p_serve)

    return parser


def cmd_chunks(args) -> int:
    try:
        with open(args.text, encoding="utf-8") as fh:
            text = fh.read()
        if args.parse:
            doc, tree = document_from_parse_lines(text, load_parse_file(args.parse))
        else:
            doc = tokenize(text)
            tree = fallback_tree(doc)
            print("no parse file: using the flat fallback tree", file=sys.stderr)
        if not doc.tokens or not 0 <= args.anchor < len(doc.tokens):
            print(f"anchor {args.anchor} out of bounds "
                  f"(document has {len(doc.tokens)} tokens)", file=sys.stderr)
            return 1
        anchor = TokenRange(args.anchor, args.anchor)
        for chunk in expansion_sequence(tree, doc, anchor, args.direction, args.k):
            text_piece = range_text(doc, chunk.range)
            print(f"[{chunk.range.start}..{chunk.range.end}] "
                  f"{json.dumps(text_piece, ensure_ascii=False)}")
        return 0
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _metrics_row(name: str, spec, metrics) -> dict:
    return {
        "trial": name,
        "mode": spec.mode,
        "tag": spec.tag,
        "completed": metrics.completed,
        "completion_ms": "" if metrics.completion_ms is None else metrics.completion_ms,
        "overshoots": metrics.overshoots,
        "attempts": metrics.attempts,
    }


TRIAL_FIELDS = ["row_type", "trial", "mode", "tag", "completed",
                "completion_ms", "overshoots", "attempts", "trials",
                "mean_completion_ms", "median_completion_ms",
                "total_overshoots", "mean_attempts"]


def _write_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=TRIAL_FIELDS, extrasaction="ignore",
                            lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def cmd_replay(args) -> int:
    try:
        spec = load_manifest_file(args.manifest)
        trace = load_trace_file(args.trace)
        metrics, log = run_trial(spec, trace)
    except (OSError, TraceError, RangeError, ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    log_path = args.log_out or args.trace + ".events.jsonl"
    with open(log_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(event_log_lines(log)))
        if log:
            fh.write("\n")
    row = _metrics_row(os.path.basename(args.manifest), spec, metrics)
    row["row_type"] = "trial"
    sys.stdout.write(_write_csv([row]))
    print(f"event log: {log_path}", file=sys.stderr)
    return 0 if metrics.completed else 2


def cmd_bench(args) -> int:
    try:
        names = sorted(n for n in os.listdir(args.manifest_dir)
                       if n.endswith(".json"))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    rows = []
    failures = 0
    for name in names:
        path = os.path.join(args.manifest_dir, name)
        try:
            spec = load_manifest_file(path)
            trace = synthesize_trace(spec, args.policy)
            metrics, log = run_trial(spec, trace)
        except (OSError, ValueError, SynthesisError) as exc:
            print(f"{name}: error: {exc}", file=sys.stderr)
            failures += 1
            continue
        if args.log_dir:
            os.makedirs(args.log_dir, exist_ok=True)
            log_path = os.path.join(args.log_dir, name + ".events.jsonl")
            with open(log_path, "w", encoding="utf-8") as fh:
                fh.write("\n".join(event_log_lines(log)) + ("\n" if log else ""))
        row = _metrics_row(name, spec, metrics)
        row["row_type"] = "trial"
        rows.append(row)
    summaries = aggregate(rows, ["mode", "tag"])
    for summary in summaries:
        summary["row_type"] = "summary"
    sys.stdout.write(_write_csv(rows + summaries))
    return 1 if failures else 0


def cmd_serve(args) -> int:
    try:
        config = _config_from_args(args)
        manager = SessionManager(default_config=config,
                                 parse_endpoint=args.parse_endpoint,
                                 parse_timeout=args.parse_timeout,
                                 default_mode=args.mode)
        server = make_server(args.host, args.port, manager,
                             web_root=args.web_root)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    def shutdown(signum, frame):
        raise KeyboardInterrupt

    signal.signal(signal.SIGTERM, shutdown)
    host, port = server.server_address[:2]
    print(f"listening on http://{host}:{port}", file=sys.stderr, flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    commands = {"chunks": cmd_chunks, "replay": cmd_replay,
                "bench": cmd_bench, "serve": cmd_serve}
    return commands[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
