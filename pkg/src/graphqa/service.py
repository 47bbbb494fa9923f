"""Operational shell: CLI and a small JSON-over-HTTP API.

Subcommands: ingest, ask, serve, dump-xml. Every Config field can be
overridden through GRAPHQA_* environment variables. Exit codes: 0 ok,
1 usage, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .graphstore import GraphStore
from .lexicon import (
    Lexicon,
    default_lexicon_dir,
    default_pattern_table,
    load_lexicon,
    load_role_patterns,
)
from .matcher import EmptyQueryError, MatchResult, answer
from .pipeline import analyze_document

log = logging.getLogger("graphqa")

_ENV_PREFIX = "GRAPHQA_"


@dataclass
class Config:
    lexicon_dir: str = ""
    pattern_table: str = ""
    store_path: str = "store.graph"
    listen_address: str = "127.0.0.1:8765"
    log_level: str = "INFO"

    @classmethod
    def load(cls, config_path: str | None = None) -> "Config":
        cfg = cls()
        if config_path:
            data = json.loads(Path(config_path).read_text(encoding="utf-8"))
            for key, value in data.items():
                if hasattr(cfg, key):
                    setattr(cfg, key, value)
        for f in ("lexicon_dir", "pattern_table", "store_path",
                  "listen_address", "log_level"):
            env = os.environ.get(_ENV_PREFIX + f.upper())
            if env:
                setattr(cfg, f, env)
        if not cfg.lexicon_dir:
            cfg.lexicon_dir = str(default_lexicon_dir())
        if not cfg.pattern_table:
            cfg.pattern_table = str(default_pattern_table())
        return cfg

    def validate(self) -> None:
        if not Path(self.lexicon_dir).is_dir():
            raise FileNotFoundError(f"lexicon dir missing: {self.lexicon_dir}")
        if not Path(self.pattern_table).is_file():
            raise FileNotFoundError(f"pattern table missing: {self.pattern_table}")
        host, _, port = self.listen_address.partition(":")
        if not host or not port.isdigit():
            raise ValueError(f"bad listen address: {self.listen_address}")


class Runtime:
    """Loaded lexicon + pattern table + store + per-document metadata."""

    def __init__(self, config: Config):
        config.validate()
        self.config = config
        self.lexicon: Lexicon = load_lexicon(config.lexicon_dir)
        self.patterns = load_role_patterns(config.pattern_table)
        store_file = Path(config.store_path)
        self.store = GraphStore.load(store_file) if store_file.exists() else GraphStore()
        self.meta_path = Path(str(config.store_path) + ".meta.json")
        self.meta: dict = {"docs": {}}
        if self.meta_path.exists():
            self.meta = json.loads(self.meta_path.read_text(encoding="utf-8"))
        self._ingest_lock = threading.Lock()

    # -------------------------------------------------------- ingestion

    def ingest_text(self, text: str, source: str = "<inline>") -> dict:
        """One document, atomically: a failing document leaves the store
        as if it never arrived."""
        with self._ingest_lock:
            doc_id = self._next_doc_id()
            analysis = analyze_document(text, doc_id, self.lexicon, self.patterns)
            nodes_added, edges_added = self.store.apply_delta(analysis.delta)
            self.meta["docs"][str(doc_id)] = {
                "source": source,
                "sentences": [s.text for s in analysis.sentences],
                "xml": analysis.to_xml(),
                "unresolved_pronouns": analysis.unresolved_pronouns,
            }
            return {
                "doc_id": doc_id,
                "source": source,
                "sentences": len(analysis.sentences),
                "units": len(analysis.units),
                "nodes_added": nodes_added,
                "edges_added": edges_added,
                "unresolved_pronouns": analysis.unresolved_pronouns,
                "skipped_units": analysis.skipped_units,
                "warnings": (["empty document"]
                             if not analysis.sentences else []),
            }

    def _next_doc_id(self) -> int:
        existing = [int(k) for k in self.meta["docs"]] or [-1]
        return max(existing) + 1

    def ingest_files(self, paths) -> list[dict]:
        reports = []
        for path in paths:
            try:
                text = Path(path).read_text(encoding="utf-8")
                report = self.ingest_text(text, source=str(path))
            except Exception as exc:  # per-file failure, others continue
                report = {"source": str(path), "error": str(exc)}
            reports.append(report)
        return reports

    def persist(self) -> None:
        self.store.save(self.config.store_path)
        self.meta_path.write_text(
            json.dumps(self.meta, indent=1, sort_keys=True), encoding="utf-8")

    # ---------------------------------------------------------- queries

    def ask(self, question: str) -> MatchResult:
        return answer(question, self.store, self.lexicon, self.patterns)

    def sentence_text(self, doc_id: int, index: int) -> str | None:
        doc = self.meta["docs"].get(str(doc_id))
        if doc is None or not 0 <= index < len(doc["sentences"]):
            return None
        return doc["sentences"][index]

    def result_document(self, question: str, result: MatchResult) -> dict:
        return {
            "question": question,
            "wh": result.wh.value,
            "unanswerable": result.unanswerable,
            "message": result.message,
            "answers": [
                {
                    "label": a.label,
                    "ne_type": a.ne_type or "NONE",
                    "doc": a.doc_id,
                    "sent": a.sentence_index,
                    "sentence": self.sentence_text(a.doc_id, a.sentence_index)
                    or "",
                }
                for a in result.answers
            ],
            "highlight": sorted(result.highlight),
        }

    def export(self, limit: int | None = None, label_filter: str = "",
               highlight=frozenset()) -> dict:
        node_filter = None
        if label_filter:
            low = label_filter.casefold()
            def node_filter(node):  # noqa: E306
                return low in node.label.casefold()
        return self.store.export_view(node_filter=node_filter,
                                      highlight=highlight, limit=limit)


# ----------------------------------------------------------------- CLI --

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    p = _Parser(prog="graphqa", description=__doc__)
    p.add_argument("--config", help="JSON config file")
    sub = p.add_subparsers(dest="command", required=True)

    ing = sub.add_parser("ingest", help="ingest text documents into the store")
    ing.add_argument("files", nargs="+")

    ask = sub.add_parser("ask", help="answer one question against the store")
    ask.add_argument("question")
    ask.add_argument("--export", metavar="PATH",
                     help="write the highlighted graph view to PATH")

    srv = sub.add_parser("serve", help="run the HTTP API")
    srv.add_argument("--config", dest="serve_config")

    dmp = sub.add_parser("dump-xml", help="print one document's annotated XML")
    dmp.add_argument("doc_id", type=int)
    return p


def _cmd_ingest(rt: Runtime, args) -> int:
    reports = rt.ingest_files(args.files)
    rt.persist()
    failed = 0
    for r in reports:
        if "error" in r:
            failed += 1
            print(f"{r['source']}: ERROR {r['error']}")
        else:
            print(
                f"doc {r['doc_id']} <- {r['source']}: "
                f"{r['sentences']} sentences, {r['units']} units, "
                f"+{r['nodes_added']} nodes, +{r['edges_added']} edges, "
                f"{r['unresolved_pronouns']} unresolved pronouns")
    print(f"store: {len(rt.store.nodes)} nodes, {len(rt.store.edges)} edges")
    return 0 if failed == 0 else 2


def _cmd_ask(rt: Runtime, args) -> int:
    try:
        result = rt.ask(args.question)
    except EmptyQueryError as exc:
        print(f"no answer found (empty question: {exc})")
        return 0
    doc = rt.result_document(args.question, result)
    if result.unanswerable or not doc["answers"]:
        print("no answer found" + (f" ({result.message})" if result.message else ""))
    else:
        print(f"wh: {doc['wh']}")
        for k, a in enumerate(doc["answers"], 1):
            line = f"{k}. {a['label']} ({a['ne_type']}) [doc {a['doc']}, sentence {a['sent']}]"
            if a["sentence"]:
                line += f' "{a["sentence"]}"'
            print(line)
    if args.export:
        view = rt.export(highlight=result.highlight)
        Path(args.export).write_text(json.dumps(view, indent=1),
                                     encoding="utf-8")
        print(f"graph view written to {args.export}")
    return 0


def _cmd_dump_xml(rt: Runtime, args) -> int:
    doc = rt.meta["docs"].get(str(args.doc_id))
    if doc is None:
        print(f"unknown document id {args.doc_id}", file=sys.stderr)
        return 2
    print(doc["xml"])
    return 0


# ---------------------------------------------------------------- HTTP --

def make_handler(rt: Runtime):
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, fmt, *args):
            log.debug("http: " + fmt, *args)

        def _send(self, code: int, payload: dict):
            body = json.dumps(payload).encode("utf-8")
            self.send_response(code)
            self.send_header("Content-Type", "application/json")
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _body(self) -> str:
            length = int(self.headers.get("Content-Length") or 0)
            return self.rfile.read(length).decode("utf-8") if length else ""

        def do_GET(self):
            try:
                url = urlparse(self.path)
                qs = parse_qs(url.query)
                if url.path == "/health":
                    self._send(200, {"status": "ok",
                                     "nodes": len(rt.store.nodes),
                                     "edges": len(rt.store.edges)})
                elif url.path == "/graph":
                    limit = None
                    if "limit" in qs:
                        limit = int(qs["limit"][0])
                    label_filter = qs.get("filter", [""])[0]
                    self._send(200, rt.export(limit=limit,
                                              label_filter=label_filter))
                elif url.path == "/sentence":
                    doc = int(qs.get("doc", ["-1"])[0])
                    index = int(qs.get("index", ["-1"])[0])
                    text = rt.sentence_text(doc, index)
                    if text is None:
                        self._send(404, {"error": "unknown sentence"})
                    else:
                        self._send(200, {"doc": doc, "index": index,
                                         "text": text})
                else:
                    self._send(404, {"error": "unknown path"})
            except (ValueError, KeyError):
                self._send(400, {"error": "malformed request"})
            except Exception:
                log.exception("GET %s failed", self.path)
                self._send(500, {"error": "internal error"})

        def do_POST(self):
            try:
                url = urlparse(self.path)
                raw = self._body()
                if url.path == "/ingest":
                    if not raw.strip():
                        self._send(400, {"error": "empty body"})
                        return
                    qs = parse_qs(url.query)
                    name = qs.get("name", ["<http>"])[0]
                    report = rt.ingest_text(raw, source=name)
                    rt.persist()
                    self._send(200, report)
                elif url.path == "/query":
                    question = _question_from_body(raw, self.headers.get("Content-Type", ""))
                    if not question or not question.strip():
                        self._send(400, {"error": "empty question"})
                        return
                    try:
                        result = rt.ask(question)
                    except EmptyQueryError:
                        self._send(422, {"question": question, "answers": [],
                                         "highlight": [],
                                         "unanswerable": True,
                                         "message": "empty question"})
                        return
                    doc = rt.result_document(question, result)
                    self._send(422 if result.unanswerable else 200, doc)
                else:
                    self._send(404, {"error": "unknown path"})
            except json.JSONDecodeError:
                self._send(400, {"error": "malformed body"})
            except Exception:
                log.exception("POST %s failed", self.path)
                self._send(500, {"error": "internal error"})

    return Handler


def _question_from_body(raw: str, content_type: str) -> str:
    if "json" in content_type:
        data = json.loads(raw)
        if not isinstance(data, dict) or "question" not in data:
            raise json.JSONDecodeError("missing question", raw, 0)
        return str(data["question"])
    return raw


def serve(rt: Runtime) -> ThreadingHTTPServer:
    host, _, port = rt.config.listen_address.partition(":")
    httpd = ThreadingHTTPServer((host, int(port)), make_handler(rt))
    log.info("listening on %s", rt.config.listen_address)
    return httpd


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    config_path = getattr(args, "serve_config", None) or args.config
    try:
        config = Config.load(config_path)
        logging.basicConfig(level=config.log_level.upper())
        rt = Runtime(config)
        if args.command == "ingest":
            return _cmd_ingest(rt, args)
        if args.command == "ask":
            return _cmd_ask(rt, args)
        if args.command == "dump-xml":
            return _cmd_dump_xml(rt, args)
        if args.command == "serve":
            httpd = serve(rt)
            try:
                httpd.serve_forever()
            except KeyboardInterrupt:
                pass
            finally:
                httpd.server_close()
            return 0
    except Exception as exc:
        log.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
