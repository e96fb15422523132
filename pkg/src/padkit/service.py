"""HTTP facade over one categorization session plus the read-only pipeline.

Single-writer discipline: every mutating request funnels through one lock,
bumps a monotone revision counter and wakes the long-poll waiters; reads
work against the immutable snapshot current at lookup time. State lives in
memory; nothing touches disk until an explicit save request.
"""

from __future__ import annotations

import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlsplit

from . import graphics, metrics, store
from .model import CategoryNode, Corpus, Kind, LabelError, Node, render_label
from .session import (
    AlreadyGroupedError,
    KindMismatchError,
    MissingTextError,
    NotGroupedError,
    Session,
    SessionError,
    UnknownIdError,
)

LONG_POLL_DEFAULT = 25.0
LONG_POLL_MAX = 60.0


class BadRequest(Exception):
    pass


class ServiceState:
    """Session guarded by a single writer lock and a change condition."""

    def __init__(self, corpus: Corpus, save_path: str | None = None):
        self.session = Session(corpus)
        self.revision = 0
        self.save_path = save_path
        self._lock = threading.Lock()
        self._changed = threading.Condition(self._lock)

    def snapshot(self) -> tuple[Corpus, int]:
        with self._lock:
            return self.session.corpus, self.revision

    def mutate(self, apply):
        """Run one session operation; commit bumps the revision."""
        with self._changed:
            result = apply(self.session)
            self.revision += 1
            self._changed.notify_all()
            return result, self.revision

    def pool(self, kind: Kind):
        with self._lock:
            return list(self.session.pool(kind)), self.revision

    def wait_for_change(self, since: int, timeout: float) -> int:
        deadline = time.monotonic() + timeout
        with self._changed:
            while self.revision <= since:
                remaining = deadline - time.monotonic()
                if remaining <= 0:
                    break
                self._changed.wait(remaining)
            return self.revision


def _node_json(node: Node) -> dict:
    return {
        "id": node.id,
        "kind": node.kind.letter,
        "label": render_label(node.label),
        "code": node.code,
        "sources": list(node.sources),
        "grouped": node.is_grouped,
    }


def _category_json(cat: CategoryNode) -> dict:
    return {
        "id": cat.id,
        "kind": cat.kind.letter,
        "label": render_label(cat.label),
        "category_code": cat.category_code,
        "members": list(cat.members),
        "parent": cat.parent,
    }


def _table_json(table: metrics.MetricTable) -> dict:
    return {
        "metric": table.metric,
        "kind": table.kind.letter,
        "denominators": table.denominators,
        "rows": [
            {
                "label": row.label,
                "category_code": row.category_code,
                "numerator": row.value.numerator,
                "denominator": row.value.denominator,
                "percent": row.percent,
            }
            for row in table.rows
        ],
    }


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    @property
    def state(self) -> ServiceState:
        return self.server.state

    def log_message(self, format, *args):  # quiet by default
        pass

    # -- plumbing ----------------------------------------------------------

    def _send(self, status: int, payload: bytes, content_type: str, revision: int) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(payload)))
        self.send_header("X-Revision", str(revision))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(payload)

    def _send_json(self, status: int, obj: dict, revision: int) -> None:
        obj.setdefault("revision", revision)
        payload = json.dumps(obj, sort_keys=True).encode("utf-8")
        self._send(status, payload, "application/json; charset=utf-8", revision)

    def _send_error(self, status: int, code: str, message: str) -> None:
        _, revision = self.state.snapshot()
        self._send_json(
            status, {"code": code, "message": message, "location": self.path}, revision
        )

    def _body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            return {}
        try:
            body = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise BadRequest(f"request body is not valid JSON: {exc}") from exc
        if not isinstance(body, dict):
            raise BadRequest("request body must be a JSON object")
        return body

    @staticmethod
    def _field(body: dict, name: str, required: bool = True) -> str | None:
        value = body.get(name)
        if value is None:
            if required:
                raise BadRequest(f"missing field {name!r}")
            return None
        if not isinstance(value, str):
            raise BadRequest(f"field {name!r} must be a string")
        return value

    # -- GET ----------------------------------------------------------------

    def do_GET(self):
        parts = urlsplit(self.path)
        query = parse_qs(parts.query)
        route = parts.path
        try:
            if route == "/api/corpus":
                corpus, revision = self.state.snapshot()
                self._send_json(200, {"corpus": store.corpus_document(corpus)}, revision)
            elif route == "/api/pool":
                letter = query.get("kind", ["P"])[0]
                kind = Kind.from_letter(letter)
                entries, revision = self.state.pool(kind)
                self._send_json(
                    200,
                    {
                        "kind": letter,
                        "entries": [
                            {**_node_json(e.node), "reviewed": e.reviewed} for e in entries
                        ],
                    },
                    revision,
                )
            elif route == "/api/stats":
                corpus, revision = self.state.snapshot()
                try:
                    tables = metrics.all_tables(corpus)
                    average = metrics.avg_challenges_per_ru(corpus)
                    self._send_json(
                        200,
                        {
                            "tables": {name: _table_json(t) for name, t in tables.items()},
                            "avg_challenges": {
                                "numerator": average.numerator,
                                "denominator": average.denominator,
                            },
                        },
                        revision,
                    )
                except metrics.EmptyCorpusError as exc:
                    self._send_json(200, {"tables": None, "status": str(exc)}, revision)
            elif route == "/api/graphs/dag.dot":
                corpus, revision = self.state.snapshot()
                doc = graphics.emit_causality_dag(corpus)
                self._send(200, doc.to_dot().encode("utf-8"), "text/plain; charset=utf-8", revision)
            elif route == "/api/graphs/triads.dot":
                corpus, revision = self.state.snapshot()
                doc = graphics.emit_triads_graphic(corpus)
                self._send(200, doc.to_dot().encode("utf-8"), "text/plain; charset=utf-8", revision)
            elif route.startswith("/api/graphs/dyads/") and route.endswith(".dot"):
                label = route[len("/api/graphs/dyads/"):-len(".dot")]
                corpus, revision = self.state.snapshot()
                try:
                    doc = graphics.emit_pa_dyads(corpus, label)
                except (graphics.GraphicsError, LabelError) as exc:
                    self._send_error(404, "not-found", str(exc))
                    return
                self._send(200, doc.to_dot().encode("utf-8"), "text/plain; charset=utf-8", revision)
            elif route == "/api/changes":
                try:
                    since = int(query.get("since", ["0"])[0])
                    timeout = float(query.get("timeout", [str(LONG_POLL_DEFAULT)])[0])
                except ValueError as exc:
                    raise BadRequest(f"bad query parameter: {exc}") from exc
                revision = self.state.wait_for_change(since, min(max(timeout, 0.0), LONG_POLL_MAX))
                self._send_json(200, {}, revision)
            else:
                self._send_error(404, "not-found", f"no route {route}")
        except BadRequest as exc:
            self._send_error(400, "bad-request", str(exc))
        except LabelError as exc:
            self._send_error(400, "bad-request", str(exc))

    # -- POST ----------------------------------------------------------------

    def do_POST(self):
        route = urlsplit(self.path).path
        try:
            body = self._body()
            if route == "/api/codes":
                kind = Kind.from_letter(self._field(body, "kind"))
                text = self._field(body, "text")
                ru = self._field(body, "ru")
                node, revision = self.state.mutate(lambda s: s.add_code(kind, text, ru))
                self._send_json(200, {"node": _node_json(node)}, revision)
            elif route == "/api/group":
                subject = self._field(body, "subject")
                neighbor = self._field(body, "neighbor")
                text = self._field(body, "category_text", required=False)
                category, revision = self.state.mutate(
                    lambda s: s.group_pair(subject, neighbor, text)
                )
                self._send_json(200, {"category": _category_json(category)}, revision)
            elif route == "/api/spawn":
                subject = self._field(body, "subject")
                neighbor = self._field(body, "neighbor")
                text = self._field(body, "category_text")
                category, revision = self.state.mutate(
                    lambda s: s.spawn_category(subject, neighbor, text)
                )
                self._send_json(200, {"category": _category_json(category)}, revision)
            elif route == "/api/orphan":
                node_id = self._field(body, "node")
                _, revision = self.state.mutate(lambda s: s.keep_orphan(node_id))
                self._send_json(200, {"node": node_id}, revision)
            elif route == "/api/subcategory":
                category_id = self._field(body, "category")
                members = body.get("members")
                if not isinstance(members, list) or not all(isinstance(m, str) for m in members):
                    raise BadRequest("field 'members' must be an array of node ids")
                text = self._field(body, "text")
                category, revision = self.state.mutate(
                    lambda s: s.create_subcategory(category_id, members, text)
                )
                self._send_json(200, {"category": _category_json(category)}, revision)
            elif route.startswith("/api/category/") and route.endswith("/text"):
                category_id = route[len("/api/category/"):-len("/text")]
                text = self._field(body, "text")
                category, revision = self.state.mutate(
                    lambda s: s.revise_category_text(category_id, text)
                )
                self._send_json(200, {"category": _category_json(category)}, revision)
            elif route == "/api/save":
                path = self._field(body, "path", required=False) or self.state.save_path
                if not path:
                    raise BadRequest("no save path configured; pass {'path': ...}")
                corpus, revision = self.state.snapshot()
                with open(path, "wb") as handle:
                    handle.write(store.save_corpus_json(corpus))
                self._send_json(200, {"path": path}, revision)
            else:
                self._send_error(404, "not-found", f"no route {route}")
        except BadRequest as exc:
            self._send_error(400, "bad-request", str(exc))
        except UnknownIdError as exc:
            self._send_error(404, "not-found", str(exc))
        except (AlreadyGroupedError, NotGroupedError, KindMismatchError) as exc:
            self._send_error(409, "conflict", str(exc))
        except MissingTextError as exc:
            self._send_error(400, "bad-request", str(exc))
        except (SessionError, LabelError) as exc:
            self._send_error(409, "conflict", str(exc))
        except OSError as exc:
            self._send_error(400, "bad-request", f"save failed: {exc}")


class PadServer(ThreadingHTTPServer):
    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, address, state: ServiceState):
        super().__init__(address, _Handler)
        self.state = state

    def shutdown_service(self) -> None:
        self.shutdown()
        self.server_close()


def serve(corpus: Corpus, port: int, host: str = "127.0.0.1",
          save_path: str | None = None) -> PadServer:
    """Create the server, bound and ready for serve_forever().

    Raises SessionError when the corpus is invalid and OSError when the
    port is taken.
    """
    state = ServiceState(corpus, save_path=save_path)
    return PadServer((host, port), state)


def serve_in_background(corpus: Corpus, port: int = 0,
                        save_path: str | None = None) -> PadServer:
    """Start serving on a daemon thread; handy for tests and demos."""
    server = serve(corpus, port, save_path=save_path)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server
