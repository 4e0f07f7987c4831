"""Read-only HTTP API over one loaded corpus.

The graph is an immutable snapshot shared by all request handlers; handlers
are pure readers, so requests may run fully in parallel and identical
requests return identical bytes. API responses are canonical JSON with
permissive CORS headers; an optional static directory is served for the UI.
"""

from __future__ import annotations

import json
import mimetypes
import posixpath
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, unquote, urlparse

from . import export, payloads, queries
from .graph import KnowledgeGraph, UnknownNodeError
from .model import NodeKind


class ApiError(Exception):
    def __init__(self, status: int, error: str, message: str):
        self.status = status
        self.error = error
        self.message = message
        super().__init__(message)

    def payload(self) -> dict:
        return {"error": self.error, "message": self.message}


def _unknown_node(node_id: str) -> ApiError:
    return ApiError(404, "unknown-node", f"unknown node: {node_id}")


def _bad_request(message: str) -> ApiError:
    return ApiError(400, "bad-request", message)


def _wrong_method(method: str) -> ApiError:
    return ApiError(405, "method-not-allowed", f"method {method} not allowed here")


def api_graph(graph: KnowledgeGraph) -> dict:
    return export.export_viz(graph)


def api_node(graph: KnowledgeGraph, node_id: str) -> dict:
    try:
        return payloads.node_payload(graph, node_id)
    except UnknownNodeError:
        raise _unknown_node(node_id) from None


def api_lineage(graph: KnowledgeGraph, node_id: str) -> dict:
    try:
        return payloads.lineage_payload(queries.lineage(graph, node_id))
    except UnknownNodeError:
        raise _unknown_node(node_id) from None


def api_available(graph: KnowledgeGraph, body: bytes) -> dict:
    try:
        raw = json.loads(body.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError):
        raise _bad_request("body must be a JSON object") from None
    if not isinstance(raw, dict) or set(raw) - {"selected", "mode"}:
        raise _bad_request("body must be {\"selected\": [...], \"mode\": \"paper\"|\"any-impl\"}")
    selected = raw.get("selected", [])
    mode = raw.get("mode", queries.PAPER)
    if not isinstance(selected, list) or not all(isinstance(s, str) for s in selected):
        raise _bad_request("'selected' must be an array of node ids")
    try:
        result = queries.available(graph, selected, mode)
    except queries.UnknownModeError as exc:
        raise _bad_request(str(exc)) from None
    except UnknownNodeError as exc:
        raise _unknown_node(exc.node_id) from None
    return payloads.availability_payload(result)


def api_centrality(graph: KnowledgeGraph, query: dict[str, list[str]]) -> list[dict]:
    kinds = None
    if query.get("kind"):
        try:
            kinds = [NodeKind(k) for k in query["kind"][0].split(",") if k]
        except ValueError:
            raise _bad_request(f"unknown node kind: {query['kind'][0]!r}") from None
    top = None
    if query.get("top"):
        try:
            top = int(query["top"][0])
        except ValueError:
            raise _bad_request("'top' must be an integer") from None
    return payloads.centrality_payload(queries.centrality(graph, kinds, top))


def api_stats(graph: KnowledgeGraph) -> dict:
    return payloads.stats_payload(graph)


class _Handler(BaseHTTPRequestHandler):
    graph: KnowledgeGraph
    static_dir: Path | None
    protocol_version = "HTTP/1.1"

    def log_message(self, format, *args):  # noqa: A002 - stdlib signature
        pass

    def do_OPTIONS(self):
        if self._api_path() is not None:
            self.send_response(204)
            self._cors_headers()
            self.send_header("Content-Length", "0")
            self.end_headers()
        else:
            self._send_error(_wrong_method("OPTIONS"))

    def do_GET(self):
        path = self._api_path()
        if path is None:
            self._serve_static()
            return
        try:
            parsed = urlparse(self.path)
            if path == "/api/graph":
                self._send_json(200, api_graph(self.graph))
            elif path.startswith("/api/nodes/"):
                self._send_json(200, api_node(self.graph, unquote(path[len("/api/nodes/"):])))
            elif path.startswith("/api/lineage/"):
                self._send_json(200, api_lineage(self.graph, unquote(path[len("/api/lineage/"):])))
            elif path == "/api/centrality":
                self._send_json(200, api_centrality(self.graph, parse_qs(parsed.query)))
            elif path == "/api/stats":
                self._send_json(200, api_stats(self.graph))
            elif path == "/api/available":
                raise _wrong_method("GET")
            else:
                raise ApiError(404, "not-found", f"no such endpoint: {path}")
        except ApiError as exc:
            self._send_error(exc)

    def do_POST(self):
        path = self._api_path()
        try:
            if path == "/api/available":
                length = int(self.headers.get("Content-Length", "0") or "0")
                body = self.rfile.read(length)
                self._send_json(200, api_available(self.graph, body))
            elif path is not None:
                raise _wrong_method("POST")
            else:
                raise _wrong_method("POST")
        except ApiError as exc:
            self._send_error(exc)

    def _api_path(self) -> str | None:
        path = urlparse(self.path).path
        return path if path.startswith("/api/") else None

    def _cors_headers(self):
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")

    def _send_json(self, status: int, payload):
        body = payloads.canonical_json(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self._cors_headers()
        self.end_headers()
        self.wfile.write(body)

    def _send_error(self, exc: ApiError):
        self._send_json(exc.status, exc.payload())

    def _serve_static(self):
        if self.static_dir is None:
            self._send_error(ApiError(404, "not-found", "no static directory configured"))
            return
        raw = urlparse(self.path).path
        clean = posixpath.normpath(unquote(raw)).lstrip("/")
        if clean in ("", "."):
            clean = "index.html"
        candidate = (self.static_dir / clean).resolve()
        root = self.static_dir.resolve()
        if root not in candidate.parents and candidate != root:
            self._send_error(ApiError(404, "not-found", "file not found"))
            return
        if candidate.is_dir():
            candidate = candidate / "index.html"
        if not candidate.is_file():
            self._send_error(ApiError(404, "not-found", "file not found"))
            return
        content_type = mimetypes.guess_type(candidate.name)[0] or "application/octet-stream"
        body = candidate.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


def make_server(
    graph: KnowledgeGraph, port: int = 0, static_dir: str | None = None
) -> ThreadingHTTPServer:
    """Bind a server; port 0 picks a free port (see ``server_address``)."""
    handler = type(
        "BoundHandler",
        (_Handler,),
        {"graph": graph, "static_dir": Path(static_dir) if static_dir else None},
    )
    return ThreadingHTTPServer(("127.0.0.1", port), handler)


def run_server(graph: KnowledgeGraph, port: int, static_dir: str | None = None) -> None:
    server = make_server(graph, port, static_dir)
    host, bound_port = server.server_address[:2]
    print(f"serving on http://{host}:{bound_port}/ (ctrl-c to stop)", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
