"""The playground HTTP service.

POST /compile runs one isolated compile per request (own fuel budget, 5 s
wall clock); GET /health reports liveness and GET / serves the static
playground bundle.  Nothing a student submits is stored or logged; the
access log carries only a hash of the source.
"""

from __future__ import annotations

import json
import logging
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional

from .evaluator import DEFAULT_FUEL
from .pipeline import CompileOutcome, compile_source, source_digest
from .diagnostics import error

VERSION = "0.1.0"
MAX_SOURCE_BYTES = 256 * 1024
MAX_RESPONSE_BYTES = 16 * 1024 * 1024
WALL_CLOCK_LIMIT = 5.0
MAX_FUEL = 10_000_000
MAX_FRAME_COUNT = 600

log = logging.getLogger("funcanvas.service")

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".svg": "image/svg+xml",
    ".json": "application/json",
    ".map": "application/json",
    ".png": "image/png",
    ".ico": "image/x-icon",
}

_PLACEHOLDER_PAGE = """<!DOCTYPE html>
<html><head><meta charset="utf-8"><title>funcanvas</title></head>
<body><h1>funcanvas service</h1>
<p>The service is running. POST programs to <code>/compile</code>, or start
the server with <code>--static</code> pointing at the playground bundle to
use the browser editor.</p></body></html>
"""


def _bad_request_outcome(message: str) -> CompileOutcome:
    return CompileOutcome(False, [error("invalid-request", message, (1, 1))])


def handle_compile(payload: dict, default_fuel: int = DEFAULT_FUEL) -> CompileOutcome:
    """Validate a request object and run the pipeline under service limits."""
    source = payload.get("source")
    if not isinstance(source, str):
        return _bad_request_outcome("'source' must be text")
    mode = payload.get("mode", "check")
    if mode not in ("check", "draw", "animate"):
        return _bad_request_outcome("'mode' must be check, draw or animate")
    fuel = payload.get("fuel", default_fuel)
    if not isinstance(fuel, int) or isinstance(fuel, bool) or not 0 < fuel <= MAX_FUEL:
        return _bad_request_outcome(f"'fuel' must be a whole number between 1 and {MAX_FUEL}")
    fps = payload.get("fps", 10)
    duration = payload.get("duration", 2)
    if not isinstance(fps, (int, float)) or isinstance(fps, bool) or not 0 < fps <= 60:
        return _bad_request_outcome("'fps' must be a number between 0 and 60")
    if not isinstance(duration, (int, float)) or isinstance(duration, bool) or not 0 <= duration <= 60:
        return _bad_request_outcome("'duration' must be between 0 and 60 seconds")
    if fps * duration > MAX_FRAME_COUNT:
        return _bad_request_outcome(f"fps * duration must stay at or below {MAX_FRAME_COUNT} frames")
    return compile_source(source, mode=mode, fuel=fuel, fps=float(fps),
                          duration=float(duration), time_limit=WALL_CLOCK_LIMIT)


class PlaygroundHandler(BaseHTTPRequestHandler):
    server_version = f"funcanvas/{VERSION}"
    protocol_version = "HTTP/1.1"

    # Quiet the default per-line stderr log; _log_request prints one line.
    def log_message(self, format, *args):  # noqa: A002 - stdlib signature
        pass

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self) -> None:  # noqa: N802 - stdlib naming
        path = self.path.split("?", 1)[0]
        if path == "/health":
            self._send_json(200, {"status": "ok", "version": VERSION})
            return
        self._serve_static(path)

    def _serve_static(self, path: str) -> None:
        static_dir: Optional[str] = self.server.static_dir  # type: ignore[attr-defined]
        if path in ("", "/"):
            path = "/index.html"
        if static_dir is None:
            if path == "/index.html":
                body = _PLACEHOLDER_PAGE.encode("utf-8")
                self.send_response(200)
                self.send_header("Content-Type", "text/html; charset=utf-8")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)
                return
            self._send_json(404, {"error": "not found"})
            return
        root = Path(static_dir).resolve()
        target = (root / path.lstrip("/")).resolve()
        if not target.is_relative_to(root) or not target.is_file():
            self._send_json(404, {"error": "not found"})
            return
        body = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", _CONTENT_TYPES.get(target.suffix, "application/octet-stream"))
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_POST(self) -> None:  # noqa: N802 - stdlib naming
        if self.path.split("?", 1)[0] != "/compile":
            self._send_json(404, {"error": "not found"})
            return
        started = time.monotonic()
        length = int(self.headers.get("Content-Length") or 0)
        if length > MAX_SOURCE_BYTES + 64 * 1024:
            self._send_json(413, {"error": "source too large"})
            return
        raw = self.rfile.read(length)
        try:
            payload = json.loads(raw.decode("utf-8"))
            if not isinstance(payload, dict):
                raise ValueError("not an object")
        except (ValueError, UnicodeDecodeError):
            self._send_json(400, {"error": "request body is not a JSON object"})
            return
        source = payload.get("source")
        if isinstance(source, str) and len(source.encode("utf-8")) > MAX_SOURCE_BYTES:
            self._send_json(413, {"error": "source too large"})
            return
        outcome = handle_compile(payload, self.server.default_fuel)  # type: ignore[attr-defined]
        body = outcome.to_json()
        encoded = json.dumps(body).encode("utf-8")
        if len(encoded) > MAX_RESPONSE_BYTES:
            outcome = CompileOutcome(False, [error(
                "output-too-large", "the rendered output exceeds the 16 MiB response limit", (1, 1))])
            encoded = json.dumps(outcome.to_json()).encode("utf-8")
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(encoded)))
        self.end_headers()
        self.wfile.write(encoded)
        digest = source_digest(source) if isinstance(source, str) else "-"
        log.info("compile mode=%s ok=%s ms=%d source=%s",
                 payload.get("mode", "check"), outcome.ok,
                 int((time.monotonic() - started) * 1000), digest)


class PlaygroundServer(ThreadingHTTPServer):
    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, address, static_dir: Optional[str] = None,
                 default_fuel: int = DEFAULT_FUEL):
        super().__init__(address, PlaygroundHandler)
        self.static_dir = static_dir
        self.default_fuel = default_fuel


def make_server(host: str = "127.0.0.1", port: int = 0, static_dir: Optional[str] = None,
                default_fuel: int = DEFAULT_FUEL) -> PlaygroundServer:
    return PlaygroundServer((host, port), static_dir=static_dir, default_fuel=default_fuel)


def serve_forever(host: str, port: int, static_dir: Optional[str],
                  default_fuel: int = DEFAULT_FUEL) -> int:
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(message)s")
    server = make_server(host, port, static_dir, default_fuel)
    log.info("listening on http://%s:%d/", host, server.server_address[1])
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        log.info("shutting down")
    finally:
        server.server_close()
    return 0
