"""Snapshot HTTP service: poll a metadata source, republish scenes.

One background worker polls the source (file path or HTTP URL),
re-simulates when the content hash changes, and atomically swaps an
immutable snapshot.  Request handlers only ever read the current
snapshot reference, so readers never block on simulation and never see
a partial scene.  On poll failure the last good scene stays available.
"""

from __future__ import annotations

import hashlib
import json
import logging
import mimetypes
import os
import threading
import time
import urllib.error
import urllib.request
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Optional

from .config import Config
from .errors import MetasceneError
from .metadata.parse import parse_document
from .metadata.pathloss import PathLossParams
from .pipeline import simulate_scene
from .rng import MASK64, mix64
from .scene.document import to_scene_json

logger = logging.getLogger("metascene.serve")

DEFAULT_POLL_INTERVAL_S = 30.0

_FALLBACK_INDEX = b"""<!doctype html>
<html><head><meta charset="utf-8"><title>metascene</title></head>
<body style="font-family: sans-serif">
<h1>metascene</h1>
<p>No viewer assets configured (start with --viewer-dir to serve the
browser client). The scene document is at <a href="/api/scene">/api/scene</a>,
its version at <a href="/api/version">/api/version</a>.</p>
</body></html>
"""


@dataclass(frozen=True)
class Snapshot:
    scene_bytes: bytes
    scene_version: str
    tick_count: int
    published_at: float


class SceneServer:
    """Owns the published snapshot and the poll/simulate worker."""

    def __init__(
        self,
        source: str,
        config: Config = Config(),
        params: PathLossParams = PathLossParams(),
        poll_interval: float = DEFAULT_POLL_INTERVAL_S,
        reseed_on_change: bool = False,
        viewer_dir: Optional[str] = None,
    ):
        self.source = source
        self.config = config
        self.params = params
        self.poll_interval = poll_interval
        self.reseed_on_change = reseed_on_change
        self.viewer_dir = os.path.realpath(viewer_dir) if viewer_dir else None
        self.snapshot: Optional[Snapshot] = None  # atomic reference swap
        self.last_poll: float = 0.0
        self._last_hash: Optional[str] = None
        self._stop = threading.Event()
        self._poll_thread: Optional[threading.Thread] = None

    # -- polling ---------------------------------------------------------

    def read_source(self) -> bytes:
        if self.source.startswith(("http://", "https://")):
            with urllib.request.urlopen(self.source, timeout=30) as resp:
                return resp.read()
        with open(self.source, "rb") as fh:
            return fh.read()

    def _seed_for(self, content_hash: str) -> int:
        if not self.reseed_on_change:
            return self.config.seed
        digest = int(content_hash[:16], 16)
        return mix64((self.config.seed ^ digest) & MASK64)

    def poll_once(self, force: bool = False) -> bool:
        """One poll cycle; returns True when a new snapshot was published.
        Failures are logged and keep the last good scene (stale policy)."""
        try:
            data = self.read_source()
        except (OSError, urllib.error.URLError) as exc:
            logger.warning("poll failed, keeping last scene: %s", exc)
            return False
        self.last_poll = time.time()
        content_hash = hashlib.sha256(data).hexdigest()
        if not force and content_hash == self._last_hash:
            return False
        try:
            doc = parse_document(data)
            config = self.config.replace(seed=self._seed_for(content_hash))
            scene, ticks = simulate_scene(doc, config, self.params)
        except MetasceneError as exc:
            logger.warning("source rejected, keeping last scene: %s", exc)
            return False
        self.snapshot = Snapshot(
            scene_bytes=to_scene_json(scene),
            scene_version=scene.scene_version,
            tick_count=ticks,
            published_at=time.time(),
        )
        self._last_hash = content_hash
        logger.info("published scene %s (%d ticks)", scene.scene_version, ticks)
        return True

    def start_polling(self) -> threading.Thread:
        def loop():
            while not self._stop.is_set():
                if self._stop.wait(self.poll_interval):
                    break
                self.poll_once()

        self._poll_thread = threading.Thread(target=loop, name="metascene-poll", daemon=True)
        self._poll_thread.start()
        return self._poll_thread

    def stop(self) -> None:
        self._stop.set()
        if self._poll_thread is not None:
            self._poll_thread.join(timeout=5)

    # -- http ------------------------------------------------------------

    def make_http_server(self, host: str, port: int) -> ThreadingHTTPServer:
        server = _Http((host, port), _Handler)
        server.app = self  # type: ignore[attr-defined]
        return server


class _Http(ThreadingHTTPServer):
    daemon_threads = True
    allow_reuse_address = True


class _Handler(BaseHTTPRequestHandler):
    server_version = "metascene"

    @property
    def app(self) -> SceneServer:
        return self.server.app  # type: ignore[attr-defined]

    def log_message(self, fmt, *args):
        logger.debug("%s - %s", self.address_string(), fmt % args)

    def _send(self, status: int, body: bytes, content_type: str, headers: dict | None = None):
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        for key, value in (headers or {}).items():
            self.send_header(key, value)
        self.end_headers()
        if self.command != "HEAD":
            self.wfile.write(body)

    def do_GET(self):  # noqa: N802 (stdlib naming)
        path = self.path.split("?", 1)[0]
        if path == "/api/scene":
            return self._scene()
        if path == "/api/version":
            return self._version()
        if path == "/healthz":
            return self._send(200, b"ok", "text/plain; charset=utf-8")
        return self._static(path)

    do_HEAD = do_GET

    def _scene(self):
        snap = self.app.snapshot
        if snap is None:
            return self._send(503, b'{"error":"no scene published yet"}',
                              "application/json; charset=utf-8")
        inm = self.headers.get("If-None-Match")
        headers = {"X-Scene-Version": snap.scene_version}
        if inm is not None and inm.strip().strip('"') == snap.scene_version:
            return self._send(304, b"", "application/json; charset=utf-8", headers)
        return self._send(200, snap.scene_bytes, "application/json; charset=utf-8", headers)

    def _version(self):
        snap = self.app.snapshot
        if snap is None:
            return self._send(503, b'{"error":"no scene published yet"}',
                              "application/json; charset=utf-8")
        body = json.dumps({
            "scene_version": snap.scene_version,
            "tick_count": snap.tick_count,
            "last_poll": self.app.last_poll,
        }).encode("utf-8")
        return self._send(200, body, "application/json; charset=utf-8",
                          {"X-Scene-Version": snap.scene_version})

    def _static(self, path: str):
        if path in ("", "/"):
            path = "/index.html"
        root = self.app.viewer_dir
        if root is None:
            if path == "/index.html":
                return self._send(200, _FALLBACK_INDEX, "text/html; charset=utf-8")
            return self._send(404, b"not found", "text/plain; charset=utf-8")
        target = os.path.realpath(os.path.join(root, path.lstrip("/")))
        if os.path.commonpath([root, target]) != root:
            return self._send(403, b"forbidden", "text/plain; charset=utf-8")
        if not os.path.isfile(target):
            return self._send(404, b"not found", "text/plain; charset=utf-8")
        ctype = mimetypes.guess_type(target)[0] or "application/octet-stream"
        with open(target, "rb") as fh:
            return self._send(200, fh.read(), ctype)


def serve_forever(server: SceneServer, host: str, port: int) -> None:
    """Blocking entry: initial publish, then poll worker + HTTP listener."""
    if not server.poll_once(force=True):
        raise MetasceneError(f"could not produce an initial scene from {server.source!r}")
    httpd = server.make_http_server(host, port)
    server.start_polling()
    logger.info("serving on %s:%d (poll every %.1fs)", host, port, server.poll_interval)
    try:
        httpd.serve_forever()
    finally:
        server.stop()
        httpd.server_close()
