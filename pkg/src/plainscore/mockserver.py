"""In-process HTTP server speaking the chat-completions/embeddings wire shape.

Backed entirely by the deterministic mock rules, so integration tests can
exercise the real HTTP client path without a network or a model. Routes:
POST .../chat/completions and POST .../embeddings (any prefix, e.g. /v1).
"""

from __future__ import annotations

import json
import threading
from contextlib import contextmanager
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from . import mock
from .errors import MockDispatchError


def _handler_class(dimension: int, seed: int):
    class MockEndpointHandler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, *args):  # keep test output quiet
            pass

        def _send_json(self, status: int, payload: dict) -> None:
            body = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def do_POST(self):
            length = int(self.headers.get("Content-Length", "0"))
            try:
                request = json.loads(self.rfile.read(length) or b"{}")
            except json.JSONDecodeError:
                self._send_json(400, {"error": "invalid JSON body"})
                return
            if self.path.endswith("/chat/completions"):
                self._chat(request)
            elif self.path.endswith("/embeddings"):
                self._embeddings(request)
            else:
                self._send_json(404, {"error": f"no route {self.path}"})

        def _chat(self, request: dict) -> None:
            messages = request.get("messages") or []
            system_text = ""
            user_text = ""
            for message in messages:
                if message.get("role") == "system":
                    system_text = message.get("content", "")
                elif message.get("role") == "user":
                    user_text = message.get("content", "")
            try:
                content = mock.reply(system_text, user_text)
            except MockDispatchError as exc:
                self._send_json(400, {"error": str(exc)})
                return
            self._send_json(200, {
                "id": "mock-completion",
                "object": "chat.completion",
                "model": request.get("model", "mock"),
                "choices": [{
                    "index": 0,
                    "message": {"role": "assistant", "content": content},
                    "finish_reason": "stop",
                }],
            })

        def _embeddings(self, request: dict) -> None:
            texts = request.get("input") or []
            if isinstance(texts, str):
                texts = [texts]
            vectors = mock.embed_texts([str(t) for t in texts], dimension, seed)
            self._send_json(200, {
                "object": "list",
                "model": request.get("model", "mock"),
                "data": [
                    {"object": "embedding", "index": i, "embedding": row.tolist()}
                    for i, row in enumerate(vectors)
                ],
            })

    return MockEndpointHandler


def make_server(host: str = "127.0.0.1", port: int = 0,
                dimension: int = mock.DEFAULT_DIMENSION,
                seed: int = mock.DEFAULT_MOCK_SEED) -> ThreadingHTTPServer:
    return ThreadingHTTPServer((host, port), _handler_class(dimension, seed))


@contextmanager
def running_server(dimension: int = mock.DEFAULT_DIMENSION,
                   seed: int = mock.DEFAULT_MOCK_SEED):
    """Start the mock server on a free port; yields its base URL."""
    server = make_server(dimension=dimension, seed=seed)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        yield f"http://{server.server_address[0]}:{server.server_address[1]}"
    finally:
        server.shutdown()
        server.server_close()
        thread.join(timeout=5)
