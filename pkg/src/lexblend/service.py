"""HTTP suggestion service: two JSON endpoints plus static demo assets.

POST /suggest ranks candidates for a gap; GET /health reports model identity.
GET / serves files from a static directory when one is configured. The model
is immutable once loaded, so the threading server needs no locks.
"""
from __future__ import annotations

import json
import mimetypes
import time
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .inference import GapContext, ModelParams, OOV_ID, predict
from .model import TrainedModel

DEFAULT_ADDR = "127.0.0.1:8763"
ADDR_ENV_VAR = "LEXBLEND_ADDR"
DEFAULT_TOP_M = 2000

_FALLBACK_PAGE = b"""<!doctype html>
<meta charset="utf-8">
<title>lexblend service</title>
<p>Suggestion service is running. POST /suggest, GET /health.</p>
<p>No demo assets are configured; start with --static to serve a UI.</p>
"""


class BadRequest(Exception):
    """Client payload is structurally invalid (HTTP 400)."""


class EmptyRequest(Exception):
    """No context and no candidates: nothing to rank (HTTP 422)."""


@dataclass(frozen=True)
class SuggestRequest:
    """Validated /suggest payload."""

    before: tuple[str, ...]
    after: tuple[str, ...]
    k: int
    candidates: tuple[str, ...] | None
    alpha: float | None


def _word_list(value, name: str) -> tuple[str, ...]:
    if value is None:
        return ()
    if not isinstance(value, list) or not all(
        isinstance(w, str) and w.strip() for w in value
    ):
        raise BadRequest(f"{name} must be a list of non-empty strings")
    return tuple(w.strip().lower() for w in value)


def parse_suggest_request(payload) -> SuggestRequest:
    """Validate a decoded JSON body; raises BadRequest / EmptyRequest."""
    if not isinstance(payload, dict):
        raise BadRequest("request body must be a JSON object")
    unknown = set(payload) - {"before", "after", "k", "candidates", "alpha"}
    if unknown:
        raise BadRequest(f"unknown fields: {sorted(unknown)}")
    before = _word_list(payload.get("before"), "before")
    after = _word_list(payload.get("after"), "after")
    k = payload.get("k", 5)
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise BadRequest("k must be a positive integer")
    candidates = None
    if payload.get("candidates") is not None:
        candidates = _word_list(payload["candidates"], "candidates")
        if not candidates:
            raise BadRequest("candidates, when given, must be non-empty")
    alpha = payload.get("alpha")
    if alpha is not None:
        if isinstance(alpha, bool) or not isinstance(alpha, (int, float)):
            raise BadRequest("alpha must be a number")
        if not 0.0 <= float(alpha) <= 1.0:
            raise BadRequest("alpha must be in [0, 1]")
        alpha = float(alpha)
    if not before and not after and candidates is None:
        raise EmptyRequest("empty context and no candidates")
    return SuggestRequest(
        before=before, after=after, k=k, candidates=candidates, alpha=alpha
    )


class SuggestionApp:
    """Model-bound request logic, independent of the HTTP plumbing."""

    def __init__(
        self,
        model: TrainedModel,
        params: ModelParams,
        top_m: int = DEFAULT_TOP_M,
        static_dir: str | Path | None = None,
    ):
        self.model = model
        self.params = params
        self.top_m = top_m
        self.static_dir = Path(static_dir).resolve() if static_dir else None
        counts = model.vocab.counts
        by_prior = sorted(range(len(counts)), key=lambda wid: (-counts[wid], wid))
        self._prior_cut = by_prior[:top_m]

    def suggest(self, req: SuggestRequest) -> dict:
        vocab = self.model.vocab
        lookup = vocab.word_to_id
        before = [lookup.get(w, OOV_ID) for w in req.before]
        after = [lookup.get(w, OOV_ID) for w in req.after]
        if req.candidates is not None:
            cand_ids = [lookup.get(w, OOV_ID) for w in req.candidates]
            words = list(req.candidates)
        else:
            cand_ids = list(self._prior_cut)
            words = [vocab.id_to_word[wid] for wid in cand_ids]
        params = self.params
        if req.alpha is not None:
            params = params.copy()
            params.alpha = req.alpha
        ctx = GapContext(before=before, after=after, candidates=cand_ids)
        started = time.perf_counter()
        ranked = predict(self.model, ctx, params)
        elapsed_ms = (time.perf_counter() - started) * 1000.0
        return {
            "suggestions": [
                {"word": words[sc.index], "theta": sc.theta}
                for sc in ranked[: req.k]
            ],
            "latency_ms": elapsed_ms,
        }

    def health(self) -> dict:
        return {
            "status": "ok",
            "fingerprint": self.model.fingerprint.hex(),
            "vocab_size": len(self.model.vocab),
            "max_distance": self.model.graphs.max_distance,
            "svd_rank": self.model.srt.rank,
        }

    def static_file(self, url_path: str) -> tuple[bytes, str] | None:
        """Resolve a GET path inside the static root; None when absent."""
        if self.static_dir is None:
            if url_path in ("/", "/index.html"):
                return _FALLBACK_PAGE, "text/html; charset=utf-8"
            return None
        rel = url_path.lstrip("/") or "index.html"
        target = (self.static_dir / rel).resolve()
        if not str(target).startswith(str(self.static_dir)) or not target.is_file():
            return None
        ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        if ctype.startswith("text/") or ctype == "application/javascript":
            ctype += "; charset=utf-8"
        return target.read_bytes(), ctype


class _Handler(BaseHTTPRequestHandler):
    app: SuggestionApp  # set on the server class

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_POST(self):  # noqa: N802 (stdlib naming)
        if self.path.split("?")[0] != "/suggest":
            self._send_json(404, {"error": "unknown endpoint"})
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            payload = json.loads(self.rfile.read(length).decode("utf-8"))
            req = parse_suggest_request(payload)
        except EmptyRequest as exc:
            self._send_json(422, {"error": str(exc)})
            return
        except (BadRequest, json.JSONDecodeError, UnicodeDecodeError, ValueError) as exc:
            self._send_json(400, {"error": f"malformed request: {exc}"})
            return
        self._send_json(200, self.server.app.suggest(req))

    def do_GET(self):  # noqa: N802
        path = self.path.split("?")[0]
        if path == "/health":
            self._send_json(200, self.server.app.health())
            return
        resolved = self.server.app.static_file(path)
        if resolved is None:
            self._send_json(404, {"error": "not found"})
            return
        body, ctype = resolved
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, fmt, *args):  # quiet by default
        pass


class SuggestionServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, addr: tuple[str, int], app: SuggestionApp):
        super().__init__(addr, _Handler)
        self.app = app


def parse_addr(addr: str) -> tuple[str, int]:
    host, _, port = addr.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"address must look like host:port, got {addr!r}")
    return host, int(port)


def create_server(
    model: TrainedModel,
    params: ModelParams,
    addr: str = DEFAULT_ADDR,
    static_dir: str | Path | None = None,
    top_m: int = DEFAULT_TOP_M,
) -> SuggestionServer:
    app = SuggestionApp(model, params, top_m=top_m, static_dir=static_dir)
    return SuggestionServer(parse_addr(addr), app)
