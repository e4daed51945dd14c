"""HTTP server for reviewing planned recipes and collecting annotations.

Serves a results directory (one subdirectory per recipe containing
``tree.json`` and ``progress.json``) over a small JSON API, persists
reviewer scores next to the recipe they belong to, and optionally serves
a static review UI from a separate directory.

API
---
- ``GET /api/recipes`` — every recipe with its ingredients and whether
  it has been annotated.
- ``GET /api/recipes/<id>/tree`` — the stored task tree document.
- ``GET /api/recipes/<id>/progress`` — the stored progress document.
- ``GET /api/recipes/<id>/annotations`` — stored scores (empty if none).
- ``PUT /api/recipes/<id>/annotations`` — replace the stored scores;
  the body is ``{"scores": {ingredient: 0|1|2}}`` and every ingredient
  must come from the recipe's progress lines.
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional

from .documents import annotation_to_doc, dumps_canonical, load_annotation, write_text_atomic
from .errors import DocumentError, ServeError
from .progress import load_progress
from .report import ANNOTATIONS_FILE, PROGRESS_FILE, TREE_FILE

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".json": "application/json; charset=utf-8",
    ".png": "image/png",
    ".svg": "image/svg+xml",
    ".ico": "image/x-icon",
    ".txt": "text/plain; charset=utf-8",
}


class ReviewService:
    """Filesystem-backed recipe/annotation store used by the handler."""

    def __init__(self, results_dir: Path | str):
        self.results_dir = Path(results_dir)
        if not self.results_dir.is_dir():
            raise ServeError(f"results directory not found: {self.results_dir}")
        self._write_lock = threading.Lock()

    def recipe_ids(self) -> list[str]:
        return sorted(
            p.name
            for p in self.results_dir.iterdir()
            if p.is_dir() and (p / PROGRESS_FILE).is_file()
        )

    def _recipe_dir(self, recipe_id: str) -> Path:
        if not recipe_id or "/" in recipe_id or "\\" in recipe_id or recipe_id in (".", ".."):
            raise KeyError(recipe_id)
        path = self.results_dir / recipe_id
        if not path.is_dir() or not (path / PROGRESS_FILE).is_file():
            raise KeyError(recipe_id)
        return path

    def list_recipes(self) -> list[dict]:
        recipes = []
        for recipe_id in self.recipe_ids():
            recipe_dir = self.results_dir / recipe_id
            lines = load_progress(recipe_dir / PROGRESS_FILE)
            recipes.append(
                {
                    "id": recipe_id,
                    "ingredients": [line.ingredient for line in lines],
                    "annotated": (recipe_dir / ANNOTATIONS_FILE).is_file(),
                }
            )
        return recipes

    def read_document(self, recipe_id: str, filename: str) -> dict:
        path = self._recipe_dir(recipe_id) / filename
        if not path.is_file():
            raise KeyError(f"{recipe_id}/{filename}")
        return json.loads(path.read_text(encoding="utf-8"))

    def read_annotations(self, recipe_id: str) -> dict:
        recipe_dir = self._recipe_dir(recipe_id)
        path = recipe_dir / ANNOTATIONS_FILE
        if not path.is_file():
            return annotation_to_doc(recipe_id, {})
        return load_annotation(path)

    def write_annotations(self, recipe_id: str, doc: object) -> dict:
        recipe_dir = self._recipe_dir(recipe_id)
        if not isinstance(doc, dict):
            raise ServeError("annotation body must be a JSON object")
        payload = dict(doc)
        payload.setdefault("recipe_id", recipe_id)
        payload["recipe_id"] = recipe_id
        checked = _validate_annotation(payload)
        lines = load_progress(recipe_dir / PROGRESS_FILE)
        allowed = {line.ingredient for line in lines}
        unknown = sorted(set(checked["scores"]) - allowed)
        if unknown:
            raise ServeError(
                "scores reference ingredients outside this recipe: " + ", ".join(unknown)
            )
        final = annotation_to_doc(recipe_id, checked["scores"])
        with self._write_lock:
            write_text_atomic(recipe_dir / ANNOTATIONS_FILE, dumps_canonical(final))
        return final


def _validate_annotation(payload: dict) -> dict:
    from .documents import annotation_from_doc

    try:
        return annotation_from_doc(payload, source="request body")
    except DocumentError as exc:
        raise ServeError(str(exc)) from exc


class ReviewHandler(BaseHTTPRequestHandler):
    service: ReviewService
    ui_dir: Optional[Path] = None
    quiet = True

    def log_message(self, format: str, *args) -> None:  # noqa: A002
        if not self.quiet:
            super().log_message(format, *args)

    def _send_json(self, payload, status: int = 200) -> None:
        body = dumps_canonical(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_error_json(self, status: int, message: str) -> None:
        self._send_json({"error": message}, status)

    def _route(self) -> Optional[tuple[str, str]]:
        """Split /api/recipes/<id>/<doc> into (id, doc)."""
        parts = [p for p in self.path.split("?")[0].split("/") if p]
        if len(parts) == 4 and parts[0] == "api" and parts[1] == "recipes":
            return parts[2], parts[3]
        return None

    def do_GET(self) -> None:  # noqa: N802
        path = self.path.split("?")[0]
        try:
            if path == "/api/recipes":
                self._send_json(self.service.list_recipes())
                return
            route = self._route()
            if route is not None:
                recipe_id, doc = route
                if doc == "tree":
                    self._send_json(self.service.read_document(recipe_id, TREE_FILE))
                elif doc == "progress":
                    self._send_json(self.service.read_document(recipe_id, PROGRESS_FILE))
                elif doc == "annotations":
                    self._send_json(self.service.read_annotations(recipe_id))
                else:
                    self._send_error_json(404, f"unknown resource '{doc}'")
                return
            if path.startswith("/api/"):
                self._send_error_json(404, f"no such endpoint: {path}")
                return
            self._send_static(path)
        except KeyError as exc:
            self._send_error_json(404, f"not found: {exc.args[0]}")
        except Exception as exc:  # pragma: no cover - defensive
            self._send_error_json(500, str(exc))

    def do_PUT(self) -> None:  # noqa: N802
        route = self._route()
        try:
            if route is None or route[1] != "annotations":
                self._send_error_json(404, f"no such endpoint: {self.path}")
                return
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b""
            try:
                payload = json.loads(raw.decode("utf-8") or "null")
            except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                self._send_error_json(400, f"body is not valid JSON: {exc}")
                return
            saved = self.service.write_annotations(route[0], payload)
            self._send_json(saved)
        except KeyError as exc:
            self._send_error_json(404, f"not found: {exc.args[0]}")
        except ServeError as exc:
            self._send_error_json(400, str(exc.args[0]) if exc.args else str(exc))
        except Exception as exc:  # pragma: no cover - defensive
            self._send_error_json(500, str(exc))

    def _send_static(self, path: str) -> None:
        if self.ui_dir is None:
            self._send_error_json(404, "no review UI is configured; use the /api endpoints")
            return
        relative = path.lstrip("/") or "index.html"
        target = (self.ui_dir / relative).resolve()
        root = self.ui_dir.resolve()
        if root not in target.parents and target != root:
            self._send_error_json(404, "not found")
            return
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            self._send_error_json(404, f"not found: {path}")
            return
        body = target.read_bytes()
        content_type = _CONTENT_TYPES.get(target.suffix.lower(), "application/octet-stream")
        self.send_response(200)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


def make_server(
    results_dir: Path | str,
    host: str = "127.0.0.1",
    port: int = 8080,
    ui_dir: Optional[Path | str] = None,
) -> ThreadingHTTPServer:
    """Build (but do not start) the review server; port 0 picks a free port."""
    service = ReviewService(results_dir)
    ui_path = Path(ui_dir) if ui_dir is not None else None
    if ui_path is not None and not ui_path.is_dir():
        raise ServeError(f"UI directory not found: {ui_path}")

    handler = type(
        "BoundReviewHandler",
        (ReviewHandler,),
        {"service": service, "ui_dir": ui_path},
    )
    try:
        return ThreadingHTTPServer((host, port), handler)
    except OSError as exc:
        raise ServeError(f"cannot bind {host}:{port}: {exc}") from exc


def serve_forever(server: ThreadingHTTPServer) -> None:
    host, port = server.server_address[:2]
    print(f"review server listening on http://{host}:{port}/")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
