"""HTTP service over a directory of diagram documents.

Documents live as ``{id}.erd.json`` files next to ``{id}.meta.json``
version sidecars, so a restart loses nothing. Writes go through a
per-diagram lock and an atomic replace; readers always see a committed
version. Concurrency is optimistic: a PUT may carry the version it was
based on in the ``X-Base-Version`` header and is rejected with 409 when
that version is stale. A PUT without the header overwrites (last write
wins). Every response names the diagram version it reflects.

The CLI and this service call the same library functions, so a mode file
fetched over HTTP is byte-identical to the CLI's output for the same
request.
"""

from __future__ import annotations

import json
import re
import threading
from pathlib import Path as FsPath

from fastapi import Body, FastAPI, Header, HTTPException

from .clausespace import DEFAULT_CAP, enumerate_clauses, report_to_json
from .errors import ERModesError, IRSyntaxError, ValidationError
from .ir import (
    IGNORED_KEYS,
    SEMANTIC_KEYS,
    diagram_from_dict,
    diagram_to_dict,
    feature_ref_to_dict,
)
from .modes import DIALECTS, emit_modes, gmc
from .paths import Strategy, WalkConfig, find_paths, random_paths

DIAGRAM_ID_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_-]*$")


class StaleVersionError(Exception):
    def __init__(self, current: int):
        super().__init__(f"stale base version; current is {current}")
        self.current = current


class DiagramStore:
    """File-backed store with per-diagram write serialization."""

    def __init__(self, root):
        self.root = FsPath(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock_for(self, diagram_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(diagram_id, threading.Lock())

    def _doc_path(self, diagram_id: str) -> FsPath:
        return self.root / f"{diagram_id}.erd.json"

    def _meta_path(self, diagram_id: str) -> FsPath:
        return self.root / f"{diagram_id}.meta.json"

    def _version(self, diagram_id: str) -> int:
        meta = self._meta_path(diagram_id)
        if meta.exists():
            return int(json.loads(meta.read_text(encoding="utf-8"))["version"])
        # hand-dropped documents count as version 1
        return 1 if self._doc_path(diagram_id).exists() else 0

    def ids(self) -> list[str]:
        return sorted(p.name[:-len(".erd.json")]
                      for p in self.root.glob("*.erd.json"))

    def get(self, diagram_id: str) -> tuple[dict, int]:
        with self._lock_for(diagram_id):
            path = self._doc_path(diagram_id)
            if not path.exists():
                raise KeyError(diagram_id)
            doc = json.loads(path.read_text(encoding="utf-8"))
            return doc, self._version(diagram_id)

    def put(self, diagram_id: str, doc: dict,
            base_version: int | None) -> int:
        with self._lock_for(diagram_id):
            current = self._version(diagram_id)
            if base_version is not None and base_version != current:
                raise StaleVersionError(current)
            version = current + 1
            self._write_atomic(self._doc_path(diagram_id),
                               json.dumps(doc, indent=2, sort_keys=True) + "\n")
            self._write_atomic(self._meta_path(diagram_id),
                               json.dumps({"version": version}) + "\n")
            return version

    @staticmethod
    def _write_atomic(path: FsPath, text: str) -> None:
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(text, encoding="utf-8")
        tmp.replace(path)


def _path_to_dict(path) -> dict:
    return {
        "steps": list(path.steps),
        "relations": path.relation_count,
        "endpoint": feature_ref_to_dict(path.endpoint),
        "rendered": path.render(),
    }


def _bad_request(message: str) -> HTTPException:
    return HTTPException(status_code=400, detail=message)


def create_app(store_dir, ui_dir: str | None = None) -> FastAPI:
    store = DiagramStore(store_dir)
    app = FastAPI(title="ermodes service")

    def load(diagram_id: str):
        _check_id(diagram_id)
        try:
            doc, version = store.get(diagram_id)
        except KeyError:
            raise HTTPException(status_code=404,
                                detail=f"no diagram {diagram_id!r}")
        semantic = {key: doc.get(key) for key in SEMANTIC_KEYS
                    if doc.get(key) is not None}
        semantic.setdefault("annotation", None)
        try:
            diagram = diagram_from_dict(semantic)
        except ERModesError as exc:
            raise _bad_request(f"stored diagram is unusable: {exc}")
        return diagram, doc, version

    def _check_id(diagram_id: str) -> None:
        if not DIAGRAM_ID_RE.match(diagram_id):
            raise _bad_request(f"invalid diagram id {diagram_id!r}")

    def _config_from(payload: dict) -> WalkConfig:
        raw = payload.get("config", {})
        if not isinstance(raw, dict):
            raise _bad_request("config must be an object")
        try:
            return WalkConfig.from_dict(raw)
        except ValueError as exc:
            raise _bad_request(str(exc))

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.get("/diagrams")
    def list_diagrams() -> dict:
        rows = []
        for diagram_id in store.ids():
            try:
                _, version = store.get(diagram_id)
            except KeyError:
                continue
            rows.append({"id": diagram_id, "version": version})
        return {"diagrams": rows}

    @app.get("/diagrams/{diagram_id}")
    def get_diagram(diagram_id: str) -> dict:
        _check_id(diagram_id)
        try:
            doc, version = store.get(diagram_id)
        except KeyError:
            raise HTTPException(status_code=404,
                                detail=f"no diagram {diagram_id!r}")
        return {"id": diagram_id, "version": version, "diagram": doc}

    @app.put("/diagrams/{diagram_id}")
    def put_diagram(diagram_id: str, payload: dict = Body(...),
                    x_base_version: int | None = Header(default=None)) -> dict:
        _check_id(diagram_id)
        if not isinstance(payload, dict):
            raise _bad_request("expected a diagram document")
        unknown = set(payload) - set(SEMANTIC_KEYS) - set(IGNORED_KEYS)
        if unknown:
            raise _bad_request(f"unknown keys: {sorted(unknown)}")
        semantic = {key: payload.get(key) for key in SEMANTIC_KEYS
                    if key in payload}
        try:
            diagram = diagram_from_dict(semantic)
        except (IRSyntaxError, ValidationError) as exc:
            raise _bad_request(str(exc))
        stored = diagram_to_dict(diagram)
        if "layout" in payload:
            stored["layout"] = payload["layout"]
        try:
            version = store.put(diagram_id, stored, x_base_version)
        except StaleVersionError as exc:
            raise HTTPException(
                status_code=409,
                detail={"error": "stale version", "current": exc.current})
        return {"id": diagram_id, "version": version}

    @app.post("/diagrams/{diagram_id}/paths")
    def post_paths(diagram_id: str, payload: dict = Body(default={})) -> dict:
        diagram, _, version = load(diagram_id)
        config = _config_from(payload)
        if diagram.annotation is None:
            raise _bad_request("diagram has no annotation")
        results = []
        if config.strategy is Strategy.RANDOM:
            walks = random_paths(diagram, diagram.annotation.target, config)
            results.append({"feature": None,
                            "paths": [_path_to_dict(p) for p in walks]})
        else:
            for ref in diagram.annotation.important:
                found = find_paths(diagram, diagram.annotation.target, ref,
                                   config)
                results.append({"feature": feature_ref_to_dict(ref),
                                "paths": [_path_to_dict(p) for p in found]})
        return {"id": diagram_id, "version": version, "results": results}

    @app.post("/diagrams/{diagram_id}/modes")
    def post_modes(diagram_id: str, payload: dict = Body(default={})) -> dict:
        diagram, _, version = load(diagram_id)
        config = _config_from(payload)
        dialect = payload.get("dialect", "generic")
        if dialect not in DIALECTS:
            raise _bad_request(f"unknown dialect {dialect!r}")
        try:
            modeset = gmc(diagram, config)
        except ERModesError as exc:
            raise _bad_request(str(exc))
        return {
            "id": diagram_id,
            "version": version,
            "dialect": dialect,
            "modes": emit_modes(modeset, dialect),
            "warnings": list(modeset.warnings),
        }

    @app.post("/diagrams/{diagram_id}/clausespace")
    def post_clausespace(diagram_id: str,
                         payload: dict = Body(default={})) -> dict:
        diagram, _, version = load(diagram_id)
        config = _config_from(payload)
        max_len = payload.get("max_len", 3)
        cap = payload.get("cap", DEFAULT_CAP)
        for name, value in (("max_len", max_len), ("cap", cap)):
            if isinstance(value, bool) or not isinstance(value, int):
                raise _bad_request(f"{name} must be an integer")
        try:
            modeset = gmc(diagram, config)
            result = enumerate_clauses(modeset, max_len, cap)
        except (ERModesError, ValueError) as exc:
            raise _bad_request(str(exc))
        return {
            "id": diagram_id,
            "version": version,
            "report": json.loads(report_to_json(result.report)),
        }

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    return app
