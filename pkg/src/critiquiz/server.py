"""HTTP chat service: sessions over the dialogue engine, pool stats, image
serving, and append-only JSONL transcript logs that rebuild sessions on
restart."""

from __future__ import annotations

import json
import logging
import random
import threading
import uuid
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from .dialogue import (
    ActionFormatError,
    IllegalActionError,
    SessionState,
    handle_action,
    parse_action,
    performance_summary,
    start_session,
)
from .index import FocusUnsatisfiableError, QuizIndex
from .lexicon import VISUAL_CLUSTERS, ConceptLexicon
from .quiz import QuizPool

logger = logging.getLogger(__name__)


def _error(status: int, code: str, message: str, **extra) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message, **extra})


class SessionStore:
    """In-memory sessions backed by per-session JSONL logs under data_dir."""

    def __init__(self, index: QuizIndex, data_dir: str | Path, server_seed: int | None = None):
        self.index = index
        self.dir = Path(data_dir) / "sessions"
        self.dir.mkdir(parents=True, exist_ok=True)
        self._sessions: dict[str, SessionState] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        self._seed_rng = random.Random(server_seed)
        self.rebuild()

    def _log_path(self, session_id: str) -> Path:
        return self.dir / f"{session_id}.jsonl"

    def _append(self, session_id: str, record: dict) -> None:
        with open(self._log_path(session_id), "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
            fh.flush()

    def rebuild(self) -> None:
        """Replay every session log; replay determinism reproduces state."""
        for path in sorted(self.dir.glob("*.jsonl")):
            try:
                with open(path, encoding="utf-8") as fh:
                    lines = [json.loads(line) for line in fh if line.strip()]
                if not lines or lines[0].get("event") != "create":
                    raise ValueError("log does not start with a create record")
                create = lines[0]
                session, _ = start_session(
                    self.index,
                    create["focus"],
                    create["seed"],
                    session_id=create["session_id"],
                )
                for record in lines[1:]:
                    if record.get("event") == "action":
                        handle_action(session, parse_action(record["action"]))
            except Exception:
                logger.exception("could not rebuild session from %s; skipping", path)
                continue
            self._sessions[session.session_id] = session
            self._locks[session.session_id] = threading.Lock()

    def create(self, focus: list[str], seed: int | None):
        if seed is None:
            seed = self._seed_rng.getrandbits(63)
        session_id = uuid.uuid4().hex[:12]
        session, messages = start_session(self.index, focus, seed, session_id=session_id)
        with self._registry_lock:
            self._sessions[session_id] = session
            self._locks[session_id] = threading.Lock()
        self._append(
            session_id,
            {"event": "create", "session_id": session_id, "seed": seed, "focus": list(focus)},
        )
        return session, messages

    def get(self, session_id: str) -> SessionState | None:
        return self._sessions.get(session_id)

    def lock(self, session_id: str) -> threading.Lock:
        return self._locks[session_id]

    def log_action(self, session_id: str, action_dict: dict) -> None:
        self._append(session_id, {"event": "action", "action": action_dict})


def _session_body(session: SessionState, messages) -> dict:
    return {
        "session_id": session.session_id,
        "seed": session.seed,
        "messages": [m.to_dict() for m in messages],
        "state": session.state,
        "score": session.score,
        "legal_actions": session.legal_actions(),
    }


def create_app(
    pool: QuizPool,
    lex: ConceptLexicon,
    images_dir: str | Path | None = None,
    data_dir: str | Path = "data",
    server_seed: int | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    if pool.lexicon_digest != lex.digest():
        raise ValueError(
            "pool was compiled against a different lexicon "
            f"({pool.lexicon_digest[:12]}... vs {lex.digest()[:12]}...)"
        )
    app = FastAPI(title="critiquiz", docs_url=None, redoc_url=None)
    index = QuizIndex(pool, lex)
    store = SessionStore(index, data_dir, server_seed)
    app.state.pool = pool
    app.state.store = store

    @app.exception_handler(Exception)
    async def unhandled(_request: Request, exc: Exception):
        logger.exception("unhandled server error: %s", exc)
        return _error(500, "internal_error", "internal server error")

    @app.post("/v1/sessions", status_code=201)
    async def create_session(request: Request):
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return _error(400, "bad_request", "body must be JSON")
        focus = body.get("focus")
        if not isinstance(focus, list) or not focus:
            return _error(400, "bad_request", "focus must be a non-empty list of cluster names")
        unknown = [c for c in focus if c not in VISUAL_CLUSTERS]
        if unknown:
            return _error(400, "unknown_cluster", f"unknown cluster names: {unknown}")
        seed = body.get("seed")
        if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
            return _error(400, "bad_request", "seed must be an integer")
        try:
            session, messages = store.create(focus, seed)
        except FocusUnsatisfiableError as exc:
            return _error(422, "focus_unsatisfiable", str(exc))
        return JSONResponse(status_code=201, content=_session_body(session, messages))

    @app.post("/v1/sessions/{session_id}/actions")
    async def post_action(session_id: str, request: Request):
        session = store.get(session_id)
        if session is None:
            return _error(404, "unknown_session", f"no session {session_id!r}")
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return _error(400, "bad_request", "body must be JSON")
        try:
            action = parse_action(body)
        except ActionFormatError as exc:
            return _error(400, "bad_action", str(exc))
        with store.lock(session_id):
            try:
                _session, messages = handle_action(session, action)
            except IllegalActionError as exc:
                return _error(
                    409, "illegal_action", str(exc), legal_actions=exc.legal_actions
                )
            store.log_action(session_id, action.to_dict())
        return _session_body(session, messages)

    @app.get("/v1/sessions/{session_id}")
    async def get_session(session_id: str):
        session = store.get(session_id)
        if session is None:
            return _error(404, "unknown_session", f"no session {session_id!r}")
        return {
            "session_id": session.session_id,
            "seed": session.seed,
            "focus": list(session.focus.target_clusters),
            "state": session.state,
            "score": session.score,
            "legal_actions": session.legal_actions(),
            "transcript": session.transcript,
            "reports": session.reports,
            "performance": performance_summary(session).to_dict(),
        }

    @app.get("/v1/pool/stats")
    async def pool_stats():
        counts = pool.cluster_counts()
        return {
            "total": len(pool.quizzes),
            "by_visual_cluster": {c: counts.get(c, 0) for c in VISUAL_CLUSTERS},
            "needs_review": sum(1 for q in pool.quizzes if q.needs_review),
        }

    @app.get("/v1/images/{name}")
    async def get_image(name: str):
        if images_dir is None:
            return _error(404, "no_images_dir", "server has no images directory configured")
        if "/" in name or "\\" in name or ".." in name:
            return _error(400, "bad_request", "image name must be a plain file name")
        path = Path(images_dir) / name
        if not path.is_file():
            return _error(404, "unknown_image", f"no image {name!r}")
        return FileResponse(path)

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
