"""HTTP chat service.

One conversation = one engine seeded for it + one append-only JSON-lines
file on disk.  Messages within a conversation are strictly serialized;
different conversations run in parallel.  A talker crash or overrun never
surfaces as a 5xx: the engine degrades to its fallback reply and the
request still answers 200 inside the reply budget.

Run with:  uvicorn "talkerbox.service:create_app" --factory
or programmatically through :func:`create_app` / :func:`main`.
"""
from __future__ import annotations

import json
import logging
import os
import threading
import time
import uuid
from dataclasses import dataclass, field, replace
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import __version__
from .bundle import Resources, load_resources, make_engine
from .config import EngineConfig
from .engine import Candidate, Engine
from .state import DialogueState

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Settings: engine config plus the service-only keys, from JSON + env.
# ---------------------------------------------------------------------------


@dataclass
class ServiceSettings:
    host: str = "127.0.0.1"
    port: int = 8000
    data_dir: str = "conversations"
    static_dir: str | None = None
    engine: EngineConfig = field(default_factory=EngineConfig)

    @classmethod
    def from_dict(cls, data: dict, environ=None) -> "ServiceSettings":
        environ = os.environ if environ is None else environ
        data = dict(data)
        engine = EngineConfig.from_dict(data.pop("engine", {}), environ=environ)
        unknown = set(data) - {"host", "port", "data_dir", "static_dir"}
        if unknown:
            raise ValueError(f"unknown service config keys: {sorted(unknown)}")
        merged = dict(data)
        if "TALKERBOX_HOST" in environ:
            merged["host"] = environ["TALKERBOX_HOST"]
        if "TALKERBOX_PORT" in environ:
            merged["port"] = int(environ["TALKERBOX_PORT"])
        if "TALKERBOX_DATA_DIR" in environ:
            merged["data_dir"] = environ["TALKERBOX_DATA_DIR"]
        if "TALKERBOX_STATIC_DIR" in environ:
            merged["static_dir"] = environ["TALKERBOX_STATIC_DIR"]
        if "port" in merged:
            merged["port"] = int(merged["port"])
        return cls(engine=engine, **merged)

    @classmethod
    def from_file(cls, path, environ=None) -> "ServiceSettings":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh), environ=environ)


# ---------------------------------------------------------------------------
# Persistence: one append-only JSONL file per conversation.
# ---------------------------------------------------------------------------


@dataclass
class TurnRecord:
    speaker: str
    text: str
    timestamp: float
    talker_id: str | None = None
    candidates: list[dict] | None = None


@dataclass
class ConversationRecord:
    id: str
    article: str
    seed: int
    created: float
    turns: list[TurnRecord] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "article": self.article,
            "seed": self.seed,
            "created": self.created,
            "turns": [
                {
                    "speaker": t.speaker,
                    "text": t.text,
                    "timestamp": t.timestamp,
                    "talker_id": t.talker_id,
                    "candidates": t.candidates,
                }
                for t in self.turns
            ],
        }


class StorageError(RuntimeError):
    pass


class ConversationStore:
    """Append-only JSON-lines persistence, one file per conversation.

    The first line announces the conversation; every later line is one turn.
    Loading replays the file, so a record survives restarts byte for byte.
    """

    def __init__(self, data_dir):
        self.data_dir = Path(data_dir)
        try:
            self.data_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StorageError(f"cannot create data dir {data_dir}: {exc}") from exc

    def _path(self, conversation_id: str) -> Path:
        return self.data_dir / f"{conversation_id}.jsonl"

    def _append(self, conversation_id: str, row: dict) -> None:
        try:
            with open(self._path(conversation_id), "a", encoding="utf-8") as fh:
                fh.write(json.dumps(row, ensure_ascii=False) + "\n")
                fh.flush()
                os.fsync(fh.fileno())
        except OSError as exc:
            raise StorageError(f"cannot persist conversation: {exc}") from exc

    def create(self, conversation_id: str, article: str, seed: int) -> None:
        self._append(
            conversation_id,
            {
                "event": "created",
                "id": conversation_id,
                "article": article,
                "seed": seed,
                "timestamp": time.time(),
            },
        )

    def append_turn(self, conversation_id: str, turn: TurnRecord) -> None:
        self._append(
            conversation_id,
            {
                "event": "turn",
                "speaker": turn.speaker,
                "text": turn.text,
                "timestamp": turn.timestamp,
                "talker_id": turn.talker_id,
                "candidates": turn.candidates,
            },
        )

    def exists(self, conversation_id: str) -> bool:
        return self._path(conversation_id).exists()

    def load(self, conversation_id: str) -> ConversationRecord | None:
        path = self._path(conversation_id)
        if not path.exists():
            return None
        record: ConversationRecord | None = None
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                row = json.loads(line)
                if row["event"] == "created":
                    record = ConversationRecord(
                        id=row["id"],
                        article=row["article"],
                        seed=int(row["seed"]),
                        created=row["timestamp"],
                    )
                elif row["event"] == "turn" and record is not None:
                    record.turns.append(
                        TurnRecord(
                            speaker=row["speaker"],
                            text=row["text"],
                            timestamp=row["timestamp"],
                            talker_id=row.get("talker_id"),
                            candidates=row.get("candidates"),
                        )
                    )
        return record


# ---------------------------------------------------------------------------
# Conversation sessions: engine + dialogue state behind a per-conversation lock.
# ---------------------------------------------------------------------------


def candidate_wire(cand: Candidate) -> dict:
    return {
        "talker": cand.talker_id,
        "text": cand.text,
        "raw": cand.raw_confidence,
        "calibrated": cand.calibrated_confidence,
        "round": cand.round,
    }


@dataclass
class _Session:
    engine: Engine
    state: DialogueState
    lock: threading.Lock = field(default_factory=threading.Lock)


class ConversationHub:
    """All live conversations: creation, messaging, restore after restart."""

    def __init__(self, resources: Resources, base_config: EngineConfig, store: ConversationStore):
        self.resources = resources
        self.base_config = base_config
        self.store = store
        self._sessions: dict[str, _Session] = {}
        self._registry_lock = threading.Lock()

    def _engine_for_seed(self, seed: int) -> Engine:
        return make_engine(replace(self.base_config, seed=seed), self.resources)

    def create(self, article: str, seed: int | None) -> str:
        if seed is None:
            seed = uuid.uuid4().int % (2**31)
        conversation_id = uuid.uuid4().hex[:12]
        session = _Session(
            engine=self._engine_for_seed(seed),
            state=DialogueState(article=article),
        )
        self.store.create(conversation_id, article, seed)
        with self._registry_lock:
            self._sessions[conversation_id] = session
        return conversation_id

    def _restore(self, conversation_id: str) -> _Session | None:
        """Rebuild a session from disk by replaying its user turns.

        The engine is deterministic for a fixed seed, so replaying the user
        side reproduces the exact internal state the conversation had when
        the process stopped.
        """
        record = self.store.load(conversation_id)
        if record is None:
            return None
        session = _Session(
            engine=self._engine_for_seed(record.seed),
            state=DialogueState(article=record.article),
        )
        for turn in record.turns:
            if turn.speaker == "user":
                session.engine.respond(session.state, turn.text)
        return session

    def _session(self, conversation_id: str) -> _Session | None:
        with self._registry_lock:
            session = self._sessions.get(conversation_id)
        if session is not None:
            return session
        restored = self._restore(conversation_id)
        if restored is None:
            return None
        with self._registry_lock:
            # Another request may have restored it concurrently; keep the first.
            session = self._sessions.setdefault(conversation_id, restored)
        return session

    def message(self, conversation_id: str, text: str) -> dict | None:
        session = self._session(conversation_id)
        if session is None:
            return None
        with session.lock:
            try:
                reply, debug = session.engine.respond(session.state, text)
                ranked = [candidate_wire(c) for c in debug["final"]]
                selected = debug["selected"].talker_id
            except Exception:
                log.exception("responding failed in conversation %s", conversation_id)
                reply = session.engine.config.fallback_reply
                ranked = []
                selected = "fallback"
            now = time.time()
            self.store.append_turn(
                conversation_id, TurnRecord("user", text, now)
            )
            self.store.append_turn(
                conversation_id,
                TurnRecord("bot", reply, time.time(), talker_id=selected, candidates=ranked),
            )
        return {"reply": reply, "talker": selected, "candidates": ranked}

    def record(self, conversation_id: str) -> ConversationRecord | None:
        return self.store.load(conversation_id)


# ---------------------------------------------------------------------------
# HTTP layer.
# ---------------------------------------------------------------------------


def _error(status: int, error: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": error, "detail": detail})


def create_app(settings: ServiceSettings | None = None, resources: Resources | None = None) -> FastAPI:
    settings = settings or ServiceSettings.from_dict({})
    if resources is None:
        resources = load_resources(settings.engine)
    store = ConversationStore(settings.data_dir)
    hub = ConversationHub(resources, settings.engine, store)

    app = FastAPI(title="talkerbox", version=__version__)
    app.state.hub = hub
    app.state.settings = settings

    @app.post("/conversations", status_code=201)
    async def create_conversation(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _error(400, "bad_request", "body must be a JSON object")
        if not isinstance(body, dict):
            return _error(400, "bad_request", "body must be a JSON object")
        article = body.get("article", "")
        if not isinstance(article, str) or not article.strip():
            return _error(400, "empty_article", "a non-empty article is required")
        seed = body.get("seed")
        if seed is not None and not isinstance(seed, int):
            return _error(400, "bad_seed", "seed must be an integer")
        try:
            conversation_id = hub.create(article, seed)
        except StorageError as exc:
            return _error(503, "storage_failure", str(exc))
        return {"id": conversation_id}

    @app.post("/conversations/{conversation_id}/messages")
    async def post_message(conversation_id: str, request: Request):
        try:
            body = await request.json()
        except Exception:
            return _error(400, "bad_request", "body must be a JSON object")
        text = body.get("text") if isinstance(body, dict) else None
        if not isinstance(text, str) or not text.strip():
            return _error(400, "empty_message", "a non-empty text is required")
        try:
            result = hub.message(conversation_id, text)
        except StorageError as exc:
            return _error(503, "storage_failure", str(exc))
        if result is None:
            return _error(404, "unknown_conversation", f"no conversation {conversation_id!r}")
        return result

    @app.get("/conversations/{conversation_id}")
    async def get_conversation(conversation_id: str):
        record = hub.record(conversation_id)
        if record is None:
            return _error(404, "unknown_conversation", f"no conversation {conversation_id!r}")
        return record.to_dict()

    @app.get("/health")
    async def health():
        return {
            "status": "ok",
            "version": __version__,
            "talkers": [t for t in settings.engine.priority_order],
            "budget_seconds": settings.engine.budget_seconds,
        }

    static_dir = settings.static_dir
    if static_dir and Path(static_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


def main(settings: ServiceSettings | None = None) -> None:
    import uvicorn

    settings = settings or ServiceSettings.from_dict({})
    uvicorn.run(create_app(settings), host=settings.host, port=settings.port)


if __name__ == "__main__":
    main()
