"""Session engine: wires the log, store, evaluator, and inspector together
and serves as the single in-process backend the API maps onto."""

from __future__ import annotations

import hashlib
import json
import os
import queue
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .checkpoints import (
    HeuristicSuggestionProvider,
    RemoteSuggestionProvider,
    SUGGEST_URL_ENV,
    SuggestionRequest,
    parse_checkpoint_config,
    suggest_assertions,
    verify_checkpoint,
)
from .documents import (
    DocumentSnapshot,
    SnapshotCache,
    active_file,
    load_starter,
    minute_ticks,
)
from .events import (
    EditEvent,
    EventError,
    EventLog,
    ReplayClock,
    load_log,
    replay,
    validate_event,
)
from .evaluator import (
    MemoizingRunner,
    ProgressMatrix,
    StaticRunner,
    build_progress_matrix,
    classroom_stats,
)
from .inspector import inspect_property, preview_clusters

TOKEN_ENV = "SPARK_TOKEN"
TOKEN_HEADER = "X-Spark-Token"

# ingestion rate limit per student_id: generous for classroom scale
RATE_LIMIT_EVENTS = 5000
RATE_LIMIT_WINDOW_MS = 10_000


class SessionError(Exception):
    pass


class UnknownStudent(SessionError):
    pass


class BeforeSession(SessionError):
    pass


class RateLimited(SessionError):
    pass


@dataclass
class SessionConfig:
    session_id: str
    starter_path: Path
    reference_path: Path
    checkpoints_path: Path
    tick_interval_ms: int = 60_000
    mode: str = "live"  # live | replay

    @classmethod
    def load(cls, path) -> "SessionConfig":
        path = Path(path)
        data = json.loads(path.read_text(encoding="utf-8"))
        base = path.parent
        config = cls(
            session_id=data["session_id"],
            starter_path=base / data["starter_path"],
            reference_path=base / data["reference_path"],
            checkpoints_path=base / data["checkpoints_path"],
            tick_interval_ms=int(data.get("tick_interval_ms", 60_000)),
            mode=data.get("mode", "live"),
        )
        for attr in ("starter_path", "reference_path", "checkpoints_path"):
            if not getattr(config, attr).exists():
                raise SessionError(f"{attr} does not exist: {getattr(config, attr)}")
        if config.mode not in ("live", "replay"):
            raise SessionError(f"mode must be live or replay, got {config.mode!r}")
        return config


def _payload_hash(payload: dict) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class SessionEngine:
    """One classroom session: ingestion, ticks, progress, inspection, replay."""

    def __init__(self, config: SessionConfig, suggestion_provider=None):
        self.config = config
        self.starter = load_starter(config.starter_path)
        reference_files = load_starter(config.reference_path)
        self.reference = DocumentSnapshot.of("reference", reference_files, 0)
        self.checkpoints, _ = parse_checkpoint_config(
            config.checkpoints_path.read_text(encoding="utf-8")
        )
        self.log = EventLog()
        self.runner = MemoizingRunner(StaticRunner())
        self._stream_state: dict = {}
        self._cache: Optional[SnapshotCache] = None
        self._ingest_lock = threading.Lock()
        self._subscribers: list[queue.Queue] = []
        self._announced_ticks: set[int] = set()
        self._rate: dict[str, list] = {}
        self._replay_thread: Optional[threading.Thread] = None
        self._replay_cursor_ms: int = 0
        self._replay_active = False
        if suggestion_provider is None and os.environ.get(SUGGEST_URL_ENV):
            suggestion_provider = RemoteSuggestionProvider()
        self.suggestion_provider = suggestion_provider or HeuristicSuggestionProvider()

    # -- live updates -------------------------------------------------------

    def subscribe(self) -> queue.Queue:
        q: queue.Queue = queue.Queue()
        self._subscribers.append(q)
        return q

    def unsubscribe(self, q: queue.Queue) -> None:
        if q in self._subscribers:
            self._subscribers.remove(q)

    def _broadcast(self, update: dict) -> None:
        for q in list(self._subscribers):
            q.put(update)

    # -- ingestion ----------------------------------------------------------

    def _rate_check(self, student_id: str, now_ms: int) -> None:
        window = self._rate.setdefault(student_id, [])
        cutoff = now_ms - RATE_LIMIT_WINDOW_MS
        while window and window[0] < cutoff:
            window.pop(0)
        if len(window) >= RATE_LIMIT_EVENTS:
            raise RateLimited(f"student {student_id} exceeded ingest rate limit")
        window.append(now_ms)

    def ingest(self, records: list) -> list:
        """Validate and append a batch; returns one verdict per record."""
        verdicts = []
        with self._ingest_lock:
            for record in records:
                event = EditEvent.from_dict(record)  # shape errors -> caller's 400
                try:
                    self._rate_check(event.student_id, int(time.time() * 1000))
                    validate_event(event, self._stream_state)
                except EventError as exc:
                    verdicts.append({
                        "accepted": False,
                        "error": type(exc).__name__,
                        "detail": str(exc),
                    })
                    continue
                except RateLimited as exc:
                    verdicts.append({
                        "accepted": False, "error": "RateLimited", "detail": str(exc),
                    })
                    continue
                # late events invalidate affected cache boundaries implicitly:
                # SnapshotCache keys each boundary on its event prefix length
                self.log.append(event)
                verdicts.append({"accepted": True})
                self._broadcast({
                    "kind": "StudentEdited",
                    "student_id": event.student_id,
                    "file_path": event.file_path,
                    "t_ms": event.timestamp_ms,
                })
        self.refresh_ticks()
        return verdicts

    # -- time and ticks -----------------------------------------------------

    @property
    def session_start_ms(self) -> Optional[int]:
        bounds = self.log.bounds()
        return bounds[0] if bounds else None

    @property
    def session_end_ms(self) -> Optional[int]:
        bounds = self.log.bounds()
        return bounds[1] if bounds else None

    def ticks(self, up_to_ms: Optional[int] = None) -> list:
        start = self.session_start_ms
        if start is None:
            return []
        end = self.session_end_ms if up_to_ms is None else min(
            up_to_ms, self.session_end_ms
        )
        if end < start:
            return []
        return minute_ticks(start, end)

    def _snapshot_cache(self) -> SnapshotCache:
        if self._cache is None:
            self._cache = SnapshotCache(
                self.log, self.starter, session_start_ms=self.session_start_ms
            )
        return self._cache

    def refresh_ticks(self) -> list:
        """Announce any newly completed minute ticks; returns the new ones."""
        fresh = []
        for t in self.ticks():
            if t in self._announced_ticks:
                continue
            self._announced_ticks.add(t)
            payload = self.progress_payload(t)
            fresh.append(t)
            self._broadcast({
                "kind": "TickReady", "t_ms": t, "hash": _payload_hash(payload),
            })
            self._broadcast({"kind": "StatsChanged", "t_ms": t})
        return fresh

    # -- progress -----------------------------------------------------------

    def matrix(self, ticks: Optional[list] = None) -> ProgressMatrix:
        ticks = self.ticks() if ticks is None else ticks
        return build_progress_matrix(
            self.log, self.checkpoints, ticks, self.runner,
            starter=self.starter, cache=self._snapshot_cache(),
        )

    def latest_tick_at(self, t: int) -> int:
        start = self.session_start_ms
        if start is None or t < start:
            raise BeforeSession(f"t={t} precedes the session")
        candidates = [tick for tick in self.ticks() if tick <= t]
        return candidates[-1] if candidates else start

    def progress_payload(self, t: Optional[int] = None) -> dict:
        """Matrix slice at the latest tick <= t (or live 'now')."""
        start = self.session_start_ms
        if start is None:
            return {"t_ms": None, "students": {}, "checkpoints": []}
        if t is None:
            at = self.session_end_ms
        else:
            at = self.latest_tick_at(t)
        matrix = self.matrix(ticks=[at])
        slice_ = matrix.slice_at(at)
        return {
            "t_ms": at,
            "checkpoints": matrix.checkpoint_ids,
            "students": {
                student: {
                    cp_id: cell.to_dict() for cp_id, cell in per_cp.items()
                }
                for student, per_cp in slice_.items()
            },
        }

    def stats_payload(self, t: Optional[int] = None) -> dict:
        start = self.session_start_ms
        if start is None:
            return {"t_ms": None, "class_size": 0, "task_pass_counts": {},
                    "checkpoint_summary": {}}
        at = self.session_end_ms if t is None else self.latest_tick_at(t)
        matrix = self.matrix(ticks=[at])
        stats = classroom_stats(matrix, at)
        payload = stats.to_dict()
        payload["t_ms"] = at
        return payload

    def snapshot_payload(self, student_id: str, t: Optional[int] = None) -> dict:
        if student_id not in self.log.students():
            raise UnknownStudent(student_id)
        at = t if t is not None else (self.session_end_ms or 0)
        snapshot = self._snapshot_cache().reconstruct_at(student_id, at)
        marker = active_file(self.log, student_id, at)
        return {
            "student_id": student_id,
            "t_ms": at,
            "files": snapshot.files,
            "content_hash": snapshot.content_hash,
            "active_file": None if marker is None else {
                "file_path": marker.file_path, "t_ms": marker.timestamp_ms,
            },
        }

    # -- inspection ---------------------------------------------------------

    def find_task(self, task_id: str):
        for checkpoint in self.checkpoints:
            task = checkpoint.task(task_id)
            if task is not None:
                return checkpoint, task
        return None, None

    def class_snapshots(self, t: Optional[int] = None) -> dict:
        at = t if t is not None else (self.session_end_ms or 0)
        cache = self._snapshot_cache()
        return {
            student: cache.reconstruct_at(student, at)
            for student in self.log.students()
        }

    def inspect_payload(self, task_id: str, selector: str,
                        prop: Optional[str] = None,
                        t: Optional[int] = None) -> dict:
        _, task = self.find_task(task_id)
        snapshots = self.class_snapshots(t)
        if prop:
            distribution = inspect_property(snapshots, selector, prop)
            return {"kind": "distribution", **distribution.to_dict()}
        clusters = preview_clusters(snapshots, task, selector, runner=self.runner)
        return {"kind": "clusters", **clusters.to_dict()}

    # -- checkpoints --------------------------------------------------------

    def verify_payload(self, checkpoint_id: str) -> dict:
        for checkpoint in self.checkpoints:
            if checkpoint.id == checkpoint_id:
                report = verify_checkpoint(checkpoint, self.reference, self.runner)
                return report.to_dict()
        raise SessionError(f"unknown checkpoint {checkpoint_id!r}")

    def verify_all(self) -> list:
        return [
            verify_checkpoint(cp, self.reference, self.runner).to_dict()
            for cp in self.checkpoints
        ]

    def suggest_payload(self, description: str) -> dict:
        request = SuggestionRequest(description=description, reference=self.reference)
        result = suggest_assertions(request, self.suggestion_provider)
        return result.to_dict()

    # -- replay -------------------------------------------------------------

    def start_replay(self, log_path, speed: float) -> None:
        if self._replay_active:
            raise SessionError("a replay is already running")
        source = load_log(log_path)
        clock = ReplayClock(speed_multiplier=speed)
        self._replay_active = True

        def sink(event: EditEvent) -> None:
            self._replay_cursor_ms = event.timestamp_ms
            self.ingest([json.loads(event.to_json())])

        def run() -> None:
            try:
                replay(source, clock, sink)
            finally:
                self._replay_active = False

        self._replay_thread = threading.Thread(target=run, daemon=True)
        self._replay_thread.start()

    def replay_status(self) -> dict:
        return {
            "active": self._replay_active,
            "cursor_ms": self._replay_cursor_ms,
        }

    def wait_replay(self, timeout_s: float = 60.0) -> None:
        if self._replay_thread is not None:
            self._replay_thread.join(timeout=timeout_s)
