"""Snapshot reconstruction: fold edit events into per-student file states."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional

from .events import EditEvent, EventLog

MINUTE_MS = 60_000


class OutOfBounds(Exception):
    def __init__(self, offset: int, delete_count: int, length: int):
        super().__init__(
            f"edit at offset {offset} deleting {delete_count} "
            f"exceeds document length {length}"
        )
        self.offset = offset
        self.delete_count = delete_count
        self.length = length


class StreamCorrupt(Exception):
    """An event could not be applied; carries the last good snapshot."""

    def __init__(self, snapshot: "DocumentSnapshot", event: EditEvent, cause: OutOfBounds):
        super().__init__(
            f"event seq {event.seq} for {event.student_id}:{event.file_path} "
            f"failed: {cause}"
        )
        self.snapshot = snapshot
        self.event = event
        self.cause = cause


def content_hash(files: Mapping[str, str]) -> str:
    digest = hashlib.sha256()
    for path in sorted(files):
        digest.update(path.encode("utf-8"))
        digest.update(b"\x00")
        digest.update(files[path].encode("utf-8"))
        digest.update(b"\x01")
    return digest.hexdigest()


@dataclass(frozen=True)
class DocumentSnapshot:
    """A student's full multi-file code state at one instant."""

    student_id: str
    files: dict  # path -> full text
    timestamp_ms: int
    content_hash: str

    @classmethod
    def of(cls, student_id: str, files: Mapping[str, str], timestamp_ms: int):
        files = dict(files)
        return cls(student_id, files, timestamp_ms, content_hash(files))


@dataclass(frozen=True)
class ActiveFileMarker:
    student_id: str
    file_path: str
    timestamp_ms: int


def apply_edit(text: str, offset: int, delete_count: int, insert_text: str) -> str:
    """Splice one edit into a document; indices are Unicode scalar counts."""
    if offset < 0 or delete_count < 0:
        raise OutOfBounds(offset, delete_count, len(text))
    if offset > len(text) or offset + delete_count > len(text):
        raise OutOfBounds(offset, delete_count, len(text))
    return text[:offset] + insert_text + text[offset + delete_count :]


def _apply_events(files: dict, events, student_id: str, base_ts: int) -> dict:
    for event in events:
        current = files.get(event.file_path, "")
        try:
            files[event.file_path] = apply_edit(
                current, event.offset, event.delete_count, event.insert_text
            )
        except OutOfBounds as exc:
            snapshot = DocumentSnapshot.of(student_id, files, base_ts)
            raise StreamCorrupt(snapshot, event, exc) from exc
    return files


def reconstruct_at(
    log: EventLog,
    student_id: str,
    t: int,
    starter: Optional[Mapping[str, str]] = None,
) -> DocumentSnapshot:
    """Fold all of a student's events with timestamp ≤ t over the starter files."""
    files = dict(starter or {})
    events = [e for e in log.for_student(student_id) if e.timestamp_ms <= t]
    _apply_events(files, events, student_id, t)
    return DocumentSnapshot.of(student_id, files, t)


def minute_ticks(session_start_ms: int, session_end_ms: int) -> list[int]:
    """Minute boundaries from session start, inclusive, plus the end instant."""
    if session_start_ms > session_end_ms:
        raise ValueError("session start after end")
    ticks = list(range(session_start_ms, session_end_ms + 1, MINUTE_MS))
    if ticks[-1] != session_end_ms:
        ticks.append(session_end_ms)
    return ticks


def active_file(log: EventLog, student_id: str, t: int) -> Optional[ActiveFileMarker]:
    latest = None
    for event in log.for_student(student_id):
        if event.timestamp_ms > t:
            break
        latest = event
    if latest is None:
        return None
    return ActiveFileMarker(student_id, latest.file_path, latest.timestamp_ms)


class SnapshotCache:
    """Minute-boundary snapshot cache; reconstruction resumes from the
    nearest cached boundary at or before the query time.

    Cached results are keyed per student on (boundary tick, count of events
    applied), so late-arriving events with older timestamps invalidate the
    affected boundaries automatically.
    """

    def __init__(self, log: EventLog, starter: Optional[Mapping[str, str]] = None,
                 session_start_ms: Optional[int] = None):
        self._log = log
        self._starter = dict(starter or {})
        self._session_start_ms = session_start_ms
        # student -> {tick_ms: (event_count, files dict)}
        self._boundaries: dict[str, dict[int, tuple[int, dict]]] = {}

    def _anchor(self) -> Optional[int]:
        if self._session_start_ms is not None:
            return self._session_start_ms
        bounds = self._log.bounds()
        return bounds[0] if bounds else None

    def reconstruct_at(self, student_id: str, t: int) -> DocumentSnapshot:
        anchor = self._anchor()
        events = self._log.for_student(student_id)
        if anchor is None or t < anchor:
            files = dict(self._starter)
            chosen = [e for e in events if e.timestamp_ms <= t]
            _apply_events(files, chosen, student_id, t)
            return DocumentSnapshot.of(student_id, files, t)

        boundary = anchor + ((t - anchor) // MINUTE_MS) * MINUTE_MS
        per_student = self._boundaries.setdefault(student_id, {})
        prefix = [e for e in events if e.timestamp_ms <= boundary]
        cached = per_student.get(boundary)
        if cached is not None and cached[0] == len(prefix):
            files = dict(cached[1])
        else:
            files = dict(self._starter)
            _apply_events(files, prefix, student_id, boundary)
            per_student[boundary] = (len(prefix), dict(files))
        tail = [e for e in events if boundary < e.timestamp_ms <= t]
        _apply_events(files, tail, student_id, t)
        return DocumentSnapshot.of(student_id, files, t)


def load_starter(workspace: Path) -> dict:
    """Mirror a starter workspace directory tree into a path->text map."""
    workspace = Path(workspace)
    starter = {}
    for path in sorted(workspace.rglob("*")):
        if path.is_file():
            starter[path.relative_to(workspace).as_posix()] = path.read_text(
                encoding="utf-8"
            )
    return starter
