"""Keystroke edit-event log: validation, ordering, persistence, merge, replay."""

from __future__ import annotations

import json
import time
from bisect import bisect_right
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Iterator, Optional

EVLOG_EXTENSION = ".evlog"

#: speed_multiplier value meaning "deliver as fast as possible"
SPEED_MAX = float("inf")

_EVENT_FIELDS = (
    "student_id",
    "session_id",
    "file_path",
    "offset",
    "delete_count",
    "insert_text",
    "timestamp_ms",
    "seq",
)


class EventError(Exception):
    """Base class for event validation failures; names the offending field."""

    field_name = ""


class RejectNoOp(EventError):
    field_name = "insert_text/delete_count"


class RejectPath(EventError):
    field_name = "file_path"


class RejectSeq(EventError):
    field_name = "seq"


class StorageError(Exception):
    pass


class FormatError(Exception):
    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class ConflictError(Exception):
    pass


class SinkError(Exception):
    """Raised by a replay sink to abort delivery."""


@dataclass(frozen=True, order=False)
class EditEvent:
    """One keystroke-level edit; offsets count Unicode scalars from the start."""

    student_id: str
    session_id: str
    file_path: str
    offset: int
    delete_count: int
    insert_text: str
    timestamp_ms: int
    seq: int

    @property
    def order_key(self) -> tuple:
        return (self.timestamp_ms, self.student_id, self.session_id, self.seq)

    @property
    def stream_key(self) -> tuple:
        return (self.student_id, self.session_id)

    def to_json(self) -> str:
        return json.dumps(
            {name: getattr(self, name) for name in _EVENT_FIELDS},
            ensure_ascii=False,
        )

    @classmethod
    def from_dict(cls, record: dict) -> "EditEvent":
        missing = [name for name in _EVENT_FIELDS if name not in record]
        if missing:
            raise ValueError(f"missing fields: {', '.join(missing)}")
        extra = [name for name in record if name not in _EVENT_FIELDS]
        if extra:
            raise ValueError(f"unknown fields: {', '.join(extra)}")
        return cls(**{name: record[name] for name in _EVENT_FIELDS})


def _path_is_safe(file_path: str) -> bool:
    if not file_path or file_path.startswith("/") or "\\" in file_path:
        return False
    # Windows drive prefixes ("C:...") are absolute too
    if ":" in file_path.split("/", 1)[0]:
        return False
    segments = file_path.split("/")
    return all(seg not in ("", "..") for seg in segments)


def validate_event(event: EditEvent, stream_state: dict) -> EditEvent:
    """Check invariants against last-seen seq per (student, session) stream.

    Mutates ``stream_state`` on acceptance so callers can validate a stream
    by threading one dict through successive calls.
    """
    if event.delete_count == 0 and event.insert_text == "":
        raise RejectNoOp(f"no-op edit from {event.student_id} (seq {event.seq})")
    if not event.student_id or not event.session_id:
        raise RejectPath("empty student_id or session_id")
    if not _path_is_safe(event.file_path):
        raise RejectPath(f"unsafe file_path {event.file_path!r}")
    if event.offset < 0 or event.delete_count < 0 or event.seq < 0:
        raise RejectSeq(f"negative offset/delete_count/seq in seq {event.seq}")
    last = stream_state.get(event.stream_key)
    if last is not None and event.seq <= last:
        raise RejectSeq(
            f"seq {event.seq} not greater than last seen {last} "
            f"for stream {event.stream_key}"
        )
    stream_state[event.stream_key] = event.seq
    return event


class EventLog:
    """Append-only, globally ordered edit-event log.

    Events are kept sorted by (timestamp_ms, student_id, session_id, seq) so
    iteration always yields the global order regardless of arrival order.
    An optional backing file receives one JSON object per line at append time;
    order on disk is append order, re-imposed at load.
    """

    def __init__(self, path: Optional[Path] = None):
        self._events: list[EditEvent] = []
        self._keys: list[tuple] = []
        self._path = Path(path) if path is not None else None

    def __len__(self) -> int:
        return len(self._events)

    def __iter__(self) -> Iterator[EditEvent]:
        return iter(list(self._events))

    def __eq__(self, other) -> bool:
        if not isinstance(other, EventLog):
            return NotImplemented
        return self._events == other._events

    @property
    def events(self) -> list[EditEvent]:
        return list(self._events)

    def append(self, event: EditEvent) -> "EventLog":
        position = self._insert_position(event)
        if self._path is not None:
            try:
                with self._path.open("a", encoding="utf-8") as handle:
                    handle.write(event.to_json() + "\n")
            except OSError as exc:
                raise StorageError(str(exc)) from exc
        self._keys.insert(position, event.order_key)
        self._events.insert(position, event)
        return self

    def _insert_position(self, event: EditEvent) -> int:
        # stable for equal keys: insert after existing equals
        return bisect_right(self._keys, event.order_key)

    def students(self) -> list[str]:
        return sorted({e.student_id for e in self._events})

    def for_student(self, student_id: str) -> list[EditEvent]:
        return [e for e in self._events if e.student_id == student_id]

    def bounds(self) -> Optional[tuple[int, int]]:
        if not self._events:
            return None
        return (self._events[0].timestamp_ms, self._events[-1].timestamp_ms)

    def persist(self, path: Path) -> None:
        try:
            with Path(path).open("w", encoding="utf-8") as handle:
                for event in self._events:
                    handle.write(event.to_json() + "\n")
        except OSError as exc:
            raise StorageError(str(exc)) from exc


def load_log(source) -> EventLog:
    """Load an ``.evlog`` stream (path or iterable of lines).

    Raises FormatError with the 1-based line number of the first bad record.
    """
    if isinstance(source, (str, Path)):
        with Path(source).open("r", encoding="utf-8") as handle:
            return load_log(handle)
    log = EventLog()
    for line_number, line in enumerate(source, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
            if not isinstance(record, dict):
                raise ValueError("record is not an object")
            event = EditEvent.from_dict(record)
        except (ValueError, TypeError) as exc:
            raise FormatError(line_number, str(exc)) from exc
        log.append(event)
    return log


def merge_logs(logs: Iterable[EventLog]) -> EventLog:
    """Multiset union under the global ordering key.

    Two events sharing the full ordering key cannot be ordered
    deterministically, so that is a ConflictError.
    """
    merged = EventLog()
    seen: set[tuple] = set()
    events = sorted(
        (e for log in logs for e in log), key=lambda e: e.order_key
    )
    for event in events:
        if event.order_key in seen:
            raise ConflictError(f"duplicate ordering key {event.order_key}")
        seen.add(event.order_key)
        merged.append(event)
    return merged


@dataclass
class ReplayClock:
    """Virtual clock for chronological replay.

    speed_multiplier scales real time (2.0 = twice as fast); SPEED_MAX means
    deliver with no delay at all.
    """

    speed_multiplier: float = 1.0
    cursor_ms: int = 0

    def __post_init__(self):
        if self.speed_multiplier <= 0:
            raise ValueError("speed_multiplier must be positive")

    def advance(self, to_ms: int, sleep: Callable[[float], None] = time.sleep) -> None:
        if to_ms <= self.cursor_ms:
            return
        if self.cursor_ms and self.speed_multiplier != SPEED_MAX:
            sleep((to_ms - self.cursor_ms) / 1000.0 / self.speed_multiplier)
        self.cursor_ms = to_ms


@dataclass
class ReplayReport:
    events_delivered: int = 0


def replay(
    log: EventLog,
    clock: ReplayClock,
    sink: Callable[[EditEvent], None],
    sleep: Callable[[float], None] = time.sleep,
) -> ReplayReport:
    """Deliver every event once, in order, pacing by the clock."""
    report = ReplayReport()
    for event in log:
        clock.advance(event.timestamp_ms, sleep=sleep)
        try:
            sink(event)
        except SinkError:
            return report
        report.events_delivered += 1
    return report
