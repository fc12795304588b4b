"""Seeded synthetic-class generator: students type a perturbed variant of the
reference solution as a keystroke stream over a simulated session."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .events import EditEvent, EventLog

DEFAULT_STUDENTS = 22
DEFAULT_EVENTS_PER_STUDENT = 810
DEFAULT_SESSION_MS = 20 * 60_000
DEFAULT_SESSION_START_MS = 1_700_000_000_000

# token swaps a struggling student might plausibly make, keyed by probability
_PERTURBATIONS = [
    (0.20, "25px", ["24px", "30px", "16px", "32px"]),
    (0.15, "350px", ["300px", "400px"]),
    (0.15, "background-color: red", ["background-color: blue", "background-color: crimson"]),
    (0.10, "justify-content: center", ["justify-content: flex-start"]),
    (0.10, "justify-content: space-between", ["justify-content: flex-end"]),
    (0.15, "100px", ["80px", "120px"]),
    (0.10, "500px", ["400px"]),
]

_FILE_ORDER = ("index.html", "styles.css", "script.js")


@dataclass
class SimulationConfig:
    students: int = DEFAULT_STUDENTS
    events_per_student: int = DEFAULT_EVENTS_PER_STUDENT
    seed: int = 0
    session_id: str = "sim"
    session_start_ms: int = DEFAULT_SESSION_START_MS
    session_duration_ms: int = DEFAULT_SESSION_MS
    starter: Mapping[str, str] = field(default_factory=dict)
    reference: Mapping[str, str] = field(default_factory=dict)


def _student_target(rng: random.Random, starter: Mapping[str, str],
                    reference: Mapping[str, str]) -> dict:
    """Per-student goal content: the reference with seeded token swaps."""
    target = {}
    for path, text in reference.items():
        for probability, token, alternatives in _PERTURBATIONS:
            if token in text and rng.random() < probability:
                text = text.replace(token, rng.choice(alternatives))
        prefix = starter.get(path, "")
        if not text.startswith(prefix):
            # starter must stay a typed prefix; fall back to the raw reference
            text = prefix + text
        target[path] = text
    return target


def _typing_chunks(suffixes: list, total_events: int) -> tuple[list, int]:
    """Split per-file suffix text into exactly ``total_events`` edit payloads.

    Returns (chunks, churn) where each chunk is (file_index, chunk_text) and
    churn is how many filler edits are still owed (when there are more events
    than characters to type).
    """
    nonempty = [(i, s) for i, s in enumerate(suffixes) if s]
    total_chars = sum(len(s) for _, s in nonempty)
    if total_chars == 0:
        return [], total_events
    if total_events >= total_chars:
        return [(i, ch) for i, s in nonempty for ch in s], total_events - total_chars

    chunks: list = []
    remaining_events = total_events
    remaining_chars = total_chars
    for position_in_list, (file_index, suffix) in enumerate(nonempty):
        files_left_after = len(nonempty) - position_in_list - 1
        if remaining_events <= 0:
            break
        share = round(remaining_events * len(suffix) / remaining_chars)
        share = max(1, min(share, remaining_events - files_left_after))
        if files_left_after == 0:
            share = remaining_events
        base, extra = divmod(len(suffix), share)
        offset = 0
        for i in range(share):
            size = base + (1 if i < extra else 0)
            chunks.append((file_index, suffix[offset : offset + size]))
            offset += size
        remaining_events -= share
        remaining_chars -= len(suffix)
    return chunks, total_events - len(chunks)


def simulate_class(config: SimulationConfig) -> EventLog:
    """Deterministic synthetic class log; same config -> identical log."""
    log = EventLog()
    paths = [p for p in _FILE_ORDER if p in config.reference]
    paths += sorted(p for p in config.reference if p not in _FILE_ORDER)
    duration = config.session_duration_ms
    k = config.events_per_student

    for index in range(config.students):
        student_id = f"s{index + 1:02d}"
        rng = random.Random(f"{config.seed}:{student_id}")
        target = _student_target(rng, config.starter, config.reference)
        suffixes = [target[p][len(config.starter.get(p, "")) :] for p in paths]
        chunks, churn = _typing_chunks(suffixes, k)

        lengths = {p: len(config.starter.get(p, "")) for p in paths}
        seq = 0
        events: list[EditEvent] = []

        def emit(file_path: str, offset: int, delete_count: int, insert_text: str):
            nonlocal seq
            events.append(EditEvent(
                student_id=student_id,
                session_id=config.session_id,
                file_path=file_path,
                offset=offset,
                delete_count=delete_count,
                insert_text=insert_text,
                timestamp_ms=0,  # assigned below once the count is final
                seq=seq,
            ))
            seq += 1

        for file_index, chunk in chunks:
            path = paths[file_index]
            emit(path, lengths[path], 0, chunk)
            lengths[path] += len(chunk)

        # filler churn when more events were requested than characters exist;
        # an odd tail leaves one stray newline at the end of the last file
        churn_path = paths[-1] if paths else "scratch.txt"
        lengths.setdefault(churn_path, 0)
        for i in range(churn):
            if i % 2 == 0:
                filler = "\n" if i == churn - 1 else "x"
                emit(churn_path, lengths[churn_path], 0, filler)
                lengths[churn_path] += 1
            else:
                emit(churn_path, lengths[churn_path] - 1, 1, "")
                lengths[churn_path] -= 1
        assert len(events) == k, f"planned {len(events)} events, wanted {k}"

        # spread timestamps evenly over the session, preserving order
        timed = [
            EditEvent(
                student_id=e.student_id,
                session_id=e.session_id,
                file_path=e.file_path,
                offset=e.offset,
                delete_count=e.delete_count,
                insert_text=e.insert_text,
                timestamp_ms=config.session_start_ms + ((i + 1) * duration) // k,
                seq=e.seq,
            )
            for i, e in enumerate(events)
        ]
        for event in timed:
            log.append(event)
    return log
