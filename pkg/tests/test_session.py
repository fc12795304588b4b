"""Session engine: config loading, ingestion, ticks, payloads, replay."""

from __future__ import annotations

import json

import pytest

from classwatch.documents import MINUTE_MS
from classwatch.events import SPEED_MAX
from classwatch.session import (
    RATE_LIMIT_EVENTS,
    BeforeSession,
    RateLimited,
    SessionConfig,
    SessionEngine,
    SessionError,
    UnknownStudent,
)
from conftest import TODO_DIR, make_event


@pytest.fixture
def engine():
    return SessionEngine(SessionConfig.load(TODO_DIR / "session.json"))


def event_records(events):
    return [json.loads(e.to_json()) for e in events]


def typed_page_events(student_id="s01", start=1_000_000):
    html = '<h1 id="pageTitle">Todo List</h1>'
    return [
        make_event(student_id=student_id, seq=i, offset=i,
                   insert_text=ch, timestamp_ms=start + i * 100)
        for i, ch in enumerate(html)
    ]


# ---------------------------------------------------------------------------
# config

def test_session_config_loads_relative_paths():
    config = SessionConfig.load(TODO_DIR / "session.json")
    assert config.session_id == "todo-demo"
    assert config.starter_path.is_dir()
    assert config.reference_path.is_dir()
    assert config.checkpoints_path.is_file()


def test_session_config_rejects_missing_paths(tmp_path):
    bad = tmp_path / "session.json"
    bad.write_text(json.dumps({
        "session_id": "x", "starter_path": "nope", "reference_path": "nope",
        "checkpoints_path": "nope.json",
    }), encoding="utf-8")
    with pytest.raises(SessionError, match="does not exist"):
        SessionConfig.load(bad)


def test_session_config_rejects_bad_mode(tmp_path):
    (tmp_path / "starter").mkdir()
    (tmp_path / "reference").mkdir()
    (tmp_path / "checkpoints.json").write_text("[]", encoding="utf-8")
    bad = tmp_path / "session.json"
    bad.write_text(json.dumps({
        "session_id": "x", "starter_path": "starter",
        "reference_path": "reference", "checkpoints_path": "checkpoints.json",
        "mode": "timetravel",
    }), encoding="utf-8")
    with pytest.raises(SessionError, match="mode"):
        SessionConfig.load(bad)


# ---------------------------------------------------------------------------
# ingestion

def test_ingest_returns_per_record_verdicts(engine):
    records = event_records([
        make_event(seq=0),
        make_event(seq=0),                     # duplicate seq -> rejected
        make_event(seq=1, insert_text="", delete_count=0),  # no-op
        make_event(seq=2, file_path="../up"),  # unsafe path
    ])
    verdicts = engine.ingest(records)
    assert [v["accepted"] for v in verdicts] == [True, False, False, False]
    assert verdicts[1]["error"] == "RejectSeq"
    assert verdicts[2]["error"] == "RejectNoOp"
    assert verdicts[3]["error"] == "RejectPath"
    assert len(engine.log) == 1


def test_ingest_shape_error_propagates(engine):
    with pytest.raises(ValueError):
        engine.ingest([{"student_id": "s01"}])


def test_rate_limit_rejects_flood(engine):
    engine._rate_check("s01", 0)
    window = engine._rate["s01"]
    window.extend([0] * RATE_LIMIT_EVENTS)
    with pytest.raises(RateLimited):
        engine._rate_check("s01", 1)
    # other students are unaffected
    engine._rate_check("s02", 1)


def test_subscribers_receive_edit_and_tick_updates(engine):
    q = engine.subscribe()
    engine.ingest(event_records([make_event(seq=0, timestamp_ms=1_000_000)]))
    kinds = []
    while not q.empty():
        kinds.append(q.get()["kind"])
    assert "StudentEdited" in kinds
    assert "TickReady" in kinds
    assert "StatsChanged" in kinds
    engine.unsubscribe(q)
    engine.ingest(event_records([make_event(seq=1, timestamp_ms=1_000_100)]))
    assert q.empty()


def test_tick_announced_once(engine):
    q = engine.subscribe()
    engine.ingest(event_records([make_event(seq=0, timestamp_ms=1_000_000)]))
    engine.ingest(event_records([make_event(seq=1, timestamp_ms=1_000_100)]))
    ticks = [u["t_ms"] for u in iter_queue(q) if u["kind"] == "TickReady"]
    assert ticks == sorted(set(ticks))


def iter_queue(q):
    out = []
    while not q.empty():
        out.append(q.get())
    return out


# ---------------------------------------------------------------------------
# ticks and payloads

def test_ticks_span_ingested_range(engine):
    engine.ingest(event_records([
        make_event(seq=0, timestamp_ms=1_000_000),
        make_event(seq=1, timestamp_ms=1_000_000 + 2 * MINUTE_MS + 500),
    ]))
    assert engine.ticks() == [
        1_000_000, 1_000_000 + MINUTE_MS, 1_000_000 + 2 * MINUTE_MS,
        1_000_000 + 2 * MINUTE_MS + 500,
    ]


def test_progress_payload_empty_session(engine):
    assert engine.progress_payload() == {
        "t_ms": None, "students": {}, "checkpoints": [],
    }


def test_progress_payload_snaps_to_latest_tick(engine):
    engine.ingest(event_records(typed_page_events()))
    # Ticks here are the session start and end instants; a query between
    # them snaps down to the start, and a later query snaps to the end.
    payload = engine.progress_payload(1_000_100)
    assert payload["t_ms"] == 1_000_000
    later = engine.progress_payload(1_000_000 + MINUTE_MS)
    assert later["t_ms"] == engine.session_end_ms
    assert set(later["students"]) == {"s01"}
    assert later["checkpoints"] == ["cp1", "cp2", "cp3"]


def test_progress_payload_before_session_is_error(engine):
    engine.ingest(event_records([make_event(seq=0, timestamp_ms=1_000_000)]))
    with pytest.raises(BeforeSession):
        engine.progress_payload(999_999)


def test_snapshot_payload_and_unknown_student(engine):
    engine.ingest(event_records(typed_page_events()))
    payload = engine.snapshot_payload("s01")
    assert 'id="pageTitle"' in payload["files"]["index.html"]
    assert payload["active_file"]["file_path"] == "index.html"
    with pytest.raises(UnknownStudent):
        engine.snapshot_payload("s99")


def test_stats_payload_shape(engine):
    engine.ingest(event_records(typed_page_events()))
    payload = engine.stats_payload()
    assert payload["class_size"] == 1
    assert set(payload["checkpoint_summary"]) == {"cp1", "cp2", "cp3"}
    assert payload["task_pass_counts"]["t1_title"] in (0, 1)


def test_inspect_payload_distribution_and_clusters(engine):
    engine.ingest(event_records(typed_page_events()))
    dist = engine.inspect_payload("t1_title", "#pageTitle", prop="font-size")
    assert dist["kind"] == "distribution"
    assert sum(len(v) for v in dist["buckets"].values()) == 1
    clusters = engine.inspect_payload("t1_title", "#pageTitle")
    assert clusters["kind"] == "clusters"
    assert sum(len(c["members"]) for c in clusters["clusters"]) == 1


def test_verify_payload_against_reference(engine):
    report = engine.verify_payload("cp1")
    assert report["passed"]
    with pytest.raises(SessionError, match="unknown checkpoint"):
        engine.verify_payload("cp99")


def test_suggest_payload_uses_heuristic_provider(engine):
    payload = engine.suggest_payload("Set the font size of #pageTitle to 25px")
    assert payload["provider"] == "heuristic"
    assert any(a["kind"] == "exists" for a in payload["assertions"])


# ---------------------------------------------------------------------------
# replay

def test_replay_reingests_log(engine, tmp_path):
    source = tmp_path / "class.evlog"
    lines = [e.to_json() for e in typed_page_events()]
    source.write_text("\n".join(lines) + "\n", encoding="utf-8")
    engine.start_replay(source, SPEED_MAX)
    engine.wait_replay(timeout_s=30)
    assert len(engine.log) == len(lines)
    status = engine.replay_status()
    assert not status["active"]
    assert status["cursor_ms"] == engine.session_end_ms


def test_second_concurrent_replay_rejected(engine, tmp_path):
    source = tmp_path / "class.evlog"
    events = typed_page_events()
    source.write_text("\n".join(e.to_json() for e in events) + "\n",
                      encoding="utf-8")
    engine._replay_active = True
    try:
        with pytest.raises(SessionError, match="already running"):
            engine.start_replay(source, SPEED_MAX)
    finally:
        engine._replay_active = False
