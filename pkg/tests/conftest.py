"""Shared fixtures: fixture-workspace loaders and event builders."""

from __future__ import annotations

from pathlib import Path

import pytest

from classwatch.documents import DocumentSnapshot, load_starter
from classwatch.events import EditEvent

REPO_ROOT = Path(__file__).resolve().parents[1]
FIXTURES = REPO_ROOT / "fixtures"

TODO_DIR = FIXTURES / "todo"
CAROUSEL_DIR = FIXTURES / "carousel"


def make_event(
    student_id="s01",
    session_id="sess",
    file_path="index.html",
    offset=0,
    delete_count=0,
    insert_text="x",
    timestamp_ms=1_000,
    seq=0,
):
    return EditEvent(
        student_id=student_id,
        session_id=session_id,
        file_path=file_path,
        offset=offset,
        delete_count=delete_count,
        insert_text=insert_text,
        timestamp_ms=timestamp_ms,
        seq=seq,
    )


def reference_snapshot(fixture_dir: Path, student_id="reference") -> DocumentSnapshot:
    return DocumentSnapshot.of(student_id, load_starter(fixture_dir / "reference"), 0)


@pytest.fixture
def todo_reference():
    return reference_snapshot(TODO_DIR)


@pytest.fixture
def carousel_reference():
    return reference_snapshot(CAROUSEL_DIR)


@pytest.fixture
def todo_checkpoints():
    from classwatch.checkpoints import parse_checkpoint_config

    checkpoints, _ = parse_checkpoint_config(
        (TODO_DIR / "checkpoints.json").read_text(encoding="utf-8")
    )
    return checkpoints


@pytest.fixture
def carousel_checkpoints():
    from classwatch.checkpoints import parse_checkpoint_config

    checkpoints, _ = parse_checkpoint_config(
        (CAROUSEL_DIR / "checkpoints.json").read_text(encoding="utf-8")
    )
    return checkpoints
