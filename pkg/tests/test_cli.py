"""Command-line interface: verify, simulate, replay, stats."""

from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from classwatch.cli import main
from conftest import TODO_DIR

SESSION = str(TODO_DIR / "session.json")


@pytest.fixture
def runner():
    return CliRunner()


def simulate_log(runner, tmp_path, students=3, events=60, seed=0):
    out = tmp_path / "class.evlog"
    out.parent.mkdir(parents=True, exist_ok=True)
    result = runner.invoke(main, [
        "simulate", "--config", SESSION, "--students", str(students),
        "--events-per-student", str(events), "--seed", str(seed),
        "--out", str(out),
    ])
    assert result.exit_code == 0, result.output
    return out


# ---------------------------------------------------------------------------
# verify

def test_verify_reference_passes(runner):
    result = runner.invoke(main, ["verify", "--config", SESSION,
                                  "--checkpoint", "cp1"])
    assert result.exit_code == 0, result.output
    assert "pass" in result.output


def test_verify_unknown_checkpoint_is_usage_error(runner):
    result = runner.invoke(main, ["verify", "--config", SESSION,
                                  "--checkpoint", "cp99"])
    assert result.exit_code == 2


def test_verify_strict_counts_unsupported_as_failure(runner):
    lenient = runner.invoke(main, ["verify", "--config", SESSION,
                                   "--checkpoint", "cp2"])
    assert lenient.exit_code == 0, lenient.output
    assert "unsupported" in lenient.output
    strict = runner.invoke(main, ["verify", "--config", SESSION,
                                  "--checkpoint", "cp2", "--strict"])
    assert strict.exit_code == 1


def test_verify_all_checkpoints_by_default(runner):
    result = runner.invoke(main, ["verify", "--config", SESSION])
    assert result.exit_code == 0, result.output
    for task in ("t1_title", "t2_item_style", "t3_hover"):
        assert task in result.output


# ---------------------------------------------------------------------------
# simulate

def test_simulate_is_deterministic(runner, tmp_path):
    a = simulate_log(runner, tmp_path / "a", seed=7)
    b = simulate_log(runner, tmp_path / "b", seed=7)
    assert a.read_bytes() == b.read_bytes()


def test_simulate_honours_budget(runner, tmp_path):
    log = simulate_log(runner, tmp_path, students=4, events=50)
    lines = log.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 200
    students = {json.loads(line)["student_id"] for line in lines}
    assert len(students) == 4


# ---------------------------------------------------------------------------
# replay

def test_replay_writes_progress_matrix(runner, tmp_path):
    log = simulate_log(runner, tmp_path)
    matrix_path = tmp_path / "matrix.json"
    result = runner.invoke(main, [
        "replay", "--config", SESSION, "--log", str(log),
        "--speed", "max", "--out", str(matrix_path),
    ])
    assert result.exit_code == 0, result.output
    matrix = json.loads(matrix_path.read_text(encoding="utf-8"))
    assert set(matrix) == {"ticks", "students", "checkpoints", "cells",
                           "errors"}
    assert len(matrix["students"]) == 3
    assert len(matrix["cells"]) == (len(matrix["ticks"])
                                    * len(matrix["students"])
                                    * len(matrix["checkpoints"]))


def test_replay_missing_log_fails(runner, tmp_path):
    result = runner.invoke(main, [
        "replay", "--config", SESSION, "--log", str(tmp_path / "nope.evlog"),
        "--speed", "max",
    ])
    assert result.exit_code != 0


# ---------------------------------------------------------------------------
# stats

def test_stats_emits_csv_per_tick_and_task(runner, tmp_path):
    log = simulate_log(runner, tmp_path)
    csv_path = tmp_path / "stats.csv"
    result = runner.invoke(main, ["stats", "--config", SESSION,
                                  "--log", str(log), "--out", str(csv_path)])
    assert result.exit_code == 0, result.output
    lines = csv_path.read_text(encoding="utf-8").strip().splitlines()
    assert lines[0] == "t_ms,task_id,passing,class_size"
    rows = [line.split(",") for line in lines[1:]]
    tasks = {row[1] for row in rows}
    assert "t1_title" in tasks
    assert all(row[3] == "3" for row in rows)
    # one row per (tick, task)
    assert len(rows) == len({(row[0], row[1]) for row in rows})
