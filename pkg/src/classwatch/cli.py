"""Operator entry points: serve, replay, verify, simulate, stats."""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import click

from .documents import load_starter
from .events import SPEED_MAX, load_log
from .session import SessionConfig, SessionEngine
from .simulate import SimulationConfig, simulate_class

_REPO_ROOT = Path(__file__).resolve().parents[2]
DEFAULT_SESSION = _REPO_ROOT / "fixtures" / "todo" / "session.json"


def _speed(value: str) -> float:
    if value == "max":
        return SPEED_MAX
    speed = float(value)
    if speed <= 0:
        raise click.UsageError("--speed must be positive or 'max'")
    return speed


def _engine(config_path: Path) -> SessionEngine:
    return SessionEngine(SessionConfig.load(config_path))


@click.group()
def main():
    """Classroom monitoring engine for web-programming exercises."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), required=True,
              help="Session config file.")
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(config_path, port, host):
    """Run the monitoring service for a session."""
    import uvicorn

    from .server import create_app

    engine = _engine(Path(config_path))
    app = create_app(engine)
    click.echo(f"serving session {engine.config.session_id} on {host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command()
@click.option("--log", "log_path", type=click.Path(exists=True), required=True)
@click.option("--speed", default="max", show_default=True,
              help="Replay speed multiplier, or 'max'.")
@click.option("--config", "config_path", type=click.Path(exists=True), required=True)
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Write the final progress matrix JSON here.")
def replay(log_path, speed, config_path, out_path):
    """Replay a recorded log through the evaluator."""
    engine = _engine(Path(config_path))
    engine.start_replay(log_path, _speed(speed))
    engine.wait_replay(timeout_s=3600)
    matrix = engine.matrix()
    click.echo(
        f"replayed {len(engine.log)} events over {len(matrix.ticks)} ticks "
        f"for {len(matrix.students)} students"
    )
    if out_path:
        Path(out_path).write_text(
            json.dumps(matrix.to_dict(), indent=2), encoding="utf-8"
        )
        click.echo(f"matrix written to {out_path}")


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), required=True)
@click.option("--checkpoint", "checkpoint_id", default=None,
              help="Verify a single checkpoint by id.")
@click.option("--strict", is_flag=True,
              help="Count unsupported tasks as failures for the exit code.")
def verify(config_path, checkpoint_id, strict):
    """Verify checkpoints against the configured reference workspace."""
    engine = _engine(Path(config_path))
    if checkpoint_id is not None:
        known = {cp.id for cp in engine.checkpoints}
        if checkpoint_id not in known:
            raise click.UsageError(f"unknown checkpoint {checkpoint_id!r}")
        reports = [engine.verify_payload(checkpoint_id)]
    else:
        reports = engine.verify_all()
    failed = False
    for report in reports:
        click.echo(f"checkpoint {report['checkpoint_id']}:")
        for task in report["tasks"]:
            line = f"  {task['task_id']}: {task['outcome']}"
            if task["detail"]:
                line += f" ({task['detail']})"
            click.echo(line)
            if task["outcome"] == "fail":
                failed = True
            if strict and task["outcome"] != "pass":
                failed = True
    sys.exit(1 if failed else 0)


@main.command()
@click.option("--students", type=int, default=22, show_default=True)
@click.option("--events-per-student", type=int, default=810, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=str(DEFAULT_SESSION), show_default=True,
              help="Session whose starter/reference the simulated class types.")
def simulate(students, events_per_student, seed, out_path, config_path):
    """Generate a deterministic synthetic class log."""
    session = SessionConfig.load(Path(config_path))
    log = simulate_class(SimulationConfig(
        students=students,
        events_per_student=events_per_student,
        seed=seed,
        session_id=session.session_id,
        starter=load_starter(session.starter_path),
        reference=load_starter(session.reference_path),
    ))
    log.persist(Path(out_path))
    click.echo(f"wrote {len(log)} events for {students} students to {out_path}")


@main.command()
@click.option("--log", "log_path", type=click.Path(exists=True), required=True)
@click.option("--config", "config_path", type=click.Path(exists=True), required=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
def stats(log_path, config_path, out_path):
    """Export per-tick per-task pass counts as CSV."""
    engine = _engine(Path(config_path))
    source = load_log(log_path)
    for event in source:
        engine.log.append(event)
    matrix = engine.matrix()
    class_size = len(matrix.students)
    with Path(out_path).open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["t_ms", "task_id", "passing", "class_size"])
        for t in matrix.ticks:
            counts: dict[str, int] = {}
            for student in matrix.students:
                for cp_id in matrix.checkpoint_ids:
                    cell = matrix.cell(t, student, cp_id)
                    if cell is None:
                        continue
                    for outcome in cell.outcomes:
                        counts.setdefault(outcome.task_id, 0)
                        if outcome.status == "pass":
                            counts[outcome.task_id] += 1
            for task_id in sorted(counts):
                writer.writerow([t, task_id, counts[task_id], class_size])
    click.echo(f"stats written to {out_path}")


if __name__ == "__main__":
    main()
