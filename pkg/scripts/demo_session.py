#!/usr/bin/env python3
"""End-to-end demo: simulate a class, replay the log, print classroom stats.

Usage: python scripts/demo_session.py [--students 6] [--events 200]
"""

from __future__ import annotations

import argparse
import json
import tempfile
from pathlib import Path

from classwatch.documents import load_starter
from classwatch.session import SessionConfig, SessionEngine
from classwatch.simulate import SimulationConfig, simulate_class

REPO_ROOT = Path(__file__).resolve().parents[1]
DEFAULT_SESSION = REPO_ROOT / "fixtures" / "todo" / "session.json"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--session", type=Path, default=DEFAULT_SESSION)
    parser.add_argument("--students", type=int, default=6)
    parser.add_argument("--events", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    session = SessionConfig.load(args.session)
    log = simulate_class(SimulationConfig(
        students=args.students,
        events_per_student=args.events,
        seed=args.seed,
        session_id=session.session_id,
        starter=load_starter(session.starter_path),
        reference=load_starter(session.reference_path),
    ))
    with tempfile.TemporaryDirectory() as tmp:
        log_path = Path(tmp) / "class.evlog"
        log.persist(log_path)
        engine = SessionEngine(SessionConfig.load(args.session))
        engine.start_replay(log_path, float("inf"))
        engine.wait_replay(timeout_s=600)

    stats = engine.stats_payload()
    print(f"session        {session.session_id}")
    print(f"class size     {stats['class_size']}")
    print(f"events         {len(engine.log)}")
    for cp_id, summary in stats["checkpoint_summary"].items():
        print(f"checkpoint {cp_id}: {json.dumps(summary)}")
    for task_id, passing in sorted(stats["task_pass_counts"].items()):
        print(f"  {task_id}: {passing}/{stats['class_size']} passing")


if __name__ == "__main__":
    main()
