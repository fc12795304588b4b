#!/usr/bin/env python3
"""Time the full-classroom progress matrix on a synthetic session.

Usage: python scripts/benchmark.py [--students 22] [--events 810] [--seed 0]
"""

from __future__ import annotations

import argparse
import json
import time
from pathlib import Path

from classwatch.documents import load_starter
from classwatch.session import SessionConfig, SessionEngine
from classwatch.simulate import SimulationConfig, simulate_class

REPO_ROOT = Path(__file__).resolve().parents[1]
DEFAULT_SESSION = REPO_ROOT / "fixtures" / "todo" / "session.json"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--session", type=Path, default=DEFAULT_SESSION)
    parser.add_argument("--students", type=int, default=22)
    parser.add_argument("--events", type=int, default=810)
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

    engine = SessionEngine(SessionConfig.load(args.session))
    started = time.perf_counter()
    engine.ingest([json.loads(event.to_json()) for event in log.events])
    ingest_s = time.perf_counter() - started

    started = time.perf_counter()
    matrix = engine.matrix()
    matrix_s = time.perf_counter() - started

    cells = len(matrix.cells)
    print(f"students            {len(matrix.students)}")
    print(f"events              {len(log)}")
    print(f"minute ticks        {len(matrix.ticks)}")
    print(f"matrix cells        {cells}")
    print(f"ingest time         {ingest_s:.2f}s")
    print(f"matrix time         {matrix_s:.2f}s")
    print(f"cells per second    {cells / max(matrix_s, 1e-9):.0f}")


if __name__ == "__main__":
    main()
