"""HTTP surface over the session engine: ingestion, queries, live updates."""

from __future__ import annotations

import json
import os
import queue
from typing import Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse, StreamingResponse

from .checkpoints import ProviderError
from .dom import SelectorError
from .session import (
    BeforeSession,
    SessionEngine,
    SessionError,
    TOKEN_ENV,
    TOKEN_HEADER,
    UnknownStudent,
)

UPDATE_POLL_S = 0.5


def create_app(engine: SessionEngine) -> FastAPI:
    app = FastAPI(title="classwatch", version="0.1.0")
    app.state.engine = engine

    def require_token(request: Request) -> None:
        token = os.environ.get(TOKEN_ENV)
        if token and request.headers.get(TOKEN_HEADER) != token:
            raise HTTPException(status_code=403, detail="missing or bad instructor token")

    @app.post("/events")
    async def post_events(request: Request):
        try:
            body = json.loads(await request.body())
        except json.JSONDecodeError:
            raise HTTPException(status_code=400, detail="body is not valid JSON")
        if not isinstance(body, list):
            raise HTTPException(status_code=400, detail="body must be an array of events")
        try:
            verdicts = engine.ingest(body)
        except (ValueError, TypeError) as exc:
            raise HTTPException(status_code=400, detail=f"malformed event: {exc}")
        return verdicts

    @app.get("/progress")
    def get_progress(request: Request, t: Optional[int] = None):
        require_token(request)
        try:
            return engine.progress_payload(t)
        except BeforeSession as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @app.get("/students/{student_id}/snapshot")
    def get_snapshot(student_id: str, request: Request, t: Optional[int] = None):
        require_token(request)
        try:
            return engine.snapshot_payload(student_id, t)
        except UnknownStudent:
            raise HTTPException(status_code=404, detail=f"unknown student {student_id}")

    @app.get("/stats")
    def get_stats(request: Request, t: Optional[int] = None):
        require_token(request)
        try:
            return engine.stats_payload(t)
        except BeforeSession as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @app.post("/inspect")
    async def post_inspect(request: Request):
        require_token(request)
        body = await request.json()
        try:
            return engine.inspect_payload(
                task_id=body.get("task_id", ""),
                selector=body.get("selector", ""),
                prop=body.get("property"),
                t=body.get("t_ms"),
            )
        except SelectorError as exc:
            raise HTTPException(status_code=400, detail=f"SelectorError: {exc}")

    @app.post("/checkpoints/verify")
    async def post_verify(request: Request):
        require_token(request)
        body = await request.json()
        try:
            return engine.verify_payload(body.get("checkpoint_id", ""))
        except SessionError as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @app.post("/checkpoints/suggest")
    async def post_suggest(request: Request):
        require_token(request)
        body = await request.json()
        try:
            return engine.suggest_payload(body.get("description", ""))
        except ProviderError as exc:
            raise HTTPException(status_code=502, detail=f"ProviderError: {exc}")

    @app.post("/replay")
    async def post_replay(request: Request):
        require_token(request)
        body = await request.json()
        speed = body.get("speed", "max")
        speed_value = float("inf") if speed == "max" else float(speed)
        try:
            engine.start_replay(body["log_path"], speed_value)
        except (SessionError, OSError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"started": True}

    @app.get("/replay/status")
    def get_replay_status(request: Request):
        require_token(request)
        return engine.replay_status()

    @app.get("/updates")
    def get_updates(request: Request):
        require_token(request)
        subscription = engine.subscribe()

        def stream():
            try:
                while True:
                    try:
                        update = subscription.get(timeout=UPDATE_POLL_S)
                    except queue.Empty:
                        # keep-alive so clients notice silent channels
                        yield "\n"
                        continue
                    yield json.dumps(update, sort_keys=True) + "\n"
            finally:
                engine.unsubscribe(subscription)

        return StreamingResponse(stream(), media_type="application/x-ndjson")

    @app.exception_handler(SessionError)
    def session_error(request: Request, exc: SessionError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    return app
