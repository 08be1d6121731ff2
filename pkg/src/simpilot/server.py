"""HTTP/JSON API for the trainer console.

POST /sessions            config -> {"session_id": ...}
POST /sessions/{id}/step  {"atco_text": ...} -> PilotResponse
GET  /sessions/{id}/log   -> {"records": [...]}
DELETE /sessions/{id}     -> session summary
GET  /health              -> {"status": "ok"}
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .pipeline import ConfigError, Engine, ExerciseConfig, UnknownSession


def create_app(engine: Engine | None = None) -> FastAPI:
    app = FastAPI(title="simpilot")
    app.state.engine = engine or Engine()

    @app.exception_handler(ConfigError)
    async def config_error(request: Request, exc: ConfigError):
        return JSONResponse(
            status_code=400,
            content={"error": "config_error", "detail": str(exc), "field": exc.field},
        )

    @app.exception_handler(UnknownSession)
    async def unknown_session(request: Request, exc: UnknownSession):
        return JSONResponse(
            status_code=404,
            content={"error": "unknown_session", "detail": str(exc)},
        )

    @app.get("/health")
    async def health():
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    async def start_session(body: dict):
        config = ExerciseConfig.from_dict(body)
        session_id = app.state.engine.start_session(config)
        return {"session_id": session_id}

    @app.post("/sessions/{session_id}/step")
    async def step(session_id: str, body: dict):
        atco_text = body.get("atco_text")
        if not isinstance(atco_text, str):
            return JSONResponse(
                status_code=400,
                content={"error": "bad_request", "detail": "atco_text required"},
            )
        response = app.state.engine.step(session_id, atco_text)
        return response.to_dict()

    @app.get("/sessions/{session_id}/log")
    async def session_log(session_id: str):
        session = app.state.engine.get(session_id)
        return {"records": session.records}

    @app.delete("/sessions/{session_id}")
    async def end_session(session_id: str):
        return app.state.engine.end_session(session_id)

    return app
