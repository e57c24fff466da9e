"""HTTP service wrapping the session pipeline.

Endpoints:
    POST /sessions                     create a session from a scene document
    GET  /sessions/{id}                full session snapshot
    POST /sessions/{id}/messages       dialogue turn (confirmation emits the sequence)
    POST /sessions/{id}/steps/next     execute the next action step
    GET  /sessions/{id}/frame          rendered color image (PNG)
    GET  /sessions/{id}/masks/{step}   target (or ?kind=expanded) mask (PNG)
    GET  /sessions/{id}/grasps/{step}  scored grasp set (JSON, ?top=n)
    GET  /healthz
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Response

from ..dialogue.backends import HttpChatBackend, ScriptedMockBackend
from ..errors import (
    BackendUnavailableError,
    MalformedOutputError,
    PartGraspError,
    SceneValidationError,
    SessionStateError,
)
from ..scene.io import color_png_bytes
from ..sessions import SessionManager
from .models import (
    CreateSessionRequest,
    CreateSessionResponse,
    MessageRequest,
    MessageResponse,
    SessionView,
    StepResultModel,
)


@dataclass
class ServiceSettings:
    backend: str = "mock"  # mock | http
    fixtures: str | None = None
    base_url: str = "http://localhost:8080/v1"
    model: str = "chat-model"
    api_key_env: str = "CHAT_API_KEY"
    default_seed: int = 0
    element_size: int | None = None  # odd pixels; None scales with resolution
    ui_dir: str | None = None

    @classmethod
    def from_env(cls) -> "ServiceSettings":
        return cls(
            backend=os.environ.get("PARTGRASP_BACKEND", "mock"),
            fixtures=os.environ.get("PARTGRASP_FIXTURES"),
            base_url=os.environ.get("PARTGRASP_BASE_URL", "http://localhost:8080/v1"),
            model=os.environ.get("PARTGRASP_MODEL", "chat-model"),
        )


def backend_factory(settings: ServiceSettings):
    if settings.backend == "mock":
        fixtures = settings.fixtures
        if not fixtures:
            raise ValueError("mock backend requires a fixtures file")

        def make():
            return ScriptedMockBackend.from_file(fixtures)

    elif settings.backend == "http":

        def make():
            return HttpChatBackend(settings.base_url, settings.model, settings.api_key_env)

    else:
        raise ValueError(f"unknown backend {settings.backend!r}")
    return make


def _http_error(status: int, exc: PartGraspError) -> HTTPException:
    return HTTPException(status_code=status, detail={"code": exc.code, "message": str(exc)})


def create_app(settings: ServiceSettings | None = None, manager: SessionManager | None = None) -> FastAPI:
    settings = settings or ServiceSettings.from_env()
    element = None
    if settings.element_size:
        from ..localization.morphology import StructuringElement

        element = StructuringElement.from_size(settings.element_size, settings.element_size)
    manager = manager or SessionManager(
        backend_factory(settings), default_seed=settings.default_seed, element=element
    )
    app = FastAPI(title="partgrasp", version="0.1.0")
    app.state.manager = manager

    def get_session_or_404(session_id: str):
        try:
            return manager.get(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail={"code": "unknown_session", "message": session_id})

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/sessions", response_model=CreateSessionResponse, status_code=201)
    def create_session(request: CreateSessionRequest):
        try:
            session = manager.create_session(request.scene.model_dump(), seed=request.seed)
        except SceneValidationError as exc:
            raise _http_error(422, exc)
        snap = manager.snapshot(session.id)
        return CreateSessionResponse(session_id=session.id, state=snap["state"], inventory=snap["inventory"])

    @app.get("/sessions/{session_id}", response_model=SessionView, response_model_exclude_none=True)
    def get_session(session_id: str):
        get_session_or_404(session_id)
        return SessionView(**manager.snapshot(session_id))

    @app.post("/sessions/{session_id}/messages", response_model=MessageResponse, response_model_exclude_none=True)
    def post_message(session_id: str, request: MessageRequest):
        get_session_or_404(session_id)
        try:
            return MessageResponse(**manager.post_message(session_id, request.text))
        except SessionStateError as exc:
            raise _http_error(409, exc)
        except MalformedOutputError as exc:
            raise HTTPException(
                status_code=502,
                detail={"code": exc.code, "message": str(exc), "diagnostics": exc.diagnostics, "raw": exc.raw},
            )
        except BackendUnavailableError as exc:
            raise _http_error(502, exc)

    @app.post("/sessions/{session_id}/steps/next", response_model=StepResultModel, response_model_exclude_none=True)
    def execute_step(session_id: str):
        get_session_or_404(session_id)
        try:
            return StepResultModel(**manager.execute_step(session_id))
        except SessionStateError as exc:
            raise _http_error(409, exc)

    @app.get("/sessions/{session_id}/frame")
    def get_frame(session_id: str):
        session = get_session_or_404(session_id)
        return Response(content=color_png_bytes(session.frame), media_type="image/png")

    @app.get("/sessions/{session_id}/masks/{step}")
    def get_mask(session_id: str, step: int, kind: str = Query("target", pattern="^(target|expanded)$")):
        get_session_or_404(session_id)
        try:
            png = manager.mask_png(session_id, step, kind)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail={"code": "no_mask", "message": str(exc)})
        return Response(content=png, media_type="image/png")

    @app.get("/sessions/{session_id}/grasps/{step}")
    def get_grasps(session_id: str, step: int, top: int | None = Query(None, ge=1)):
        get_session_or_404(session_id)
        try:
            return manager.grasps_json(session_id, step, top)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail={"code": "no_grasps", "message": str(exc)})

    ui_dir = settings.ui_dir or os.environ.get("PARTGRASP_UI_DIR")
    if ui_dir and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
