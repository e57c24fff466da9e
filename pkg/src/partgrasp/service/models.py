"""Request/response models for the HTTP service."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class PoseModel(BaseModel):
    rotation: list[float] = Field(..., description="9 numbers, column-major 3x3")
    translation: list[float]


class IntrinsicsModel(BaseModel):
    width: int
    height: int
    fx: float
    fy: float
    cx: float
    cy: float


class CameraModel(BaseModel):
    intrinsics: IntrinsicsModel
    pose: PoseModel


class PrimitiveModel(BaseModel):
    part_name: str
    shape: str
    dimensions: list[float]
    pose: PoseModel
    color: list[int]


class ObjectModel(BaseModel):
    name: str
    parts: list[PrimitiveModel]


class SceneModel(BaseModel):
    camera: CameraModel
    objects: list[ObjectModel]
    background: list[PrimitiveModel]
    seed: int = 0


class CreateSessionRequest(BaseModel):
    scene: SceneModel
    seed: Optional[int] = None


class CreateSessionResponse(BaseModel):
    session_id: str
    state: str
    inventory: list


class MessageRequest(BaseModel):
    text: str


class MessageResponse(BaseModel):
    reply: Optional[str] = None
    sequence: Optional[dict] = None


class StepResultModel(BaseModel):
    index: int
    action: str
    target: dict
    roi: Optional[dict] = None
    grasps: Optional[dict] = None
    annotation: Optional[dict] = None
    failure: Optional[dict] = None


class SessionView(BaseModel):
    session_id: str
    state: str
    cursor: int
    intrinsics: IntrinsicsModel
    inventory: list
    transcript: list[dict]
    steps: list[dict]
    sequence: Optional[dict] = None


class ErrorBody(BaseModel):
    code: str
    message: str
    context: Optional[Any] = None
