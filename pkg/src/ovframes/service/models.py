"""Pydantic request/response models for the frame service.

The frame wire format is the same JSON document the CLI reads and writes:
complex entries as [re, im] pairs, optional group/grouplike table blocks,
optional tolerance overrides.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

from .. import io as frame_io

Matrix = list[list[list[float]]]  # rows of [re, im] entries


class ToleranceModel(BaseModel):
    residual_eps: float = 1e-9
    invert_eps: float = 1e-8


class GroupModel(BaseModel):
    order: int
    mul: list[list[int]]
    names: list[str] | None = None


class SystemModel(BaseModel):
    size: int
    phase_order: int
    mul: list[list[list[int]]]  # [turn, element index] per pair


class FrameModel(BaseModel):
    version: str = frame_io.FORMAT_VERSION
    d: int
    d0: int
    N: int
    A: list[Matrix]
    Psi: list[Matrix]
    tolerance: ToleranceModel | None = None
    group: GroupModel | None = None
    grouplike: SystemModel | None = None


def frame_model_to_doc(model: FrameModel) -> frame_io.FrameDocument:
    return frame_io.frame_from_dict(model.model_dump(exclude_none=True))


def doc_to_frame_model(doc: frame_io.FrameDocument) -> FrameModel:
    return FrameModel.model_validate(frame_io.frame_to_dict(doc))


class GenRequest(BaseModel):
    kind: Literal["parseval", "weak", "group", "grouplike", "operator-onb"]
    d: int
    d0: int
    N: int
    seed: int = 0
    tolerance: ToleranceModel | None = None


class GenResponse(BaseModel):
    frame: FrameModel


class CheckResultModel(BaseModel):
    name: str
    statement: str
    passed: bool
    residual: float | None = None
    detail: str | None = None


class VerifyRequest(BaseModel):
    frame: FrameModel
    checks: list[str] = Field(default_factory=lambda: ["all"])
    companion: FrameModel | None = None


class VerifyResponse(BaseModel):
    passed: bool
    checks: list[CheckResultModel]
    classification: dict


class DualRequest(BaseModel):
    frame: FrameModel


class DualResponse(BaseModel):
    ok: bool
    reason: str | None = None
    frame: FrameModel | None = None


class DilateRequest(BaseModel):
    frame: FrameModel


class DilateResponse(BaseModel):
    ok: bool
    reason: str | None = None
    frame: FrameModel | None = None
    embed: Matrix | None = None
    extended_dim: int | None = None


class SimilarRequest(BaseModel):
    frame: FrameModel
    other: FrameModel


class SimilarResponse(BaseModel):
    similar: bool
    reason: str | None = None
    r_ab: Matrix | None = None
    r_psiphi: Matrix | None = None
    residual: float | None = None
    p_residual: float | None = None


class ReconstructRequest(BaseModel):
    frame: FrameModel


class ReconstructResponse(BaseModel):
    ok: bool
    reason: str | None = None
    kind: Literal["group", "grouplike"] | None = None
    pi: list[Matrix] | None = None
    law_residual: float | None = None
    regeneration_residual: float | None = None


class PerturbRequest(BaseModel):
    frame: FrameModel
    budget_fractions: list[float] = Field(default_factory=lambda: [0.1, 0.5, 0.9, 0.99])
    seeds: int = 25
    base_seed: int = 0


class TightnessRowModel(BaseModel):
    seed: int
    budget_fraction: float
    theoretical_lower: float
    measured_lower: float
    theoretical_upper: float
    measured_upper: float


class PerturbResponse(BaseModel):
    ok: bool
    reason: str | None = None
    rows: list[TightnessRowModel] = Field(default_factory=list)
