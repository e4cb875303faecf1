"""Pydantic request/response models for the HTTP API (see docs/api.md)."""

from __future__ import annotations

from datetime import date

from pydantic import BaseModel


class StandardsEntry(BaseModel):
    id: str
    digest: str
    indicator: str
    sex: str
    x_unit: str
    x_label: str = ""
    y_label: str = ""


class PatientIn(BaseModel):
    id: str | None = None
    name: str
    sex: str
    birth_date: date


class PatientOut(BaseModel):
    id: str
    name: str
    sex: str
    birth_date: date


class VisitIn(BaseModel):
    id: str | None = None
    date: date
    measures: dict[str, float]
    note: str | None = None


class VisitOut(BaseModel):
    id: str
    patient_id: str
    date: date
    measures: dict[str, float]
    note: str | None = None


class PointAnnotation(BaseModel):
    """Inspection payload for one plotted visit point (index-aligned)."""

    point_index: int
    visit_id: str
    visit_date: date
    x: float
    y: float
    measures: dict[str, float]
    z: float | None = None
    z_display: str | None = None
    zone: str | None = None
    legacy: list[str] | str | None = None
    rutf_rations: int | None = None


class ChartOut(BaseModel):
    dataset_id: str
    palette: str
    spec: dict
    warnings: list[str]
    annotations: list[PointAnnotation]


class RecommendationOut(BaseModel):
    program: str
    reasons: list[str]
    advisory: str
    z_wfh: float
    muac_cm: float
    oedema: str
    visit_id: str
    visit_date: date


class ErrorOut(BaseModel):
    reason: str
