"""Patient and visit storage: append-only JSON-lines with idempotent writes.

One log file per entity type under the data directory; an in-memory index
is rebuilt on startup by replaying the logs. Re-appending an id already
seen is a no-op, which is what lets sync retries stay safe. Writes are
serialized by a lock (single writer); readers get consistent snapshots.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass
from datetime import date
from pathlib import Path

from .errors import IoFailure, MedgraphError
from .standards import Indicator, Sex, StandardDataset, XUnit

__all__ = [
    "Patient",
    "Visit",
    "MeasureSeries",
    "RecordStore",
    "UnknownPatient",
    "InvariantViolation",
    "NegativeAge",
    "age_at",
    "new_id",
    "patient_from_json",
    "patient_to_json",
    "visit_from_json",
    "visit_to_json",
    "OEDEMA_CODES",
]

DAYS_PER_MONTH = 30.4375  # mean Gregorian month

# oedema is stored enum-coded among the numeric measures
OEDEMA_CODES = {"none": 0, "+": 1, "++": 2, "+++": 3}
MEASURE_WEIGHT = "weight_kg"
MEASURE_HEIGHT = "height_cm"
MEASURE_MUAC = "muac_cm"
MEASURE_OEDEMA = "oedema"


class UnknownPatient(MedgraphError):
    pass


class InvariantViolation(MedgraphError):
    pass


class NegativeAge(MedgraphError):
    pass


def new_id() -> str:
    return str(uuid.uuid4())


@dataclass(frozen=True)
class Patient:
    id: str
    name: str
    sex: Sex
    birth_date: date


@dataclass(frozen=True)
class Visit:
    id: str
    patient_id: str
    date: date
    measures: dict[str, float]
    note: str | None = None


@dataclass(frozen=True)
class MeasureSeries:
    measure: str
    points: tuple[tuple[float, float], ...]


def age_at(patient: Patient, when: date, unit: str = "days") -> float:
    """Age at a date: exact day difference, or days / 30.4375 for months."""
    days = (when - patient.birth_date).days
    if days < 0:
        raise NegativeAge(f"{when.isoformat()} predates birth {patient.birth_date.isoformat()}")
    if unit == "months":
        return days / DAYS_PER_MONTH
    if unit == "days":
        return float(days)
    raise ValueError(f"unknown age unit {unit!r}")


def _validate_patient(p: Patient):
    if not p.id:
        raise InvariantViolation("patient id must not be empty")
    if p.sex not in (Sex.FEMALE, Sex.MALE):
        raise InvariantViolation(f"patient sex must be female or male, got {p.sex}")
    if p.birth_date > date.today():
        raise InvariantViolation(f"birth date {p.birth_date.isoformat()} is in the future")


def _validate_visit(v: Visit, patient: Patient):
    if not v.id:
        raise InvariantViolation("visit id must not be empty")
    if v.date < patient.birth_date:
        raise InvariantViolation(
            f"visit date {v.date.isoformat()} predates birth {patient.birth_date.isoformat()}"
        )
    for name, value in v.measures.items():
        if name == MEASURE_OEDEMA:
            if value not in OEDEMA_CODES.values():
                raise InvariantViolation(f"oedema code must be 0..3, got {value}")
        elif not value > 0:
            raise InvariantViolation(f"measure {name!r} must be positive, got {value}")


class RecordStore:
    def __init__(self, data_dir: Path | str):
        self.data_dir = Path(data_dir)
        try:
            self.data_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise IoFailure(f"cannot create data directory {self.data_dir}: {e}") from e
        self._patients_path = self.data_dir / "patients.jsonl"
        self._visits_path = self.data_dir / "visits.jsonl"
        self._lock = threading.Lock()
        self._patients: dict[str, Patient] = {}
        self._visits: dict[str, Visit] = {}
        self._visit_ids_by_patient: dict[str, list[str]] = {}
        self._replay()

    def _replay(self):
        if self._patients_path.exists():
            for line in self._patients_path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    p = patient_from_json(json.loads(line))
                    self._patients.setdefault(p.id, p)
        if self._visits_path.exists():
            for line in self._visits_path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    v = visit_from_json(json.loads(line))
                    if v.id not in self._visits:
                        self._visits[v.id] = v
                        self._visit_ids_by_patient.setdefault(v.patient_id, []).append(v.id)

    def _append(self, path: Path, doc: dict):
        try:
            with path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(doc, sort_keys=True) + "\n")
                fh.flush()
                os.fsync(fh.fileno())
        except OSError as e:
            raise IoFailure(f"cannot append to {path}: {e}") from e

    def create_patient(self, patient: Patient) -> Patient:
        """Durable insert; re-creating an existing id returns the stored record."""
        _validate_patient(patient)
        with self._lock:
            existing = self._patients.get(patient.id)
            if existing is not None:
                return existing
            self._append(self._patients_path, patient_to_json(patient))
            self._patients[patient.id] = patient
            return patient

    def add_visit(self, visit: Visit) -> Visit:
        """Durable insert, idempotent on visit id (sync retries re-send)."""
        with self._lock:
            patient = self._patients.get(visit.patient_id)
            if patient is None:
                raise UnknownPatient(f"no patient {visit.patient_id!r}")
            existing = self._visits.get(visit.id)
            if existing is not None:
                return existing
            _validate_visit(visit, patient)
            self._append(self._visits_path, visit_to_json(visit))
            self._visits[visit.id] = visit
            self._visit_ids_by_patient.setdefault(visit.patient_id, []).append(visit.id)
            return visit

    def get_patient(self, patient_id: str) -> Patient:
        p = self._patients.get(patient_id)
        if p is None:
            raise UnknownPatient(f"no patient {patient_id!r}")
        return p

    def list_patients(self) -> list[Patient]:
        return list(self._patients.values())

    def list_visits(self, patient_id: str) -> list[Visit]:
        self.get_patient(patient_id)
        ids = self._visit_ids_by_patient.get(patient_id, [])
        return sorted((self._visits[i] for i in ids), key=lambda v: v.date)

    def series_for(self, patient_id: str, measure: str, x_unit: str = "days") -> MeasureSeries:
        """One (age, value) point per visit carrying the measure, sorted."""
        patient = self.get_patient(patient_id)
        points = []
        for v in self.list_visits(patient_id):
            if measure in v.measures:
                points.append((age_at(patient, v.date, x_unit), v.measures[measure]))
        points.sort()
        return MeasureSeries(measure=measure, points=tuple(points))

    def series_for_dataset(self, patient_id: str, ds: StandardDataset) -> MeasureSeries:
        """Measurement series on the dataset's axes.

        Age-based datasets plot the indicator measure over age; a
        weight-for-height style dataset (length x-axis) pairs each visit's
        height with its weight instead.
        """
        y_measure = _indicator_measure(ds.indicator)
        if ds.x_unit == XUnit.LENGTH_CM:
            patient = self.get_patient(patient_id)
            points = []
            for v in self.list_visits(patient_id):
                if MEASURE_HEIGHT in v.measures and y_measure in v.measures:
                    points.append((v.measures[MEASURE_HEIGHT], v.measures[y_measure]))
            points.sort()
            return MeasureSeries(measure=y_measure, points=tuple(points))
        unit = "days" if ds.x_unit == XUnit.AGE_DAYS else "months"
        return self.series_for(patient_id, y_measure, unit)


def _indicator_measure(indicator: Indicator) -> str:
    if indicator == Indicator.HEIGHT_FOR_AGE:
        return MEASURE_HEIGHT
    return MEASURE_WEIGHT


def patient_to_json(p: Patient) -> dict:
    return {"id": p.id, "name": p.name, "sex": p.sex.value, "birth_date": p.birth_date.isoformat()}


def patient_from_json(doc: dict) -> Patient:
    return Patient(
        id=doc["id"],
        name=doc["name"],
        sex=Sex(doc["sex"]),
        birth_date=date.fromisoformat(doc["birth_date"]),
    )


def visit_to_json(v: Visit) -> dict:
    return {
        "id": v.id,
        "patient_id": v.patient_id,
        "date": v.date.isoformat(),
        "measures": v.measures,
        "note": v.note,
    }


def visit_from_json(doc: dict) -> Visit:
    return Visit(
        id=doc["id"],
        patient_id=doc["patient_id"],
        date=date.fromisoformat(doc["date"]),
        measures={k: float(v) for k, v in doc["measures"].items()},
        note=doc.get("note"),
    )
