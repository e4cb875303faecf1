"""FastAPI service exposing standards, records, charts, and recommendations.

The service wraps the core package: all clinical math stays in the library
modules; routes translate HTTP to library calls. Unknown ids map to 404,
invariant violations to 422 with a machine-readable reason, and idempotent
writes never conflict (no 409).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .. import records as rec
from ..anthro import (
    BUILTIN_PALETTES,
    ZonePalette,
    format_z,
    legacy_symbol,
    load_palette,
    zscore,
)
from ..chart import chart_spec_to_dict, growth_chart_spec, render_svg
from ..errors import MedgraphError
from ..records import RecordStore
from ..rules import (
    NutritionInputs,
    Oedema,
    RationTable,
    WeightOutOfTable,
    parse_ration_table,
    recommend_program,
    rutf_rations,
)
from ..standards import Catalog, Indicator, NotFound, Sex, StandardDataset, XUnit
from ..standards import digest as dataset_digest
from ..standards import serialize_standard_table
from .schemas import (
    ChartOut,
    PatientIn,
    PatientOut,
    PointAnnotation,
    RecommendationOut,
    StandardsEntry,
    VisitIn,
    VisitOut,
)

logger = logging.getLogger(__name__)

DIGEST_HEADER = "X-Dataset-Digest"

GROWTH_INDICATORS = (
    Indicator.WEIGHT_FOR_AGE,
    Indicator.HEIGHT_FOR_AGE,
    Indicator.WEIGHT_FOR_HEIGHT,
)


class ApiError(MedgraphError):
    def __init__(self, status: int, reason: str):
        self.status = status
        self.reason = reason
        super().__init__(reason)


@dataclass
class ServiceState:
    catalog: Catalog
    store: RecordStore
    ration_table: RationTable | None
    palette_dir: Path

    def palette(self, name: str) -> ZonePalette:
        if name in BUILTIN_PALETTES:
            return BUILTIN_PALETTES[name]
        path = self.palette_dir / f"{name}.palette"
        if path.exists():
            return load_palette(path, name=name)
        raise ApiError(422, f"unknown palette {name!r}")

    def dataset_for(self, indicator: Indicator, sex: Sex) -> StandardDataset:
        """Pick the catalog dataset for an indicator, preferring exact sex."""
        exact, fallback = None, None
        for ds_id in self.catalog.ids():
            ds = self.catalog.get(ds_id)
            if ds.indicator != indicator:
                continue
            if ds.sex == sex and exact is None:
                exact = ds
            elif ds.sex == Sex.ANY and fallback is None:
                fallback = ds
        ds = exact or fallback
        if ds is None:
            raise ApiError(
                404, f"no {indicator.value} dataset for sex {sex.value} in the catalog"
            )
        return ds


def load_service_state(data_dir: Path | str, ration_table_path: Path | str | None = None) -> ServiceState:
    data_dir = Path(data_dir)
    table = None
    candidate = Path(ration_table_path) if ration_table_path else data_dir / "rations.csv"
    if candidate.exists():
        table = parse_ration_table(candidate.read_text(encoding="utf-8"))
    return ServiceState(
        catalog=Catalog(data_dir / "standards"),
        store=RecordStore(data_dir),
        ration_table=table,
        palette_dir=data_dir / "palettes",
    )


def create_app(
    data_dir: Path | str,
    ration_table_path: Path | str | None = None,
    ui_dir: Path | str | None = None,
) -> FastAPI:
    app = FastAPI(title="medgraph", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    state = load_service_state(data_dir, ration_table_path)
    app.state.medgraph = state

    @app.exception_handler(ApiError)
    async def api_error(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content={"reason": exc.reason})

    @app.exception_handler(MedgraphError)
    async def module_error(request: Request, exc: MedgraphError):
        status = 404 if isinstance(exc, (rec.UnknownPatient, NotFound)) else 422
        return JSONResponse(status_code=status, content={"reason": str(exc)})

    @app.get("/api/standards", response_model=list[StandardsEntry])
    def list_standards():
        entries = []
        for ds_id in state.catalog.ids():
            ds = state.catalog.get(ds_id)
            entries.append(
                StandardsEntry(
                    id=ds.id,
                    digest=dataset_digest(ds).hex,
                    indicator=ds.indicator.value,
                    sex=ds.sex.value,
                    x_unit=ds.x_unit.value,
                    x_label=ds.x_label,
                    y_label=ds.y_label,
                )
            )
        return entries

    @app.get("/api/standards/{ds_id}")
    def get_standard(ds_id: str, request: Request):
        ds = state.catalog.get(ds_id)
        hexdigest = dataset_digest(ds).hex
        if request.headers.get(DIGEST_HEADER) == hexdigest:
            return Response(status_code=304, headers={DIGEST_HEADER: hexdigest})
        return Response(
            content=serialize_standard_table(ds),
            media_type="text/csv; charset=utf-8",
            headers={DIGEST_HEADER: hexdigest},
        )

    @app.post("/api/patients", response_model=PatientOut, status_code=201)
    def create_patient(body: PatientIn):
        try:
            sex = Sex(body.sex)
        except ValueError:
            raise ApiError(422, f"sex must be 'female' or 'male', got {body.sex!r}") from None
        patient = rec.Patient(
            id=body.id or rec.new_id(), name=body.name, sex=sex, birth_date=body.birth_date
        )
        stored = state.store.create_patient(patient)
        return _patient_out(stored)

    @app.get("/api/patients", response_model=list[PatientOut])
    def list_patients():
        return [_patient_out(p) for p in state.store.list_patients()]

    @app.get("/api/patients/{pid}", response_model=PatientOut)
    def get_patient(pid: str):
        return _patient_out(state.store.get_patient(pid))

    @app.post("/api/patients/{pid}/visits", response_model=VisitOut, status_code=201)
    def add_visit(pid: str, body: VisitIn):
        visit = rec.Visit(
            id=body.id or rec.new_id(),
            patient_id=pid,
            date=body.date,
            measures=dict(body.measures),
            note=body.note,
        )
        return _visit_out(state.store.add_visit(visit))

    @app.get("/api/patients/{pid}/visits", response_model=list[VisitOut])
    def list_visits(pid: str):
        return [_visit_out(v) for v in state.store.list_visits(pid)]

    @app.get("/api/patients/{pid}/chart/{indicator}")
    def chart(pid: str, indicator: str, request: Request, palette: str = "passport"):
        try:
            ind = Indicator(indicator)
        except ValueError:
            raise ApiError(422, f"unknown indicator {indicator!r}") from None
        if ind not in GROWTH_INDICATORS:
            raise ApiError(422, f"indicator {indicator!r} has no growth chart")
        patient = state.store.get_patient(pid)
        pal = state.palette(palette)
        ds = state.dataset_for(ind, patient.sex)
        series = state.store.series_for_dataset(pid, ds)
        spec, warnings = growth_chart_spec(ds, list(series.points), pal)

        accept = request.headers.get("accept", "")
        if "image/svg+xml" in accept:
            return Response(content=render_svg(spec), media_type="image/svg+xml")
        annotations = _annotations(state, patient, ds, pal)
        out = ChartOut(
            dataset_id=ds.id,
            palette=pal.name,
            spec=chart_spec_to_dict(spec),
            warnings=warnings,
            annotations=annotations,
        )
        return JSONResponse(content=out.model_dump(mode="json"))

    @app.get("/api/patients/{pid}/recommendation", response_model=RecommendationOut)
    def recommendation(pid: str):
        patient = state.store.get_patient(pid)
        visits = state.store.list_visits(pid)
        if not visits:
            raise ApiError(422, "patient has no visits")
        visit = visits[-1]
        missing = [
            m
            for m in (rec.MEASURE_WEIGHT, rec.MEASURE_HEIGHT, rec.MEASURE_MUAC)
            if m not in visit.measures
        ]
        if missing:
            raise ApiError(422, f"latest visit lacks measures: {', '.join(missing)}")
        wfh = state.dataset_for(Indicator.WEIGHT_FOR_HEIGHT, patient.sex)
        z = zscore(wfh, visit.measures[rec.MEASURE_HEIGHT], visit.measures[rec.MEASURE_WEIGHT]).z
        oedema_code = int(visit.measures.get(rec.MEASURE_OEDEMA, 0))
        oedema = {v: k for k, v in rec.OEDEMA_CODES.items()}[oedema_code]
        result = recommend_program(
            NutritionInputs(
                z_wfh=z,
                muac_cm=visit.measures[rec.MEASURE_MUAC],
                oedema=Oedema(oedema),
            )
        )
        return RecommendationOut(
            program=result.program.value,
            reasons=list(result.reasons),
            advisory=result.advisory,
            z_wfh=z,
            muac_cm=visit.measures[rec.MEASURE_MUAC],
            oedema=oedema,
            visit_id=visit.id,
            visit_date=visit.date,
        )

    if ui_dir is not None and Path(ui_dir).exists():
        app.mount("/", StaticFiles(directory=Path(ui_dir), html=True), name="ui")

    return app


def _patient_out(p: rec.Patient) -> PatientOut:
    return PatientOut(id=p.id, name=p.name, sex=p.sex.value, birth_date=p.birth_date)


def _visit_out(v: rec.Visit) -> VisitOut:
    return VisitOut(
        id=v.id, patient_id=v.patient_id, date=v.date, measures=v.measures, note=v.note
    )


def _annotations(
    state: ServiceState, patient: rec.Patient, ds: StandardDataset, pal: ZonePalette
) -> list[PointAnnotation]:
    """Per-point inspection data, index-aligned with the chart's data series.

    The UI must not do clinical math itself, so z, zone, and the ration
    lookup are resolved here for every plotted visit.
    """
    y_measure = rec.MEASURE_HEIGHT if ds.indicator == Indicator.HEIGHT_FOR_AGE else rec.MEASURE_WEIGHT
    entries = []
    for v in state.store.list_visits(patient.id):
        if ds.x_unit == XUnit.LENGTH_CM:
            if rec.MEASURE_HEIGHT not in v.measures or y_measure not in v.measures:
                continue
            x = v.measures[rec.MEASURE_HEIGHT]
        else:
            if y_measure not in v.measures:
                continue
            unit = "days" if ds.x_unit == XUnit.AGE_DAYS else "months"
            x = rec.age_at(patient, v.date, unit)
        y = v.measures[y_measure]
        if not ds.min_x <= x <= ds.max_x:
            continue
        entries.append((x, y, v))
    entries.sort(key=lambda e: (e[0], e[1]))

    out = []
    for idx, (x, y, v) in enumerate(entries):
        score = zscore(ds, x, y, pal)
        legacy = legacy_symbol(score.z)
        rations = None
        if state.ration_table is not None and rec.MEASURE_WEIGHT in v.measures:
            try:
                rations = rutf_rations(v.measures[rec.MEASURE_WEIGHT], state.ration_table)
            except WeightOutOfTable:
                rations = None
        out.append(
            PointAnnotation(
                point_index=idx,
                visit_id=v.id,
                visit_date=v.date,
                x=x,
                y=y,
                measures=v.measures,
                z=score.z,
                z_display=format_z(score.z),
                zone=score.zone,
                legacy=list(legacy) if isinstance(legacy, tuple) else legacy,
                rutf_rations=rations,
            )
        )
    return out
