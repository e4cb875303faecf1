"""Operator command line: datasets, scoring, charts, records, serve, sync.

The CLI is a thin client of the library (everything works offline against
the local data directory) and of the HTTP API for `sync`. Read commands
all take --json for a machine-readable twin. Exit codes: 0 success, 1 any
module error, 2 usage; `recommend` encodes its verdict (0 none, 10 SFP,
20 OTP) for shell pipelines.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from datetime import date
from pathlib import Path

from . import records as rec
from .anthro import (
    BUILTIN_PALETTES,
    ZonePalette,
    format_z,
    legacy_symbol,
    load_palette,
    zscore,
)
from .chart import (
    RefLine,
    RenderOptions,
    Series,
    YAxisSpec,
    dual_axis_spec,
    growth_chart_spec,
    partograph_spec,
    render_svg,
)
from .errors import MedgraphError
from .records import RecordStore
from .rules import NutritionInputs, Oedema, Program, parse_ration_table, recommend_program, rutf_rations
from .standards import Catalog, Indicator, Sex, XUnit, digest, parse_standard_table
from .syncclient import NetworkUnreachable, SyncClient

RECOMMEND_EXIT = {Program.NONE: 0, Program.SFP: 10, Program.OTP: 20}

ENV_DATA_DIR = "MEDGRAPH_DATA_DIR"


@dataclass
class CliConfig:
    data_dir: Path
    server_url: str = ""
    palette: str = "passport"
    ration_table: Path | None = None


def load_config(data_dir: Path) -> CliConfig:
    """Optional key=value file at <data_dir>/config; flags override it."""
    cfg = CliConfig(data_dir=data_dir)
    path = data_dir / "config"
    if path.exists():
        for raw in path.read_text(encoding="utf-8").splitlines():
            line = raw.strip()
            if not line or line.startswith("#") or "=" not in line:
                continue
            key, value = (part.strip() for part in line.split("=", 1))
            if key == "server_url":
                cfg.server_url = value
            elif key == "palette":
                cfg.palette = value
            elif key == "ration_table":
                cfg.ration_table = Path(value)
    return cfg


def resolve_palette(cfg: CliConfig, name: str | None) -> ZonePalette:
    name = name or cfg.palette
    if name in BUILTIN_PALETTES:
        return BUILTIN_PALETTES[name]
    path = cfg.data_dir / "palettes" / f"{name}.palette"
    if path.exists():
        return load_palette(path, name=name)
    raise MedgraphError(f"unknown palette {name!r} (builtins: {', '.join(BUILTIN_PALETTES)})")


def fmt_band(band: tuple[int | None, int | None]) -> str:
    lo = "-inf" if band[0] is None else str(band[0])
    hi = "inf" if band[1] is None else str(band[1])
    return f"({lo},{hi})"


# -- commands ---------------------------------------------------------------


def cmd_standards_add(args, cfg: CliConfig) -> int:
    text = Path(args.csv).read_text(encoding="utf-8")
    ds = parse_standard_table(
        text,
        id=args.id or Path(args.csv).stem,
        indicator=Indicator(args.indicator),
        sex=Sex(args.sex),
        x_unit=XUnit(args.x_unit),
        x_label=args.x_label,
        y_label=args.y_label,
    )
    Catalog(cfg.data_dir / "standards").put(ds)
    print(digest(ds).hex)
    return 0


def cmd_standards_list(args, cfg: CliConfig) -> int:
    entries = Catalog(cfg.data_dir / "standards").list()
    if args.json:
        print(json.dumps([{"id": i, "digest": d.hex} for i, d in entries], indent=2))
    else:
        for ds_id, d in entries:
            print(f"{ds_id}  {d.hex}")
    return 0


def cmd_zscore(args, cfg: CliConfig) -> int:
    ds = Catalog(cfg.data_dir / "standards").get(args.dataset)
    palette = resolve_palette(cfg, args.palette)
    result = zscore(ds, args.x, args.y, palette)
    legacy = legacy_symbol(result.z)
    if args.json:
        print(
            json.dumps(
                {
                    "z": result.z,
                    "z_display": format_z(result.z),
                    "zone": result.zone,
                    "band": list(result.band),
                    "legacy": list(legacy) if isinstance(legacy, tuple) else legacy,
                },
                indent=2,
            )
        )
    else:
        print(f"{format_z(result.z)} {result.zone} {fmt_band(result.band)}")
        print("legacy: " + (", ".join(legacy) if isinstance(legacy, tuple) else legacy))
    return 0


def cmd_patient_add(args, cfg: CliConfig) -> int:
    client = SyncClient(cfg.data_dir, server_url=cfg.server_url)
    patient = rec.Patient(
        id=args.id or rec.new_id(),
        name=args.name,
        sex=Sex(args.sex),
        birth_date=date.fromisoformat(args.birth_date),
    )
    stored = client.record_patient(patient)
    print(stored.id)
    return 0


def cmd_patient_list(args, cfg: CliConfig) -> int:
    store = RecordStore(cfg.data_dir)
    patients = store.list_patients()
    if args.json:
        print(json.dumps([rec.patient_to_json(p) for p in patients], indent=2))
    else:
        for p in patients:
            print(f"{p.id}  {p.name}  {p.sex.value}  {p.birth_date.isoformat()}")
    return 0


def cmd_visit_add(args, cfg: CliConfig) -> int:
    client = SyncClient(cfg.data_dir, server_url=cfg.server_url)
    measures: dict[str, float] = {}
    if args.weight is not None:
        measures[rec.MEASURE_WEIGHT] = args.weight
    if args.height is not None:
        measures[rec.MEASURE_HEIGHT] = args.height
    if args.muac is not None:
        measures[rec.MEASURE_MUAC] = args.muac
    if args.oedema is not None:
        measures[rec.MEASURE_OEDEMA] = rec.OEDEMA_CODES[args.oedema]
    visit = rec.Visit(
        id=args.id or rec.new_id(),
        patient_id=args.patient,
        date=date.fromisoformat(args.date),
        measures=measures,
        note=args.note,
    )
    stored = client.record_visit(visit)
    print(stored.id)
    return 0


def cmd_chart_growth(args, cfg: CliConfig) -> int:
    ds = Catalog(cfg.data_dir / "standards").get(args.dataset)
    store = RecordStore(cfg.data_dir)
    series = store.series_for_dataset(args.patient, ds)
    palette = resolve_palette(cfg, args.palette)
    spec, warnings = growth_chart_spec(ds, list(series.points), palette)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    Path(args.out).write_text(render_svg(spec, RenderOptions()), encoding="utf-8")
    print(f"wrote {args.out}")
    return 0


def _series_from(doc, name, default_name) -> Series:
    return Series(name=doc.get("name", default_name) if isinstance(doc, dict) else default_name,
                  points=tuple((float(x), float(y)) for x, y in (doc["points"] if isinstance(doc, dict) else doc)))


def _refline_from(doc, severity) -> RefLine:
    return RefLine(
        name=doc.get("name", severity),
        start=(float(doc["start"][0]), float(doc["start"][1])),
        end=(float(doc["end"][0]), float(doc["end"][1])),
        severity=severity,
    )


def cmd_chart_partograph(args, cfg: CliConfig) -> int:
    doc = json.loads(Path(args.infile).read_text(encoding="utf-8"))
    spec = partograph_spec(
        heart=_series_from(doc["heart"], "heart", "foetal heart rate"),
        cervix=_series_from(doc["cervix"], "cervix", "cervix"),
        descent=_series_from(doc["descent"], "descent", "descent"),
        contractions=_series_from(doc["contractions"], "contractions", "contractions"),
        alert=_refline_from(doc["alert"], "alert"),
        action=_refline_from(doc["action"], "action"),
    )
    Path(args.out).write_text(render_svg(spec, RenderOptions()), encoding="utf-8")
    print(f"wrote {args.out}")
    return 0


def cmd_chart_dual(args, cfg: CliConfig) -> int:
    doc = json.loads(Path(args.infile).read_text(encoding="utf-8"))

    def axis_from(raw) -> YAxisSpec:
        return YAxisSpec(
            label=raw.get("label", ""),
            scale=raw.get("scale", "linear"),
            range=(float(raw["range"][0]), float(raw["range"][1])),
        )

    spec = dual_axis_spec(
        left=_series_from(doc["left"], "left", "left"),
        right=_series_from(doc["right"], "right", "right"),
        left_axis=axis_from(doc["left"]["axis"]),
        right_axis=axis_from(doc["right"]["axis"]),
    )
    Path(args.out).write_text(render_svg(spec, RenderOptions()), encoding="utf-8")
    print(f"wrote {args.out}")
    return 0


def cmd_recommend(args, cfg: CliConfig) -> int:
    result = recommend_program(
        NutritionInputs(
            z_wfh=args.z,
            muac_cm=args.muac,
            oedema=Oedema(args.oedema),
            recently_discharged_otp=args.discharged,
        )
    )
    if args.json:
        print(
            json.dumps(
                {
                    "program": result.program.value,
                    "reasons": list(result.reasons),
                    "advisory": result.advisory,
                },
                indent=2,
            )
        )
    else:
        print(result.program.value)
        for reason in result.reasons:
            print(f"  - {reason}")
        print(result.advisory)
    return RECOMMEND_EXIT[result.program]


def cmd_rations(args, cfg: CliConfig) -> int:
    table_path = Path(args.table) if args.table else cfg.ration_table
    if table_path is None:
        raise MedgraphError("no ration table: pass --table or set ration_table in config")
    table = parse_ration_table(Path(table_path).read_text(encoding="utf-8"))
    n = rutf_rations(args.weight, table)
    print(json.dumps({"rations": n}) if args.json else n)
    return 0


def cmd_serve(args, cfg: CliConfig) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(cfg.data_dir, ration_table_path=cfg.ration_table, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def cmd_sync(args, cfg: CliConfig) -> int:
    server = args.server or cfg.server_url
    if not server:
        raise MedgraphError("no server: pass --server or set server_url in config")
    client = SyncClient(cfg.data_dir, server_url=server)
    try:
        report = client.sync()
    except NetworkUnreachable as e:
        print(f"sync failed: {e}", file=sys.stderr)
        print(f"partial: pushed={e.report.pushed} pulled={list(e.report.pulled)}", file=sys.stderr)
        return 1
    if args.json:
        print(
            json.dumps(
                {
                    "pushed": report.pushed,
                    "pulled": list(report.pulled),
                    "unchanged": report.unchanged,
                },
                indent=2,
            )
        )
    else:
        print(f"pushed={report.pushed} pulled={list(report.pulled)} unchanged={report.unchanged}")
    return 0


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="medgraph", description=__doc__)
    parser.add_argument(
        "--data-dir",
        type=Path,
        default=None,
        help=f"data directory (default: ${ENV_DATA_DIR} or ~/.medgraph)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    standards = sub.add_parser("standards", help="manage reference datasets")
    ssub = standards.add_subparsers(dest="subcommand", required=True)
    add = ssub.add_parser("add", help="validate a CSV table and store it")
    add.add_argument("csv")
    add.add_argument("--id", default=None)
    add.add_argument("--indicator", default="custom", choices=[i.value for i in Indicator])
    add.add_argument("--sex", default="any", choices=[s.value for s in Sex])
    add.add_argument("--x-unit", default="age-days", choices=[u.value for u in XUnit])
    add.add_argument("--x-label", default="")
    add.add_argument("--y-label", default="")
    add.set_defaults(func=cmd_standards_add)
    lst = ssub.add_parser("list", help="list stored datasets with digests")
    lst.add_argument("--json", action="store_true")
    lst.set_defaults(func=cmd_standards_list)

    zs = sub.add_parser("zscore", help="decimal z-score for one measurement")
    zs.add_argument("--dataset", required=True)
    zs.add_argument("--x", type=float, required=True)
    zs.add_argument("--y", type=float, required=True)
    zs.add_argument("--palette", default=None)
    zs.add_argument("--json", action="store_true")
    zs.set_defaults(func=cmd_zscore)

    patient = sub.add_parser("patient", help="manage patients")
    psub = patient.add_subparsers(dest="subcommand", required=True)
    padd = psub.add_parser("add")
    padd.add_argument("--id", default=None)
    padd.add_argument("--name", required=True)
    padd.add_argument("--sex", required=True, choices=["female", "male"])
    padd.add_argument("--birth-date", required=True, help="ISO date, e.g. 2020-01-31")
    padd.set_defaults(func=cmd_patient_add)
    plist = psub.add_parser("list")
    plist.add_argument("--json", action="store_true")
    plist.set_defaults(func=cmd_patient_list)

    visit = sub.add_parser("visit", help="record visits")
    vsub = visit.add_subparsers(dest="subcommand", required=True)
    vadd = vsub.add_parser("add")
    vadd.add_argument("--id", default=None)
    vadd.add_argument("--patient", required=True)
    vadd.add_argument("--date", required=True, help="ISO date")
    vadd.add_argument("--weight", type=float, default=None, help="kg")
    vadd.add_argument("--height", type=float, default=None, help="cm")
    vadd.add_argument("--muac", type=float, default=None, help="cm")
    vadd.add_argument("--oedema", default=None, choices=list(rec.OEDEMA_CODES))
    vadd.add_argument("--note", default=None)
    vadd.set_defaults(func=cmd_visit_add)

    chart = sub.add_parser("chart", help="render charts to SVG")
    csub = chart.add_subparsers(dest="subcommand", required=True)
    growth = csub.add_parser("growth")
    growth.add_argument("--dataset", required=True)
    growth.add_argument("--patient", required=True)
    growth.add_argument("--palette", default=None)
    growth.add_argument("--out", required=True)
    growth.set_defaults(func=cmd_chart_growth)
    parto = csub.add_parser("partograph")
    parto.add_argument("--in", dest="infile", required=True)
    parto.add_argument("--out", required=True)
    parto.set_defaults(func=cmd_chart_partograph)
    dual = csub.add_parser("dual")
    dual.add_argument("--in", dest="infile", required=True)
    dual.add_argument("--out", required=True)
    dual.set_defaults(func=cmd_chart_dual)

    recommend = sub.add_parser("recommend", help="nutrition program recommendation")
    recommend.add_argument("--z", type=float, required=True, help="weight-for-height z")
    recommend.add_argument("--muac", type=float, required=True, help="cm")
    recommend.add_argument("--oedema", default="none", choices=[o.value for o in Oedema])
    recommend.add_argument("--discharged", action="store_true", help="recently discharged from OTP")
    recommend.add_argument("--json", action="store_true")
    recommend.set_defaults(func=cmd_recommend)

    rations = sub.add_parser("rations", help="RUTF rations for a weight")
    rations.add_argument("--weight", type=float, required=True, help="kg")
    rations.add_argument("--table", default=None, help="ration table CSV")
    rations.add_argument("--json", action="store_true")
    rations.set_defaults(func=cmd_rations)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--ui-dir", default=None, help="serve a built web UI from this directory")
    serve.set_defaults(func=cmd_serve)

    syncp = sub.add_parser("sync", help="push pending records, pull changed standards")
    syncp.add_argument("--server", default=None)
    syncp.add_argument("--json", action="store_true")
    syncp.set_defaults(func=cmd_sync)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    data_dir = args.data_dir or Path(os.environ.get(ENV_DATA_DIR, Path.home() / ".medgraph"))
    try:
        data_dir.mkdir(parents=True, exist_ok=True)
        cfg = load_config(data_dir)
        return args.func(args, cfg)
    except MedgraphError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
