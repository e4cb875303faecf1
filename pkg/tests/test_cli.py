import json
import socket
import subprocess
import sys
import time
from pathlib import Path

import pytest

from medgraph.cli import main

DATA_DIR = Path(__file__).parent / "data"
GIRLS_CSV = DATA_DIR / "wfl-girls.csv"


@pytest.fixture
def data_dir(tmp_path, monkeypatch):
    d = tmp_path / "clinic"
    monkeypatch.setenv("MEDGRAPH_DATA_DIR", str(d))
    return d


def run(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def add_girls(capsys):
    return run(
        capsys,
        "standards", "add", str(GIRLS_CSV),
        "--id", "wfl-girls", "--indicator", "weight-for-height",
        "--sex", "female", "--x-unit", "length-cm",
    )


class TestStandardsCli:
    def test_add_prints_digest(self, data_dir, capsys):
        code, out, _ = add_girls(capsys)
        assert code == 0
        assert len(out.strip()) == 64

    def test_list_json(self, data_dir, capsys):
        add_girls(capsys)
        code, out, _ = run(capsys, "standards", "list", "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc[0]["id"] == "wfl-girls"

    def test_malformed_csv_exits_1_with_line(self, data_dir, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("x,SD2neg,SD0\n46.0,2.2,2.6\n45.0,2.1,2.5\n")
        code, _, err = run(capsys, "standards", "add", str(bad))
        assert code == 1
        assert "line 3" in err


class TestZscoreCli:
    def test_text_output(self, data_dir, capsys):
        add_girls(capsys)
        code, out, _ = run(capsys, "zscore", "--dataset", "wfl-girls", "--x", "45", "--y", "2.0")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "-2.5 yellow (-3,-2)"
        assert lines[1] == "legacy: >-3, <-2"

    def test_json_output(self, data_dir, capsys):
        add_girls(capsys)
        code, out, _ = run(
            capsys, "zscore", "--dataset", "wfl-girls", "--x", "45", "--y", "2.0",
            "--palette", "passport", "--json",
        )
        doc = json.loads(out)
        assert doc == {
            "z": -2.5,
            "z_display": "-2.5",
            "zone": "yellow",
            "band": [-3, -2],
            "legacy": [">-3", "<-2"],
        }

    def test_out_of_range_exits_1(self, data_dir, capsys):
        add_girls(capsys)
        code, _, err = run(capsys, "zscore", "--dataset", "wfl-girls", "--x", "44", "--y", "2.0")
        assert code == 1
        assert "outside dataset range" in err


class TestRecommendCli:
    def test_sfp_exit_10(self, data_dir, capsys):
        code, out, _ = run(capsys, "recommend", "--z", "-2.5", "--muac", "12.0", "--oedema", "none")
        assert code == 10
        assert out.startswith("SFP")

    def test_otp_exit_20(self, data_dir, capsys):
        code, out, _ = run(capsys, "recommend", "--z", "-1", "--muac", "11.0")
        assert code == 20
        assert out.startswith("OTP")

    def test_none_exit_0(self, data_dir, capsys):
        code, out, _ = run(capsys, "recommend", "--z", "-1", "--muac", "13.0", "--json")
        assert code == 0
        assert json.loads(out)["program"] == "NONE"
        assert json.loads(out)["reasons"] == []


class TestRationsCli:
    def test_lookup(self, data_dir, capsys):
        code, out, _ = run(
            capsys, "rations", "--weight", "7.1", "--table", str(DATA_DIR / "rations.sample.csv")
        )
        assert code == 0
        assert out.strip() == "3"

    def test_json(self, data_dir, capsys):
        code, out, _ = run(
            capsys, "rations", "--weight", "5.0", "--table", str(DATA_DIR / "rations.sample.csv"),
            "--json",
        )
        assert json.loads(out) == {"rations": 2}

    def test_out_of_table_exits_1(self, data_dir, capsys):
        code, _, err = run(
            capsys, "rations", "--weight", "2.0", "--table", str(DATA_DIR / "rations.sample.csv")
        )
        assert code == 1
        assert "outside table" in err


class TestRecordsCli:
    def test_patient_visit_chart_flow(self, data_dir, capsys, tmp_path):
        add_girls(capsys)
        code, out, _ = run(
            capsys, "patient", "add", "--name", "Mary", "--sex", "female",
            "--birth-date", "2020-01-01",
        )
        assert code == 0
        pid = out.strip()
        for day, w, h in (("2020-02-01", 2.3, 45.5), ("2020-03-01", 2.4, 46.0), ("2020-04-01", 2.6, 46.5)):
            code, _, _ = run(
                capsys, "visit", "add", "--patient", pid, "--date", day,
                "--weight", str(w), "--height", str(h),
            )
            assert code == 0
        svg_path = tmp_path / "chart.svg"
        code, out, _ = run(
            capsys, "chart", "growth", "--dataset", "wfl-girls", "--patient", pid,
            "--out", str(svg_path),
        )
        assert code == 0
        svg = svg_path.read_text()
        assert svg.count('class="point"') == 3

    def test_patient_list_json(self, data_dir, capsys):
        run(capsys, "patient", "add", "--name", "A", "--sex", "male", "--birth-date", "2021-05-01")
        code, out, _ = run(capsys, "patient", "list", "--json")
        doc = json.loads(out)
        assert doc[0]["name"] == "A"


class TestChartInputFiles:
    def test_partograph_from_json(self, data_dir, capsys, tmp_path):
        doc = {
            "heart": {"points": [[0, 140], [8, 150]]},
            "cervix": {"points": [[0, 2], [8, 9]]},
            "descent": {"points": [[0, 4], [8, 1]]},
            "contractions": {"points": [[0, 3], [8, 4]]},
            "alert": {"start": [0, 4], "end": [8, 12]},
            "action": {"start": [4, 4], "end": [12, 12]},
        }
        infile = tmp_path / "parto.json"
        infile.write_text(json.dumps(doc))
        out_path = tmp_path / "parto.svg"
        code, _, _ = run(capsys, "chart", "partograph", "--in", str(infile), "--out", str(out_path))
        assert code == 0
        assert out_path.read_text().count('class="x-tick-labels"') == 1

    def test_dual_from_json(self, data_dir, capsys, tmp_path):
        doc = {
            "left": {
                "name": "lymphocytes",
                "points": [[0, 1200], [52, 900]],
                "axis": {"label": "cells", "scale": "linear", "range": [0, 2000]},
            },
            "right": {
                "name": "viral load",
                "points": [[0, 50000], [52, 400]],
                "axis": {"label": "copies/ml", "scale": "log10", "range": [10, 100000]},
            },
        }
        infile = tmp_path / "dual.json"
        infile.write_text(json.dumps(doc))
        out_path = tmp_path / "dual.svg"
        code, _, _ = run(capsys, "chart", "dual", "--in", str(infile), "--out", str(out_path))
        assert code == 0
        assert "1e5" in out_path.read_text()

    def test_degenerate_alert_line_exits_1(self, data_dir, capsys, tmp_path):
        doc = {
            "heart": {"points": [[0, 140], [8, 150]]},
            "cervix": {"points": [[0, 2], [8, 9]]},
            "descent": {"points": [[0, 4], [8, 1]]},
            "contractions": {"points": [[0, 3], [8, 4]]},
            "alert": {"start": [1, 1], "end": [1, 1]},
            "action": {"start": [4, 4], "end": [12, 12]},
        }
        infile = tmp_path / "parto.json"
        infile.write_text(json.dumps(doc))
        code, _, err = run(capsys, "chart", "partograph", "--in", str(infile), "--out", str(tmp_path / "x.svg"))
        assert code == 1
        assert "equal endpoints" in err


class TestConfigFile:
    def test_palette_default_from_config(self, data_dir, capsys):
        add_girls(capsys)
        data_dir.mkdir(parents=True, exist_ok=True)
        (data_dir / "config").write_text("palette=who\n")
        _, out, _ = run(capsys, "zscore", "--dataset", "wfl-girls", "--x", "45", "--y", "2.0", "--json")
        assert json.loads(out)["zone"] == "red"  # who palette: |z|=2.5 is red

    def test_unknown_palette_errors(self, data_dir, capsys):
        add_girls(capsys)
        code, _, err = run(
            capsys, "zscore", "--dataset", "wfl-girls", "--x", "45", "--y", "2.0",
            "--palette", "neon",
        )
        assert code == 1
        assert "unknown palette" in err


def free_port() -> int:
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


class TestSyncCli:
    def test_sync_against_live_server(self, data_dir, capsys, tmp_path, monkeypatch):
        server_dir = tmp_path / "server"
        port = free_port()
        env = {"MEDGRAPH_DATA_DIR": str(server_dir), "PATH": "/usr/bin:/bin:/usr/local/bin"}
        subprocess.run(
            [sys.executable, "-m", "medgraph.cli", "standards", "add", str(GIRLS_CSV),
             "--id", "wfl-girls", "--indicator", "weight-for-height",
             "--sex", "female", "--x-unit", "length-cm"],
            check=True, env=env, capture_output=True,
        )
        proc = subprocess.Popen(
            [sys.executable, "-m", "medgraph.cli", "serve", "--port", str(port)],
            env=env, stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL,
        )
        try:
            import httpx

            for _ in range(100):
                try:
                    if httpx.get(f"http://127.0.0.1:{port}/api/standards").status_code == 200:
                        break
                except httpx.TransportError:
                    time.sleep(0.1)
            else:
                pytest.fail("server never came up")

            code, out, _ = run(capsys, "sync", "--server", f"http://127.0.0.1:{port}")
            assert code == 0
            assert "pulled=['wfl-girls']" in out
            code, out, _ = run(capsys, "sync", "--server", f"http://127.0.0.1:{port}", "--json")
            assert json.loads(out) == {"pushed": 0, "pulled": [], "unchanged": 1}
        finally:
            proc.terminate()
            proc.wait(timeout=10)

    def test_sync_unreachable_exits_1(self, data_dir, capsys):
        code, _, err = run(capsys, "sync", "--server", "http://127.0.0.1:1")
        assert code == 1
        assert "sync failed" in err

    def test_sync_without_server_config_errors(self, data_dir, capsys):
        code, _, err = run(capsys, "sync")
        assert code == 1
        assert "no server" in err
