from __future__ import annotations

import csv
import json

import pytest

from fronthaul.cli import EXIT_CONFIG, EXIT_IO, EXIT_OK, EXIT_TRACE, main
from fronthaul.config import reference_scenario_path

CONFIG = str(reference_scenario_path())


def write_config(tmp_path, mutate):
    doc = json.loads(reference_scenario_path().read_text())
    mutate(doc)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(doc))
    return str(path)


def read_csv(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


@pytest.fixture(scope="module")
def synth_trace(tmp_path_factory):
    path = tmp_path_factory.mktemp("synth") / "day.csv"
    assert main(["synth", "-o", str(path)]) == EXIT_OK
    return path


@pytest.fixture(scope="module")
def sbt_run(synth_trace, tmp_path_factory):
    out = tmp_path_factory.mktemp("sbt")
    assert main(["simulate", CONFIG, str(synth_trace), "-o", str(out)]) == EXIT_OK
    return out


class TestRate:
    def test_text_output(self, capsys):
        assert main(["rate", CONFIG]) == EXIT_OK
        out = capsys.readouterr().out
        assert "22.7 Gbps" in out and "0.573 Gbps" in out and "23.3 Gbps" in out and "6.90 Gbps" in out

    def test_json_output(self, capsys):
        assert main(["rate", CONFIG, "--json"]) == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["radio_access_bps"] == 22_708_224_000
        assert doc["bf_control_bps"] == 573_440_000
        assert doc["access_capacity_bps"] == 6_895_494_144

    def test_invalid_modulation_order(self, tmp_path, capsys):
        path = write_config(tmp_path, lambda d: d["cell"].update(q_m=7))
        assert main(["rate", path]) == EXIT_CONFIG
        assert "q_m" in capsys.readouterr().err

    def test_fdd_symmetric_doubles_radio_rate(self, tmp_path, capsys):
        def fdd(doc):
            up = {k: v for k, v in doc["cell"].items() if not k.startswith("_")}
            doc["cell"].update(duplex="fdd", uplink=up)
        assert main(["rate", write_config(tmp_path, fdd), "--json"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["radio_access_bps"] == 2 * 22_708_224_000

    def test_unknown_field(self, tmp_path, capsys):
        path = write_config(tmp_path, lambda d: d["cell"].update(n_antennas=4))
        assert main(["rate", path]) == EXIT_CONFIG
        assert "n_antennas" in capsys.readouterr().err

    def test_missing_config(self, tmp_path):
        assert main(["rate", str(tmp_path / "nope.json")]) == EXIT_IO

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{")
        assert main(["rate", str(path)]) == EXIT_CONFIG


class TestSimulate:
    def test_writes_three_files(self, sbt_run):
        assert sorted(p.name for p in sbt_run.iterdir()) == ["decisions.csv", "summary.json", "timeseries.csv"]

    def test_row_count(self, sbt_run):
        assert len(read_csv(sbt_run / "timeseries.csv")) == 86400
        assert len(read_csv(sbt_run / "decisions.csv")) == 86400

    def test_summary_recomputable(self, sbt_run):
        rows = read_csv(sbt_run / "timeseries.csv")
        summary = json.loads((sbt_run / "summary.json").read_text())
        n = len(rows)
        outage = sum(int(r["outage"]) for r in rows) / n
        mean_access = sum(float(r["access_bps"]) for r in rows) / n
        util = [float(r["utilization"]) for r in rows]
        assert summary["samples"] == n
        assert summary["outage_fraction"] == pytest.approx(outage, abs=1e-6)
        assert summary["mean_access_bps"] == pytest.approx(mean_access, rel=1e-6)
        assert summary["mean_utilization"] == pytest.approx(sum(util) / n, abs=1e-6)
        assert sum(a["fraction"] for a in summary["capacity_availability"]) == pytest.approx(1.0)

    def test_utilization_range(self, sbt_run):
        util = [float(r["utilization"]) for r in read_csv(sbt_run / "timeseries.csv")]
        assert max(util) == 1.0
        assert min(util) == pytest.approx(75 / 132) == pytest.approx(0.568, abs=1e-3)

    def test_none_strategy_has_outage(self, synth_trace, tmp_path):
        assert main(["simulate", CONFIG, str(synth_trace), "-o", str(tmp_path), "--strategy", "none"]) == EXIT_OK
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["strategy"]["kind"] == "none"
        assert summary["outage_fraction"] > 0

    def test_missing_trace_writes_nothing(self, tmp_path):
        out = tmp_path / "out"
        assert main(["simulate", CONFIG, str(tmp_path / "missing.csv"), "-o", str(out)]) == EXIT_IO
        assert not out.exists()

    def test_bad_trace(self, tmp_path):
        trace = tmp_path / "t.csv"
        trace.write_text("t,rain_db_per_km\n0,1\n1,oops\n")
        out = tmp_path / "out"
        assert main(["simulate", CONFIG, str(trace), "-o", str(out)]) == EXIT_TRACE
        assert not out.exists()

    def test_byte_identical_reruns(self, tmp_path):
        trace = tmp_path / "t.csv"
        assert main(["synth", "-o", str(trace), "--duration", "3600", "--event-start", "600",
                     "--event-duration", "1800"]) == EXIT_OK
        for name in ("a", "b"):
            assert main(["simulate", CONFIG, str(trace), "-o", str(tmp_path / name), "--strategy", "cr"]) == EXIT_OK
        for f in ("summary.json", "timeseries.csv", "decisions.csv"):
            assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


@pytest.fixture(scope="module")
def rows(tmp_path_factory):
    path = tmp_path_factory.mktemp("sweep") / "sweep.csv"
    assert main(["sweep", CONFIG, "-o", str(path)]) == EXIT_OK
    return read_csv(path)


class TestSweep:
    def test_grid(self, rows):
        assert len(rows) == 301
        assert float(rows[0]["capacity_bps"]) == 0 and float(rows[-1]["capacity_bps"]) == 30e9

    def test_sbt_dominates_cr(self, rows):
        for r in rows:
            assert float(r["sbt_access_bps"]) >= float(r["cr_access_bps"])

    def test_monotone_columns(self, rows):
        for col in ("cr_access_bps", "sbt_access_bps", "sbt_active_rb"):
            vals = [float(r[col]) for r in rows]
            assert vals == sorted(vals), col

    def test_full_rate_row(self, rows):
        row = next(r for r in rows if float(r["capacity_bps"]) == 23.3e9)
        assert float(row["cr_access_bps"]) == pytest.approx(6.90e9, abs=0.01e9)
        assert float(row["sbt_access_bps"]) == pytest.approx(6.90e9, abs=0.01e9)

    def test_zero_row(self, rows):
        assert float(rows[0]["cr_access_bps"]) == 0 and float(rows[0]["sbt_access_bps"]) == 0

    def test_stdout(self, capsys):
        assert main(["sweep", CONFIG, "--start", "20", "--stop", "21", "--step", "0.5"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 4 and lines[0].startswith("capacity_bps,")

    @pytest.mark.parametrize("args", [["--start", "5", "--stop", "1"], ["--step", "0"], ["--start", "-1"]])
    def test_bad_range(self, args):
        assert main(["sweep", CONFIG, *args]) == EXIT_CONFIG


class TestSynth:
    def test_defaults(self, synth_trace):
        rows = read_csv(synth_trace)
        assert len(rows) == 86400
        peak = max(rows, key=lambda r: float(r["rain_mm_h"]))
        assert float(peak["rain_mm_h"]) == pytest.approx(34.0)
        assert float(peak["t"]) == 9 * 3600 + 1800

    def test_zero_peak(self, tmp_path):
        path = tmp_path / "z.csv"
        assert main(["synth", "-o", str(path), "--duration", "600", "--peak", "0"]) == EXIT_OK
        assert all(float(r["rain_db_per_km"]) == 0 for r in read_csv(path))

    def test_negative_duration(self, tmp_path):
        assert main(["synth", "-o", str(tmp_path / "x.csv"), "--duration", "-1"]) != EXIT_OK
        assert not (tmp_path / "x.csv").exists()

    def test_usage_error(self):
        with pytest.raises(SystemExit) as err:
            main(["synth"])
        assert err.value.code == 2
