import csv
import json
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from marketeff import kernels
from marketeff.cli import EXIT_OK, EXIT_PARTIAL, EXIT_USAGE, main
from marketeff.hurst import dfa_combined
from marketeff.series import log_returns, read_price_csv

GOLDEN = Path(__file__).parent / "data" / "golden"
GOLDEN_FILES = ["ranking.csv", "shares.csv", "hurst.csv", "fractal.csv", "dh_scatter.csv", "dh_fit.csv"] + [
    f"reports/{p.name}" for p in sorted((GOLDEN / "expected" / "reports").glob("*.json"))
]
GOLDEN_BACKEND = json.loads((GOLDEN / "expected" / "summary.json").read_text())["kernel_backend"]


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def synth(out, ticker, h=0.5, seed=1, length=1024):
    assert main(["synth", "--hurst", str(h), "--seed", str(seed), "--length", str(length), "--ticker", ticker,
                 "--out", str(out)]) == EXIT_OK
    return out / f"{ticker}.csv"


def numbers_close(a, b, rtol):
    if isinstance(a, dict):
        return a.keys() == b.keys() and all(numbers_close(a[k], b[k], rtol) for k in a)
    if isinstance(a, list):
        return len(a) == len(b) and all(numbers_close(x, y, rtol) for x, y in zip(a, b))
    if isinstance(a, float) or isinstance(b, float):
        return math.isclose(a, b, rel_tol=rtol, abs_tol=1e-14)
    return a == b


def csv_close(a: Path, b: Path, rtol):
    ra, rb = a.read_text().splitlines(), b.read_text().splitlines()
    if len(ra) != len(rb) or ra[0] != rb[0]:
        return False
    for x, y in zip(ra[1:], rb[1:]):
        cells = list(zip(x.split(","), y.split(",")))
        for u, v in cells:
            try:
                if not math.isclose(float(u), float(v), rel_tol=rtol, abs_tol=1e-14):
                    return False
            except ValueError:
                if u != v:
                    return False
    return True


class TestGolden:
    def test_matches_frozen_outputs(self, tmp_path):
        assert main(["analyze", str(GOLDEN / "inputs"), "--out", str(tmp_path)]) == EXIT_OK
        for name in GOLDEN_FILES:
            got, want = tmp_path / name, GOLDEN / "expected" / name
            if kernels.BACKEND == GOLDEN_BACKEND:
                assert got.read_bytes() == want.read_bytes(), name
            elif name.endswith(".json"):
                assert numbers_close(json.loads(got.read_text()), json.loads(want.read_text()), 1e-9), name
            else:
                assert csv_close(got, want, 1e-9), name

    def test_repeat_and_workers_identical(self, tmp_path):
        outs = []
        for i, workers in enumerate(["1", "1", "3"]):
            out = tmp_path / f"run{i}"
            assert main(["analyze", str(GOLDEN / "inputs"), "--out", str(out), "--workers", workers]) == EXIT_OK
            outs.append(out)
        for name in GOLDEN_FILES + ["summary.json"]:
            first = (outs[0] / name).read_bytes()
            assert all((o / name).read_bytes() == first for o in outs[1:]), name


class TestAnalyze:
    def test_plot_data_recomputable_from_reports(self, tmp_path):
        out = tmp_path / "out"
        assert main(["analyze", str(GOLDEN / "inputs"), "--out", str(out)]) == EXIT_OK
        reports = {p.stem: json.loads(p.read_text()) for p in (out / "reports").glob("*.json")}
        ranking = read_rows(out / "ranking.csv")
        assert [r["ticker"] for r in ranking] == sorted(reports, key=lambda t: (reports[t]["ei"], t))
        for row in ranking:
            assert float(row["ei"]) == reports[row["ticker"]]["ei"]
        for row in read_rows(out / "shares.csv"):
            rep = reports[row["ticker"]]
            assert (float(row["local_share"]), float(row["global_share"])) == (rep["local_share"], rep["global_share"])
        for row in read_rows(out / "dh_scatter.csv"):
            rep = reports[row["ticker"]]
            hs = [rep["estimates"][n]["clamped"] for n in ("H_DFA", "H_DMA", "H_HHCA")]
            ds = [rep["estimates"][n]["clamped"] for n in ("D_P", "D_W", "D_G", "D_HW")]
            assert float(row["mean_h"]) == pytest.approx(np.mean(hs), abs=1e-15)
            assert float(row["mean_d"]) == pytest.approx(np.mean(ds), abs=1e-15)
        h = [float(r["mean_h"]) for r in read_rows(out / "dh_scatter.csv")]
        d = [float(r["mean_d"]) for r in read_rows(out / "dh_scatter.csv")]
        fit = read_rows(out / "dh_fit.csv")[0]
        slope, intercept = np.polyfit(h, d, 1)
        assert float(fit["slope"]) == pytest.approx(slope, rel=1e-9)
        assert float(fit["intercept"]) == pytest.approx(intercept, rel=1e-9)

    def test_headers(self, tmp_path):
        assert main(["analyze", str(GOLDEN / "inputs"), "--out", str(tmp_path)]) == EXIT_OK
        expected = {
            "ranking.csv": "ticker,ei",
            "hurst.csv": "ticker,mean_h",
            "fractal.csv": "ticker,mean_d",
            "dh_scatter.csv": "ticker,mean_h,mean_d",
            "dh_fit.csv": "slope,intercept,r2",
            "shares.csv": "ticker,local_share,global_share",
        }
        for name, header in expected.items():
            assert (tmp_path / name).read_text().splitlines()[0] == header
        rep = json.loads((tmp_path / "reports" / "ALPHA.json").read_text())
        assert {"ticker", "t", "ei", "local_share", "global_share", "estimates", "scaling_points", "stats",
                "kpss"} <= set(rep)
        assert set(rep["kpss"]) == {"statistic", "bandwidth", "verdict"}

    def test_empty_directory(self, tmp_path, capsys):
        (tmp_path / "empty").mkdir()
        assert main(["analyze", str(tmp_path / "empty"), "--out", str(tmp_path / "o")]) == EXIT_USAGE
        assert "no input" in capsys.readouterr().err

    def test_missing_input(self, tmp_path):
        assert main(["analyze", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "o")]) == EXIT_USAGE

    def test_single_ticker(self, tmp_path):
        src = synth(tmp_path / "in", "ONLY")
        out = tmp_path / "out"
        assert main(["analyze", str(src), "--out", str(out)]) == EXIT_OK
        assert len(read_rows(out / "ranking.csv")) == 1
        assert read_rows(out / "dh_fit.csv")[0] == {"slope": "NA", "intercept": "NA", "r2": "NA"}
        summary = json.loads((out / "summary.json").read_text())
        assert summary["dh_regression"] is None
        assert "at least 3" in summary["dh_regression_unavailable"]

    def test_malformed_csv_names_row(self, tmp_path):
        inp = tmp_path / "in"
        synth(inp, "GOOD")
        (inp / "BAD.csv").write_text("date,close\n2020-01-01,1.0\n2020-01-02,oops\n")
        out = tmp_path / "out"
        assert main(["analyze", str(inp), "--out", str(out)]) == EXIT_PARTIAL
        summary = json.loads((out / "summary.json").read_text())
        assert "row 3" in summary["failures"]["BAD"]
        assert summary["tickers"] == ["GOOD"]

    def test_all_fail(self, tmp_path):
        inp = tmp_path / "in"
        inp.mkdir()
        (inp / "FLAT.csv").write_text("date,close\n" + "".join(f"2020-01-{d:02d},5\n" for d in range(1, 29)))
        out = tmp_path / "out"
        assert main(["analyze", str(inp), "--out", str(out)]) == EXIT_PARTIAL
        assert "H_DFA" in json.loads((out / "summary.json").read_text())["failures"]["FLAT"]
        assert read_rows(out / "ranking.csv") == []

    def test_formats_toggle(self, tmp_path):
        assert main(["analyze", str(GOLDEN / "inputs"), "--out", str(tmp_path), "--formats", "json"]) == EXIT_OK
        assert (tmp_path / "reports").is_dir()
        assert not (tmp_path / "ranking.csv").exists()

    def test_estimator_flag_changes_output(self, tmp_path):
        src = GOLDEN / "inputs" / "ALPHA.csv"
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["analyze", str(src), "--out", str(a)]) == EXIT_OK
        assert main(["analyze", str(src), "--out", str(b), "--kpss-bandwidth", "3"]) == EXIT_OK
        ka = json.loads((a / "reports" / "ALPHA.json").read_text())["kpss"]
        kb = json.loads((b / "reports" / "ALPHA.json").read_text())["kpss"]
        assert kb["bandwidth"] == 3 and ka["bandwidth"] == 8
        assert ka["statistic"] != kb["statistic"]


class TestConfig:
    def test_file_then_flag_precedence(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# overrides\nkpss_bandwidth = 2\ndfa-s-min = 6\nformats = csv,json\n")
        src = GOLDEN / "inputs" / "BRAVO.csv"
        out = tmp_path / "out"
        assert main(["analyze", str(src), "--config", str(cfg), "--out", str(out), "--kpss_bandwidth", "5"]) == 0
        summary = json.loads((out / "summary.json").read_text())
        assert summary["estimator_config"]["kpss_bandwidth"] == 5
        assert summary["estimator_config"]["dfa_s_min"] == 6

    def test_config_supplies_inputs_and_out(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(f"inputs = {GOLDEN / 'inputs' / 'ECHO.csv'}\nout = {tmp_path / 'o'}\n")
        assert main(["analyze", "--config", str(cfg)]) == EXIT_OK
        assert (tmp_path / "o" / "reports" / "ECHO.json").exists()

    @pytest.mark.parametrize("line", ["bogus_key = 1", "dma_window_min = 4", "periodogram_exponent = 1.5",
                                      "workers = 0", "no equals sign"])
    def test_bad_config(self, tmp_path, line):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text(line + "\n")
        assert main(["analyze", str(GOLDEN / "inputs"), "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2

    def test_fraction_value(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("periodogram_exponent = 3/5\n")
        out = tmp_path / "o"
        assert main(["analyze", str(GOLDEN / "inputs" / "ALPHA.csv"), "--config", str(cfg), "--out", str(out)]) == 0
        assert json.loads((out / "summary.json").read_text())["estimator_config"]["periodogram_exponent"] == 0.6


class TestSynth:
    def test_twice_identical(self, tmp_path):
        a = synth(tmp_path / "a", "X", seed=42)
        b = synth(tmp_path / "b", "X", seed=42)
        assert a.read_bytes() == b.read_bytes()

    def test_default_ticker_and_format(self, tmp_path):
        assert main(["synth", "--kind", "ar1", "--phi", "0.2", "--length", "300", "--out", str(tmp_path)]) == 0
        path = tmp_path / "ar10.2_s0.csv"
        lines = path.read_text().splitlines()
        assert lines[0] == "date,close" and len(lines) == 302
        assert lines[1] == "2000-01-01,1.0"

    def test_near_one_hurst_generates(self, tmp_path):
        # the fGn embedding stays non-negative definite for every H < 1
        assert main(["synth", "--hurst", "0.99", "--length", "256", "--out", str(tmp_path)]) == EXIT_OK

    @pytest.mark.parametrize("args", [["--hurst", "1.2"], ["--kind", "ar1"], ["--kind", "ar1", "--phi", "1.0"],
                                      ["--seed", "-1"], ["--sigma", "0"], ["--length", "1"]])
    def test_parameter_errors_reported(self, tmp_path, capsys, args):
        assert main(["synth", "--out", str(tmp_path), *args]) == EXIT_USAGE
        assert capsys.readouterr().err.startswith("marketeff: error:")

    @pytest.mark.slow
    def test_round_trip_recovers_h(self, tmp_path):
        src = synth(tmp_path, "RT", h=0.7, seed=3, length=10000)
        est = dfa_combined(log_returns(read_price_csv(src))).h_raw
        assert est == pytest.approx(0.7, abs=0.07)
        assert main(["analyze", str(src), "--out", str(tmp_path / "o")]) == EXIT_OK


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "marketeff", "synth", "--length", "100", "--out", str(tmp_path)],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert Path(res.stdout.strip()).exists()


def test_argparse_usage_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
