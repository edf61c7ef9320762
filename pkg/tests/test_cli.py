import json

import numpy as np
import pytest

from cycbp.cli import main
from cycbp.harness import read_csv


def run(*argv):
    return main(list(argv))


class TestConstruct:
    def test_prints_parameters(self, capsys):
        assert run("construct", "BCH(7,4)") == 0
        out = capsys.readouterr().out
        assert "n=7 k=4" in out
        assert "[1, 1, 0, 1]" in out  # generator coefficients

    def test_bad_code_exit_2(self, capsys):
        assert run("construct", "BCH(7,5)") == 2


class TestTrainBenchFlow:
    def test_end_to_end(self, tmp_path, capsys):
        weights = tmp_path / "w.json"
        trace = tmp_path / "loss.csv"
        assert run("train", "BCH(15,7)", "--variant", "cyclic", "--steps", "4",
                   "--seed", "1", "-o", str(weights), "--trace", str(trace)) == 0
        assert weights.exists() and trace.exists()
        assert json.loads(weights.read_text())["code"] == "BCH(15,7)"

        out_csv = tmp_path / "bench.csv"
        assert run("bench", "BCH(15,7)", "--decoder", "cyclic",
                   "--weights", str(weights), "--snr-grid", "4", "--samples",
                   "400", "--batch", "200", "-o", str(out_csv)) == 0
        rows = read_csv(str(out_csv))
        assert len(rows) == 1 and rows[0]["decoder"] == "cyclic"

    def test_missing_weights_exit_2(self, tmp_path):
        assert run("bench", "BCH(15,7)", "--decoder", "cyclic", "--samples",
                   "100", "-o", str(tmp_path / "x.csv")) == 2

    def test_wrong_weights_exit_3(self, tmp_path):
        weights = tmp_path / "w.json"
        assert run("train", "BCH(15,7)", "--variant", "cyclic", "--steps", "2",
                   "-o", str(weights)) == 0
        assert run("bench", "BCH(15,5)", "--decoder", "cyclic",
                   "--weights", str(weights), "--samples", "100",
                   "-o", str(tmp_path / "x.csv")) == 3

    def test_config_file_with_cli_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("samples = 100\nsnr_grid = 3\nseed = 9\n")
        out_csv = tmp_path / "b.csv"
        assert run("bench", "BCH(15,7)", "--config", str(cfg),
                   "--samples", "200", "-o", str(out_csv)) == 0
        rows = read_csv(str(out_csv))
        assert rows[0]["samples"] == "200"        # CLI wins
        assert rows[0]["snr_db"] == "3.0"          # file value used


class TestListBench:
    def test_sweep(self, tmp_path):
        out_csv = tmp_path / "list.csv"
        assert run("list-bench", "BCH(15,7)", "--decoder", "vanilla",
                   "--ell-list", "1,2", "--snr-grid", "4", "--samples", "300",
                   "--batch", "150", "-o", str(out_csv)) == 0
        rows = read_csv(str(out_csv))
        assert [r["ell"] for r in rows] == ["1", "2"]


class TestDecode:
    def test_decodes_vector(self, capsys):
        llr = ",".join(["6.0"] * 15)
        assert run("decode", "BCH(15,7)", "--llr", llr) == 0
        out = capsys.readouterr().out.strip()
        assert out == "0" * 15

    def test_needs_input(self):
        assert run("decode", "BCH(15,7)") == 2

    def test_wrong_length(self):
        assert run("decode", "BCH(15,7)", "--llr", "1.0,2.0") == 2


class TestPlot:
    def test_plot_from_csv(self, tmp_path):
        bench_csv = tmp_path / "b.csv"
        assert run("bench", "BCH(15,7)", "--snr-grid", "2,4", "--samples",
                   "200", "--batch", "100", "-o", str(bench_csv)) == 0
        fig = tmp_path / "fig.svg"
        assert run("plot", str(bench_csv), "-o", str(fig)) == 0
        assert fig.exists()
