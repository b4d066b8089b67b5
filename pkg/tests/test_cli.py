import json
import xml.dom.minidom

import numpy as np
import pytest

from volsplit.cli import main
from volsplit.datasets import read_csv


def run(tmp_path, *argv, sub=None):
    out = tmp_path / (sub or "out")
    code = main([*argv, "--out", str(out)])
    return code, out


class TestClusterCommand:
    def test_iris_run(self, iris_path, tmp_path, capsys):
        code, out = run(tmp_path, "cluster", "--iris", str(iris_path), "--seed", "1")
        assert code == 0
        doc = json.loads((out / "labels.json").read_text())
        assert doc["k"] == 3
        assert sorted((np.bincount(doc["labels"])[np.unique(doc["labels"])])) == [45, 50, 55]
        summary = (out / "summary.txt").read_text()
        assert "k = 3" in summary
        assert "adjusted_rand_vs_truth" in summary

    def test_csv_input(self, tmp_path, rng):
        x = np.vstack([rng.standard_normal((60, 2)) - 8, rng.standard_normal((60, 2)) + 8])
        src = tmp_path / "data.csv"
        np.savetxt(src, x, delimiter=",")
        code, out = run(tmp_path, "cluster", str(src), "--seed", "0")
        assert code == 0
        assert json.loads((out / "labels.json").read_text())["k"] == 2

    def test_missing_input_exits_2(self, tmp_path):
        code, _ = run(tmp_path, "cluster", str(tmp_path / "nope.csv"))
        assert code == 2

    def test_no_input_exits_2(self, tmp_path):
        code, _ = run(tmp_path, "cluster")
        assert code == 2

    def test_plot_writes_valid_svg(self, iris_path, tmp_path):
        code, out = run(tmp_path, "cluster", "--iris", str(iris_path), "--plot")
        assert code == 0
        xml.dom.minidom.parse(str(out / "scatter.svg"))

    def test_thresholds_forwarded(self, iris_path, tmp_path):
        code, out = run(
            tmp_path, "cluster", "--iris", str(iris_path), "--tau-s", "-1.0", sub="strict"
        )
        assert code == 0
        # a negative split threshold rejects everything, so one cluster
        assert json.loads((out / "labels.json").read_text())["k"] == 1


class TestKmeansCommand:
    def test_simulated_run_reports_ari(self, tmp_path, capsys):
        code, out = run(
            tmp_path, "kmeans", "--simulate", "logistic5", "--n", "50", "--k", "5", "--seed", "1"
        )
        assert code == 0
        assert "adjusted_rand_vs_truth" in (out / "summary.txt").read_text()
        doc = json.loads((out / "labels.json").read_text())
        assert len(doc["labels"]) == 250
        assert len(doc["centroids"]) == 5

    def test_k_exceeding_n_exits_2(self, tmp_path):
        src = tmp_path / "tiny.csv"
        src.write_text("0,0\n1,1\n")
        code, _ = run(tmp_path, "kmeans", str(src), "--k", "5")
        assert code == 2


class TestKdeCommand:
    def test_sech2_with_truth(self, tmp_path):
        code, out = run(
            tmp_path, "kde", "--simulate", "sech2", "--n", "1000", "--seed", "3",
            "--true-density", "sech2",
        )
        assert code == 0
        summary = (out / "summary.txt").read_text()
        assert "mixture_better = True" in summary
        curves = read_csv(out / "curves.csv", has_header=True)
        assert curves.shape == (2048, 3)
        assert np.all(np.diff(curves[:, 0]) > 0)
        doc = json.loads((out / "model.json").read_text())
        assert doc["kernel"] == "gaussian"
        assert len(doc["segments"]) == 2

    def test_no_split_single_segment(self, tmp_path):
        code, out = run(
            tmp_path, "kde", "--simulate", "sech2", "--n", "500", "--no-split", sub="nosplit"
        )
        assert code == 0
        doc = json.loads((out / "model.json").read_text())
        assert len(doc["segments"]) == 1
        curves = read_csv(out / "curves.csv", has_header=True)
        assert np.allclose(curves[:, 1], curves[:, 2])

    def test_multicolumn_input_exits_2(self, tmp_path, rng, capsys):
        src = tmp_path / "wide.csv"
        np.savetxt(src, rng.standard_normal((50, 3)), delimiter=",")
        code, _ = run(tmp_path, "kde", str(src))
        assert code == 2
        assert "1-D" in capsys.readouterr().err

    def test_plot_writes_valid_svg(self, tmp_path):
        code, out = run(
            tmp_path, "kde", "--simulate", "sech2", "--n", "500", "--plot", sub="plot"
        )
        assert code == 0
        xml.dom.minidom.parse(str(out / "curves.svg"))


class TestVerifyCommand:
    def test_ball_cov_suite_passes(self, tmp_path):
        code, out = run(tmp_path, "verify", "ball-cov", "--seed", "0")
        assert code == 0
        doc = json.loads((out / "report.json").read_text())
        assert doc["violations"] == 0
        assert len(doc["reports"]) == 3

    def test_subadditivity_suite(self, tmp_path):
        code, out = run(tmp_path, "verify", "subadditivity", "--trials", "900")
        assert code == 0
        doc = json.loads((out / "report.json").read_text())
        assert {r["name"] for r in doc["reports"]} == {"subadditivity"}

    def test_unknown_suite_exits_2(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "bogus", "--out", str(tmp_path)])
        assert exc.value.code == 2


class TestSimulateCommand:
    def test_logistic5_files(self, tmp_path):
        code, out = run(tmp_path, "simulate", "logistic5", "--n", "30", "--seed", "2")
        assert code == 0
        data = read_csv(out / "data.csv")
        labels = read_csv(out / "labels.csv")
        assert data.shape == (150, 2)
        assert labels.shape == (150, 1)

    def test_sech2_roundtrip(self, tmp_path):
        code, out = run(tmp_path, "simulate", "sech2", "--n", "40", "--seed", "2")
        assert code == 0
        data = read_csv(out / "data.csv")
        assert data.shape == (40, 1)

    def test_simulated_csv_feeds_kde(self, tmp_path):
        _, out = run(tmp_path, "simulate", "sech2", "--n", "500", sub="gen")
        code, _ = run(tmp_path, "kde", str(out / "data.csv"), sub="fit")
        assert code == 0
