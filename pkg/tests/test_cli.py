import json

import pytest

from choicefactor.cli import main


def run(argv):
    try:
        return main(argv)
    except SystemExit as exc:  # argparse usage errors
        return exc.code


def gen_args(out_dir, seed=7):
    return [
        "generate",
        "--choices", "5",
        "--attributes", "2",
        "--seed", str(seed),
        "--out", str(out_dir),
    ]


class TestGenerate:
    def test_writes_truth(self, tmp_path, capsys):
        assert run(gen_args(tmp_path)) == 0
        obj = json.loads((tmp_path / "truth.json").read_text())
        assert obj["K"] == 5 and obj["L"] == 2
        assert obj["P"]["rows"] == 4
        assert "M=4" in capsys.readouterr().out

    def test_identical_bytes(self, tmp_path):
        d1, d2 = tmp_path / "a", tmp_path / "b"
        assert run(gen_args(d1)) == 0
        assert run(gen_args(d2)) == 0
        assert (d1 / "truth.json").read_bytes() == (d2 / "truth.json").read_bytes()

    def test_invalid_attributes(self, tmp_path):
        argv = gen_args(tmp_path)
        argv[argv.index("--attributes") + 1] = "-1"
        assert run(argv) == 2

    def test_missing_flag_usage_error(self, tmp_path):
        assert run(["generate", "--choices", "5"]) == 2


class TestSample:
    @pytest.fixture
    def truth_file(self, tmp_path):
        run(gen_args(tmp_path))
        return tmp_path / "truth.json"

    def sample_args(self, truth_file, out, samples="100", bins="5"):
        return [
            "sample",
            "--truth", str(truth_file),
            "--samples", samples,
            "--bins", bins,
            "--seed", "3",
            "--out", str(out),
        ]

    def test_even_split(self, tmp_path, truth_file):
        out = tmp_path / "dataset.json"
        assert run(self.sample_args(truth_file, out)) == 0
        obj = json.loads(out.read_text())
        assert obj["N"] == 5 and obj["C"] == 100
        assert len(obj["bins"]) == 5

    def test_uneven_split(self, tmp_path, truth_file, capsys):
        out = tmp_path / "dataset.json"
        assert run(self.sample_args(truth_file, out, samples="7")) == 2
        assert "divisible" in capsys.readouterr().err

    def test_determinism(self, tmp_path, truth_file):
        o1, o2 = tmp_path / "d1.json", tmp_path / "d2.json"
        run(self.sample_args(truth_file, o1))
        run(self.sample_args(truth_file, o2))
        assert o1.read_bytes() == o2.read_bytes()

    def test_missing_truth(self, tmp_path):
        out = tmp_path / "dataset.json"
        assert run(self.sample_args(tmp_path / "nope.json", out)) == 1


class TestEstimate:
    @pytest.fixture
    def files(self, tmp_path):
        run(gen_args(tmp_path))
        truth = tmp_path / "truth.json"
        dataset = tmp_path / "dataset.json"
        run([
            "sample",
            "--truth", str(truth),
            "--samples", "100",
            "--bins", "5",
            "--seed", "3",
            "--out", str(dataset),
        ])
        return truth, dataset

    def test_zero_variance_data(self, tmp_path, files):
        truth, dataset = files
        # rewrite dataset so every bin is the exact product matrix
        t = json.loads(truth.read_text())
        d = json.loads(dataset.read_text())
        d["bins"] = [t["P"]] * d["N"]
        dataset.write_text(json.dumps(d))
        out = tmp_path / "estimates.json"
        assert run(["estimate", "--dataset", str(dataset), "--out", str(out)]) == 0
        assert json.loads(out.read_text())["avg_deviation"] <= 1e-8

    def test_without_truth_no_metrics(self, tmp_path, files):
        _, dataset = files
        out = tmp_path / "estimates.json"
        assert run(["estimate", "--dataset", str(dataset), "--out", str(out)]) == 0
        assert out.exists()
        assert not (tmp_path / "metrics.json").exists()

    def test_with_truth_writes_metrics(self, tmp_path, files):
        truth, dataset = files
        out = tmp_path / "estimates.json"
        metrics = tmp_path / "m.json"
        assert run([
            "estimate",
            "--dataset", str(dataset),
            "--truth", str(truth),
            "--out", str(out),
            "--metrics", str(metrics),
        ]) == 0
        obj = json.loads(metrics.read_text())
        assert set(obj) == {
            "avg_deviation", "p_err", "q_err", "w_err", "samples_per_bin", "seed",
        }
        assert obj["samples_per_bin"] == 20

    def test_corrupt_json(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        out = tmp_path / "estimates.json"
        assert run(["estimate", "--dataset", str(bad), "--out", str(out)]) == 1


class TestBench:
    def config(self, tmp_path, runs=2):
        cfg = tmp_path / "bench.json"
        cfg.write_text(json.dumps({
            "K": 3,
            "L": 1,
            "N": 2,
            "sample_sweep": [10, 50],
            "mc_runs": runs,
            "master_seed": 5,
        }))
        return cfg

    def test_runs_and_writes_csv(self, tmp_path):
        cfg = self.config(tmp_path)
        out = tmp_path / "results.csv"
        assert run(["bench", "--config", str(cfg), "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "run_id,samples_per_bin,seed,avg_deviation,p_err,q_err,w_err"
        assert len(lines) == 1 + 2 * 2

    def test_missing_config(self, tmp_path):
        assert run(["bench", "--config", str(tmp_path / "nope.json"),
                    "--out", str(tmp_path / "r.csv")]) == 1

    def test_determinism(self, tmp_path):
        cfg = self.config(tmp_path)
        o1, o2 = tmp_path / "r1.csv", tmp_path / "r2.csv"
        run(["bench", "--config", str(cfg), "--out", str(o1)])
        run(["bench", "--config", str(cfg), "--out", str(o2), "--threads", "3"])
        assert o1.read_bytes() == o2.read_bytes()
