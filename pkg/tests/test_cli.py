"""CLI subcommands exercised in-process through main()."""

import json

import pytest

from lenbias.cli import main


def run_cli(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def corpus_file(write_jsonl):
    records = []
    for i in range(30):
        label = i % 2
        length = 4 + (i % 5) + (6 if label == 0 else 0)
        records.append(
            {"id": f"r{i}", "label": label, "text": " ".join(["tok"] * length)}
        )
    return write_jsonl(records, "train.jsonl")


class TestAnalyze:
    def test_happy_path_writes_reports(self, corpus_file, tmp_path, capsys):
        out = tmp_path / "analysis"
        assert run_cli("analyze", "--in", corpus_file, "--out-dir", out) == 0
        for name in ("analysis.json", "report.md", "summary.csv", "histogram.csv"):
            assert (out / name).is_file()
        payload = json.loads((out / "analysis.json").read_text())
        assert set(payload["profile"]["per_class_mean"]) == {"0", "1"}
        assert "overlap" in capsys.readouterr().out

    def test_missing_input_names_path(self, tmp_path, capsys):
        missing = tmp_path / "nope.jsonl"
        assert run_cli("analyze", "--in", missing, "--out-dir", tmp_path / "x") == 1
        assert "nope.jsonl" in capsys.readouterr().err

    def test_three_label_file_fails(self, write_jsonl, tmp_path, capsys):
        path = write_jsonl(
            [{"id": str(i), "label": i, "text": "a b"} for i in range(3)], "bad.jsonl"
        )
        assert run_cli("analyze", "--in", path, "--out-dir", tmp_path / "x") == 1
        assert "labels" in capsys.readouterr().err


class TestInjectAndAnalyzeConsistency:
    def test_target_overlap_round_trips_through_analyze(self, tmp_path, capsys):
        gen = tmp_path / "gen.jsonl"
        assert run_cli("gen-synthetic", "--out", gen, "--n-per-class", 800, "--seed", 5) == 0
        inj = tmp_path / "inj"
        assert run_cli("inject", "--in", gen, "--out-dir", inj, "--target-overlap", 50) == 0
        spec = json.loads((inj / "injection.json").read_text())
        assert abs(spec["achieved_overlap"] - 50.0) <= 5.0
        out = tmp_path / "post"
        assert run_cli("analyze", "--in", inj / "altered.jsonl", "--out-dir", out) == 0
        payload = json.loads((out / "analysis.json").read_text())
        assert payload["profile"]["overlap_pct"] == pytest.approx(
            spec["achieved_overlap"], abs=1e-9
        )

    def test_explicit_bounds(self, corpus_file, tmp_path):
        inj = tmp_path / "inj"
        assert run_cli(
            "inject", "--in", corpus_file, "--out-dir", inj, "--lower", 10, "--upper", 8
        ) == 0
        spec = json.loads((inj / "injection.json").read_text())
        assert spec["achieved_overlap"] == 0.0

    def test_needs_bounds_or_target(self, corpus_file, tmp_path, capsys):
        assert run_cli("inject", "--in", corpus_file, "--out-dir", tmp_path / "x") == 1
        assert "target-overlap" in capsys.readouterr().err


class TestPipeline:
    def test_partition_train_predict_evaluate_compare(self, tmp_path):
        train = tmp_path / "train.jsonl"
        test = tmp_path / "test.jsonl"
        assert run_cli("gen-synthetic", "--out", train, "--n-per-class", 500, "--seed", 5) == 0
        assert run_cli(
            "gen-synthetic", "--out", test, "--n-per-class", 200, "--seed", 6,
            "--id-prefix", "t",
        ) == 0
        analysis = tmp_path / "analysis"
        assert run_cli("analyze", "--in", train, "--out-dir", analysis) == 0
        parts = tmp_path / "parts"
        assert run_cli(
            "partition", "--test", test, "--analysis", analysis / "analysis.json",
            "--out-dir", parts,
        ) == 0
        summary = json.loads((parts / "partitions.json").read_text())
        assert summary["sizes"]["gap"] + summary["sizes"]["reverse"] == 400
        assert (parts / "gap-test.jsonl").is_file()
        assert (parts / "reverse-test.jsonl").is_file()
        assert (parts / "original-test.jsonl").is_file()

        model = tmp_path / "model.json"
        assert run_cli(
            "train-baseline", "--in", train, "--out", model, "--epochs", 2, "--seed", 1
        ) == 0
        preds = tmp_path / "preds.csv"
        assert run_cli("predict", "--model", model, "--in", test, "--out", preds) == 0
        assert preds.read_text().startswith("doc_id,predicted_label,score")

        evaldir = tmp_path / "eval"
        assert run_cli(
            "evaluate", "--test", test, "--partitions", parts / "partitions.json",
            "--predictions", preds, "--out-dir", evaldir, "--label", "run-a",
        ) == 0
        report = json.loads((evaldir / "report.json").read_text())
        assert set(report["n_per_subset"]) == {"original", "gap", "reverse"}

        cmp_dir = tmp_path / "cmp"
        assert run_cli(
            "compare", "--reports", evaldir / "report.json", evaldir / "report.json",
            "--out-dir", cmp_dir,
        ) == 0
        assert (cmp_dir / "comparison.csv").is_file()

    def test_filter_window_cli(self, tmp_path):
        train = tmp_path / "train.jsonl"
        assert run_cli(
            "gen-synthetic", "--out", train, "--n-per-class", 100, "--seed", 2,
            "--short-lengths", "60,75", "--long-lengths", "75,90",
        ) == 0
        win = tmp_path / "win"
        assert run_cli(
            "filter-window", "--in", train, "--out-dir", win, "--lower", 75, "--upper", 75
        ) == 0
        payload = json.loads((win / "window.json").read_text())
        assert payload["overlap_pct"] == 100.0

    def test_filter_window_empty_class_fails(self, tmp_path, capsys):
        train = tmp_path / "train.jsonl"
        run_cli(
            "gen-synthetic", "--out", train, "--n-per-class", 40, "--seed", 2,
            "--short-lengths", "60", "--long-lengths", "90",
        )
        assert run_cli(
            "filter-window", "--in", train, "--out-dir", tmp_path / "win",
            "--lower", 61, "--upper", 89,
        ) == 1
        assert "no documents" in capsys.readouterr().err

    def test_augment_cli_writes_sidecars(self, tmp_path):
        train = tmp_path / "train.jsonl"
        run_cli(
            "gen-synthetic", "--out", train, "--n-per-class", 80, "--seed", 3,
            "--short-lengths", "20,30", "--long-lengths", "50,60",
        )
        aug = tmp_path / "aug"
        assert run_cli("augment", "--in", train, "--out-dir", aug, "--seed", 4) == 0
        report = json.loads((aug / "augment-report.json").read_text())
        assert report["overlap_after"] > report["overlap_before"]
        plans = [json.loads(line) for line in (aug / "plans.jsonl").read_text().splitlines()]
        assert plans and all(
            p["masked_text"].count("<mask>") == p["k"] for p in plans
        )


class TestConfigFile:
    def test_config_supplies_defaults_and_flags_win(self, corpus_file, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text("# defaults\nn_per_class = 50\nseed = 9\n")
        out_a = tmp_path / "a.jsonl"
        assert run_cli("--config", config, "gen-synthetic", "--out", out_a) == 0
        assert len(out_a.read_text().splitlines()) == 100

        out_b = tmp_path / "b.jsonl"
        assert run_cli(
            "--config", config, "gen-synthetic", "--out", out_b, "--n-per-class", 10
        ) == 0
        assert len(out_b.read_text().splitlines()) == 20

    def test_malformed_config_fails(self, tmp_path, capsys):
        config = tmp_path / "bad.cfg"
        config.write_text("this line has no equals\n")
        assert run_cli("--config", config, "gen-synthetic", "--out", tmp_path / "x") == 1
        assert "key = value" in capsys.readouterr().err
