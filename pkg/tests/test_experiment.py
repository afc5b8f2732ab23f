"""Experiment orchestration: artifact layout, resumability, trends."""

import json

import pytest

from lenbias.experiment import ExperimentConfig, run_experiment
from lenbias.synth import SyntheticConfig


def small_config(out_dir, **kwargs):
    defaults = dict(
        out_dir=str(out_dir),
        seed=11,
        n_per_class=800,
        test_n_per_class=400,
        targets=(50.0, 0.0),
    )
    defaults.update(kwargs)
    return ExperimentConfig(**defaults)


@pytest.fixture(scope="module")
def base_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("experiment") / "exp"
    return run_experiment(small_config(out)), out


class TestRunExperiment:
    def test_artifact_layout(self, base_run):
        result, out = base_run
        for name in (
            "config.json", "train.jsonl", "test.jsonl", "analysis.json",
            "partitions.json", "original-test.jsonl", "gap-test.jsonl",
            "reverse-test.jsonl", "summary.md", "summary.csv",
            "mitigation.md", "mitigation.csv", "experiment.json",
        ):
            assert (out / name).is_file(), name
        assert [s.name for s in result.scenarios] == ["original", "50", "0"]
        for s in result.scenarios:
            sdir = out / "scenarios" / s.name
            for name in (
                "altered.jsonl", "injection.json", "model-length.json",
                "model-content.json", "predictions-length.csv",
                "predictions-content.csv", "report-length.json",
                "report-content.json", "scenario.json",
            ):
                assert (sdir / name).is_file(), f"{s.name}/{name}"

    def test_delta_grows_as_overlap_shrinks(self, base_run):
        result, _ = base_run
        deltas = [s.delta_initial for s in result.scenarios]
        assert deltas[0] < deltas[1] < deltas[2]
        zero = result.scenario("0")
        assert zero.overlap == 0.0
        assert zero.reports["length"].accuracy_gap >= 0.98

    def test_augmented_delta_strictly_smaller(self, base_run):
        result, _ = base_run
        for s in result.scenarios:
            if s.name == "original":
                continue
            assert s.delta_augmented is not None
            assert s.delta_augmented < s.delta_initial

    def test_resume_skips_completed_scenarios(self, base_run):
        first, out = base_run
        cfg = small_config(out)
        marker = out / "scenarios" / "0" / "scenario.json"
        mtime = marker.stat().st_mtime_ns
        second = run_experiment(cfg)
        assert marker.stat().st_mtime_ns == mtime
        assert [s.overlap for s in second.scenarios] == [s.overlap for s in first.scenarios]
        a = {s.name: s.reports["length"].to_dict() for s in first.scenarios}
        b = {s.name: s.reports["length"].to_dict() for s in second.scenarios}
        assert a == b

    def test_seed_recorded_in_artifacts(self, base_run):
        _, out = base_run
        for name in ("analysis.json", "partitions.json", "experiment.json"):
            assert json.loads((out / name).read_text())["seed"] == 11
        inj = json.loads((out / "scenarios" / "50" / "injection.json").read_text())
        assert inj["seed"] == 11

    def test_no_augment_flag(self, tmp_path):
        cfg = small_config(tmp_path / "exp", augment=False, targets=(0.0,))
        result = run_experiment(cfg)
        assert all(s.delta_augmented is None for s in result.scenarios)
        assert not (tmp_path / "exp" / "mitigation.md").exists()

    def test_custom_synth_params_flow_through(self, tmp_path):
        cfg = small_config(
            tmp_path / "exp",
            targets=(0.0,),
            augment=False,
            synth=SyntheticConfig(short_mean=40, long_mean=70, short_std=10, long_std=10),
        )
        result = run_experiment(cfg)
        assert result.original_overlap < 40
