"""
Tests for the `zagff` command line runner.

Run with: python -m pytest tests/cli/test_cli.py
"""

import json

import numpy as np
import pandas as pd
import pytest

from ZAGFF.cli import EXIT_ACCEPTANCE, EXIT_OK, EXIT_USAGE, main
from ZAGFF.services.sampler import read_field_binary, read_field_csv, sample_field, SeedPolicy
from ZAGFF.services.lattice import FieldConfig


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


class TestGreens:
    def test_small_torus_table(self, capsys, out_dir):
        code, summary = run(capsys, "greens", "--d", "3", "--n", "3", "--out", str(out_dir))
        assert code == EXIT_OK
        assert summary["passed"]
        table = pd.read_csv(out_dir / "green_table_n3.csv", float_precision="round_trip")
        assert table["G_value"].iloc[0] == pytest.approx(1.0864198, abs=1e-7)
        assert (out_dir / "decay_profile_n3.csv").exists()
        report = json.loads((out_dir / "report.json").read_text())
        assert report["schema_version"] == "1.0"
        assert report["command"] == "greens"

    def test_convergence_list(self, capsys, out_dir):
        code, summary = run(capsys, "greens", "--n-list", "4,8,16", "--out", str(out_dir))
        assert code == EXIT_OK
        frame = pd.read_csv(out_dir / "convergence.csv")
        assert list(frame.columns[:5]) == ["n", "v_n", "v", "gap", "bound"]
        assert frame["gap"].is_monotonic_decreasing
        assert summary["summary"]["n"] == [4, 8, 16]

    def test_config_json_written(self, out_dir, capsys):
        run(capsys, "greens", "--n", "4", "--seed", "9", "--out", str(out_dir))
        config = json.loads((out_dir / "config.json").read_text())
        assert config["command"] == "greens"
        assert config["n"] == 4
        assert config["seed"] == 9
        assert config["schema_version"] == "1.0"


class TestErrors:
    def test_dimension_two(self, capsys, out_dir):
        code, payload = run(capsys, "greens", "--d", "2", "--n", "8", "--out", str(out_dir))
        assert code == EXIT_USAGE
        assert payload["error"]["kind"] == "unsupported-dimension"
        assert not out_dir.exists()

    def test_unknown_command(self, capsys):
        code, payload = run(capsys, "bogus")
        assert code == EXIT_USAGE
        assert payload["error"]["kind"] == "validation-error"

    def test_missing_n(self, capsys, out_dir):
        code, payload = run(capsys, "extremes", "--out", str(out_dir))
        assert code == EXIT_USAGE

    def test_unknown_log_level(self, capsys, out_dir):
        code, payload = run(capsys, "greens", "--n", "3", "--log-level", "chatty", "--out", str(out_dir))
        assert code == EXIT_USAGE
        assert "chatty" in payload["error"]["message"]

    def test_too_few_replicates(self, capsys, out_dir):
        code, _ = run(capsys, "extremes", "--n", "8", "--replicates", "10", "--out", str(out_dir))
        assert code == EXIT_USAGE

    def test_non_empty_output_directory(self, capsys, out_dir):
        out_dir.mkdir()
        (out_dir / "keep.txt").write_text("x")
        code, payload = run(capsys, "greens", "--n", "3", "--out", str(out_dir))
        assert code == EXIT_USAGE
        assert "not empty" in payload["error"]["message"]

    def test_config_file_and_flag_precedence(self, capsys, tmp_path, out_dir):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"n": 3, "seed": 4}))
        code, _ = run(capsys, "greens", "--config", str(path), "--seed", "5", "--out", str(out_dir))
        assert code == EXIT_OK
        config = json.loads((out_dir / "config.json").read_text())
        assert config["n"] == 3 and config["seed"] == 5

    def test_unknown_config_key(self, capsys, tmp_path, out_dir):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"n": 3, "colour": "blue"}))
        code, payload = run(capsys, "greens", "--config", str(path), "--out", str(out_dir))
        assert code == EXIT_USAGE
        assert payload["error"]["details"]["errors"]


class TestSample:
    def test_binary_fields(self, capsys, out_dir):
        code, summary = run(capsys, "sample", "--n", "4", "--count", "3", "--seed", "11", "--out", str(out_dir))
        assert code == EXIT_OK
        assert summary["summary"]["fields"] == 3
        policy = SeedPolicy(master_seed=11)
        for i in range(3):
            field = read_field_binary(out_dir / f"field_{i:05d}.bin")
            assert field.seed == policy.stream_seed(i)
            expected = sample_field(FieldConfig(d=3, n=4), policy.stream_seed(i))
            assert np.array_equal(field.values, expected.values)

    def test_csv_fields(self, capsys, out_dir):
        code, _ = run(capsys, "sample", "--n", "4", "--format", "csv", "--out", str(out_dir))
        assert code == EXIT_OK
        field = read_field_csv(out_dir / "field_00000.csv")
        assert field.values.shape == (4, 4, 4)


class TestExtremes:
    ARGS = ("extremes", "--n", "8", "--replicates", "100", "--seed", "7", "--report-only")

    def test_report_only_run(self, capsys, out_dir):
        code, summary = run(capsys, *self.ARGS, "--out", str(out_dir))
        assert code == EXIT_OK
        frame = pd.read_csv(out_dir / "replicates.csv")
        assert len(frame) == 100
        report = json.loads((out_dir / "report.json").read_text())
        assert report["command"] == "extremes"
        assert report["gumbel"]["replicates"] == 100
        assert "acceptance" in summary["summary"]

    def test_byte_identical_reruns(self, capsys, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        run(capsys, *self.ARGS, "--out", str(a))
        run(capsys, *self.ARGS, "--out", str(b))
        for name in ("config.json", "report.json", "replicates.csv"):
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_rerun_in_same_directory(self, capsys, out_dir):
        code, _ = run(capsys, *self.ARGS, "--out", str(out_dir))
        assert code == EXIT_OK
        first = {name: (out_dir / name).read_bytes() for name in ("report.json", "replicates.csv")}
        code, _ = run(capsys, *self.ARGS, "--out", str(out_dir))
        assert code == EXIT_OK
        for name, content in first.items():
            assert (out_dir / name).read_bytes() == content
        code, _ = run(capsys, *self.ARGS[:-1], "--out", str(out_dir))
        assert code == EXIT_USAGE

    def test_exit_code_follows_acceptance(self, capsys, out_dir):
        # Without --report-only the exit code follows the acceptance flags
        code, summary = run(
            capsys, "extremes", "--n", "8", "--replicates", "100", "--delta", "-2", "--floor", "-3",
            "--out", str(out_dir),
        )
        assert code in (EXIT_OK, EXIT_ACCEPTANCE)
        assert summary["passed"] == (code == EXIT_OK)
        assert sorted(summary["failed"]) == sorted(
            k for k, v in summary["summary"]["acceptance"].items() if not v
        )


@pytest.mark.slow
class TestVerify:
    def test_all_checks_pass(self, capsys, out_dir):
        code, summary = run(capsys, "verify", "--mc-replicates", "4000", "--out", str(out_dir))
        assert code == EXIT_OK, summary["failed"]
        report = json.loads((out_dir / "report.json").read_text())
        assert report["all_passed"]
        names = {c["name"] for c in report["checks"]}
        assert {"spectral_vs_pinv_n3", "killed_two_sites", "center_decomposition_n8"} <= names

    def test_injected_fault_is_detected(self, capsys, out_dir):
        code, summary = run(capsys, "verify", "--inject-fault", "--mc-replicates", "1000", "--out", str(out_dir))
        assert code == EXIT_ACCEPTANCE
        assert "spectral_vs_pinv_n4" in summary["failed"]
        assert "row_sum_n8" in summary["failed"]
