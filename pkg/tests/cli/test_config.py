"""
Tests for experiment configuration and the run directory.

Run with: python -m pytest tests/cli/test_config.py
"""

import json

import numpy as np
import pandas as pd
import pytest

from ZAGFF.cli.config import SCHEMA_VERSION, build_config, load_config_file
from ZAGFF.cli.output import RunDirectory, dumps
from ZAGFF.core.exceptions import ValidationError


class TestBuildConfig:
    def test_defaults(self):
        config = build_config("extremes", {}, {"n": 16})
        assert config.d == 3
        assert config.replicates == 2000
        assert config.beta == 0.75
        assert config.floor == -10.0

    def test_flags_override_file(self):
        config = build_config("extremes", {"n": 8, "seed": 1}, {"seed": 2, "delta": None})
        assert config.n == 8
        assert config.seed == 2
        assert config.delta == 0.0

    @pytest.mark.parametrize(
        "command, values",
        [
            ("extremes", {}),
            ("greens", {}),
            ("extremes", {"n": 8, "replicates": 50}),
            ("extremes", {"n": 8, "beta": 0.4}),
            ("extremes", {"n": 8, "delta": -12.0}),
            ("sample", {"n": 4, "format": "npy"}),
            ("sample", {"n": 4, "seed": -1}),
            ("greens", {"n": 4, "unknown": 1}),
        ],
    )
    def test_invalid(self, command, values):
        with pytest.raises(ValidationError) as exc:
            build_config(command, values, {})
        assert exc.value.details["errors"]

    def test_resolved_n_list(self):
        config = build_config("greens", {"n_list": [16, 4]}, {"n": 8})
        assert config.resolved_n_list() == [4, 8, 16]

    def test_digest_is_stable(self):
        a = build_config("extremes", {"n": 8}, {"seed": 3})
        b = build_config("extremes", {}, {"n": 8, "seed": 3})
        c = build_config("extremes", {}, {"n": 8, "seed": 4})
        assert a.digest() == b.digest()
        assert a.digest() != c.digest()
        assert len(a.digest()) == 12

    def test_canonical_json(self):
        payload = json.loads(build_config("greens", {}, {"n": 3}).canonical_json())
        assert payload["schema_version"] == SCHEMA_VERSION
        assert payload["command"] == "greens"


class TestLoadConfigFile:
    def test_none(self):
        assert load_config_file(None) == {}

    def test_missing(self, tmp_path):
        with pytest.raises(ValidationError):
            load_config_file(tmp_path / "nope.json")

    def test_not_an_object(self, tmp_path):
        path = tmp_path / "list.json"
        path.write_text("[1, 2]")
        with pytest.raises(ValidationError):
            load_config_file(path)


class TestRunDirectory:
    def test_writes_config(self, out_dir):
        config = build_config("greens", {}, {"n": 3})
        run = RunDirectory(config, out_dir)
        assert (out_dir / "config.json").read_text() == config.canonical_json()
        run.write_report("greens", {"value": np.float64(0.5), "sizes": np.arange(3)})
        report = json.loads((out_dir / "report.json").read_text())
        assert report == {"schema_version": SCHEMA_VERSION, "command": "greens", "value": 0.5, "sizes": [0, 1, 2]}

    def test_csv_round_trips_floats(self, out_dir):
        run = RunDirectory(build_config("greens", {}, {"n": 3}), out_dir)
        frame = pd.DataFrame({"x": [1.0 / 3.0, np.pi, 1e-300]})
        run.write_csv("t.csv", frame)
        back = pd.read_csv(out_dir / "t.csv", float_precision="round_trip")
        assert back["x"].tolist() == frame["x"].tolist()

    def test_rejects_non_empty(self, out_dir):
        out_dir.mkdir()
        (out_dir / "old.json").write_text("{}")
        with pytest.raises(ValidationError):
            RunDirectory(build_config("greens", {}, {"n": 3}), out_dir)

    def test_identical_config_reuses_directory(self, out_dir):
        config = build_config("greens", {}, {"n": 3})
        RunDirectory(config, out_dir).write_text("extra.txt", "x")
        again = RunDirectory(config, out_dir)
        assert again.path == out_dir
        assert (out_dir / "config.json").read_text() == config.canonical_json()

    def test_other_config_rejected_in_used_directory(self, out_dir):
        RunDirectory(build_config("greens", {}, {"n": 3}), out_dir)
        with pytest.raises(ValidationError) as exc:
            RunDirectory(build_config("greens", {}, {"n": 4}), out_dir)
        assert "--out" in exc.value.message

    def test_dumps_rejects_nan(self):
        with pytest.raises(ValueError):
            dumps({"x": float("nan")})

    def test_dumps_is_sorted(self):
        assert dumps({"b": 1, "a": 2}).index('"a"') < dumps({"b": 1, "a": 2}).index('"b"')
