"""Tests for per-command run configuration."""

import json

import pytest

from src.bandwidth.terms import BandwidthMode, DensityFactor
from src.cli.run_config import DEFAULT_DENSITY_N, RunConfig
from src.config import create_test_config
from src.exceptions import (
    InvalidArgumentError,
    InvalidConfigError,
    MissingConfigError,
)
from src.utils.constants import DEFAULT_N


def estimate_args(path, **flags):
    """Flag mapping as the parser produces it, unset flags as None."""
    args = {"command": "estimate", "input": path, "alpha": None, "jobs": None}
    args.update(flags)
    return args


class TestPrecedence:
    """settings < JSON file < flags."""

    def test_settings_supply_defaults(self, data_csv):
        settings = create_test_config(alpha=0.1, density_factor="literal")

        config = RunConfig.from_sources(estimate_args(data_csv), settings=settings)

        assert config.alpha == 0.1
        assert config.density_factor is DensityFactor.LITERAL
        assert config.jobs == 1

    def test_file_overrides_settings(self, data_csv, tmp_path):
        config_file = tmp_path / "run.json"
        config_file.write_text(json.dumps({"alpha": 0.2, "bandwidth-mode": "common"}))
        settings = create_test_config(alpha=0.1)

        config = RunConfig.from_sources(
            estimate_args(data_csv), config_file, settings
        )

        assert config.alpha == 0.2
        assert config.bandwidth_mode is BandwidthMode.COMMON

    def test_flags_override_file(self, data_csv, tmp_path):
        config_file = tmp_path / "run.json"
        config_file.write_text(json.dumps({"alpha": 0.2}))

        config = RunConfig.from_sources(
            estimate_args(data_csv, alpha=0.01),
            config_file,
            create_test_config(),
        )

        assert config.alpha == 0.01

    def test_settings_support_parsed(self):
        settings = create_test_config(support="-10,10,-5,5")

        config = RunConfig.from_sources(
            {"command": "simulate", "design": 1, "seed": 3}, settings=settings
        )

        assert config.support == (-10.0, 10.0, -5.0, 5.0)


class TestCommandRequirements:
    """Per-command required fields."""

    def test_estimate_needs_input(self):
        with pytest.raises(InvalidArgumentError, match="requires --input"):
            RunConfig.from_sources({"command": "estimate"})

    def test_unreadable_input(self, tmp_path):
        with pytest.raises(InvalidArgumentError, match="not readable"):
            RunConfig.from_sources(estimate_args(tmp_path / "absent.csv"))

    def test_fixed_mode_needs_bandwidths(self, data_csv):
        with pytest.raises(InvalidArgumentError, match="--h1 and --h2"):
            RunConfig.from_sources(
                estimate_args(data_csv, bandwidth_mode="fixed", h1=0.5)
            )

    def test_fixed_mode_with_bandwidths(self, data_csv):
        config = RunConfig.from_sources(
            estimate_args(data_csv, bandwidth_mode="fixed", h1=0.5, h2=0.25)
        )

        assert config.fixed_bandwidths == (0.5, 0.25)

    def test_sweep_needs_region(self, data_csv):
        with pytest.raises(InvalidArgumentError, match="--region"):
            RunConfig.from_sources({"command": "sweep", "input": data_csv})

    def test_simulate_needs_seed(self):
        with pytest.raises(InvalidArgumentError, match="--seed"):
            RunConfig.from_sources({"command": "simulate", "design": 2})

    def test_simulate_needs_design(self):
        with pytest.raises(InvalidArgumentError, match="--design"):
            RunConfig.from_sources({"command": "simulate", "seed": 1})

    def test_diagnose_needs_mode(self):
        with pytest.raises(InvalidArgumentError, match="mode"):
            RunConfig.from_sources({"command": "diagnose", "seed": 1})

    def test_output_directory_must_exist(self, tmp_path):
        with pytest.raises(InvalidArgumentError, match="output directory"):
            RunConfig.from_sources(
                {"command": "designs", "output": tmp_path / "missing" / "out.json"}
            )

    def test_designs_needs_nothing(self):
        config = RunConfig.from_sources({"command": "designs"})

        assert config.format == "json"
        assert config.output is None


class TestValidation:
    """Field validation surfaces as InvalidArgumentError."""

    @pytest.mark.parametrize(
        "field,value",
        [
            ("alpha", 0.5),
            ("alpha", 0.0),
            ("jobs", 0),
            ("jobs", -2),
            ("h_grid", []),
            ("h_grid", [0.1, -0.1]),
            ("n_grid", [5]),
            ("reps", 0),
        ],
    )
    def test_invalid_values(self, field, value):
        args = {"command": "diagnose", "mode": "density", "seed": 1, field: value}

        with pytest.raises(InvalidArgumentError, match=field):
            RunConfig.from_sources(args)

    def test_unknown_key_in_file(self, tmp_path):
        config_file = tmp_path / "run.json"
        config_file.write_text(json.dumps({"bandwith": 0.3}))

        with pytest.raises(InvalidArgumentError, match="bandwith"):
            RunConfig.from_sources({"command": "designs"}, config_file)

    def test_invalid_json(self, tmp_path):
        config_file = tmp_path / "run.json"
        config_file.write_text("{alpha: 0.1")

        with pytest.raises(InvalidConfigError, match="not valid JSON"):
            RunConfig.from_sources({"command": "designs"}, config_file)

    def test_json_must_be_object(self, tmp_path):
        config_file = tmp_path / "run.json"
        config_file.write_text("[1, 2]")

        with pytest.raises(InvalidConfigError, match="JSON object"):
            RunConfig.from_sources({"command": "designs"}, config_file)

    def test_missing_config_file(self, tmp_path):
        with pytest.raises(MissingConfigError, match="not found"):
            RunConfig.from_sources({"command": "designs"}, tmp_path / "none.json")


def test_sample_size_defaults():
    simulate = RunConfig.from_sources({"command": "simulate", "design": 1, "seed": 1})
    diagnose = RunConfig.from_sources(
        {"command": "diagnose", "mode": "density", "seed": 1}
    )
    explicit = RunConfig.from_sources(
        {"command": "simulate", "design": 1, "seed": 1, "n": 250}
    )

    assert simulate.sample_size == DEFAULT_N
    assert diagnose.sample_size == DEFAULT_DENSITY_N
    assert explicit.sample_size == 250
