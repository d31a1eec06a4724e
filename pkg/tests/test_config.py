"""Tests for run configuration, validators and logging setup."""

import logging
import os
import unittest
from pathlib import Path
from unittest import mock

from rollscan.common.exceptions import ConfigError, DataValidationError
from rollscan.common.log_config import configure_logging
from rollscan.common.validators import (
    KeySetValidator,
    NumberRangeValidator,
    RangePairValidator,
    RGBValidator,
)
from rollscan.models.readout import ScanDirection
from rollscan.models.run_config import RunConfig
from rollscan.services.pipeline_service import load_run_config

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def generator_config(**changes) -> dict:
    """Minimal generator run config."""
    data = {
        "schema_version": 1,
        "generator": {"canvas": [64, 32]},
        "readout": {"sensor_rows": 32, "frames_per_capture": 32},
        "seed": 3,
    }
    data.update(changes)
    return data


class TestValidators(unittest.TestCase):
    """Test cases for config validators."""

    def test_number_range(self) -> None:
        """Test bounds and integer checks."""
        validator = NumberRangeValidator(minimum=1, integer=True)
        self.assertTrue(validator.validate(3)[0])
        self.assertFalse(validator.validate(0)[0])
        self.assertFalse(validator.validate(2.5)[0])
        self.assertFalse(validator.validate(True)[0])

    def test_range_pair(self) -> None:
        """Test [low, high] pairs."""
        validator = RangePairValidator(NumberRangeValidator(minimum=0))
        self.assertTrue(validator.validate([1, 2])[0])
        self.assertFalse(validator.validate([2, 1])[0])
        self.assertFalse(validator.validate([1])[0])

    def test_key_set(self) -> None:
        """Test unknown and missing keys."""
        validator = KeySetValidator(["a", "b"], required=["a"])
        self.assertTrue(validator.validate({"a": 1})[0])
        is_valid, error = validator.validate({"a": 1, "c": 2})
        self.assertFalse(is_valid)
        self.assertIn("c", error)
        self.assertFalse(validator.validate({"b": 1})[0])

    def test_rgb(self) -> None:
        """Test colour triples."""
        self.assertTrue(RGBValidator().validate([0, 128, 255])[0])
        self.assertFalse(RGBValidator().validate([0, 128, 256])[0])
        self.assertFalse(RGBValidator().validate([0, 128])[0])


class TestRunConfig(unittest.TestCase):
    """Test cases for RunConfig."""

    def test_example_configs_load(self) -> None:
        """Test that the shipped configs validate."""
        reference = load_run_config(CONFIGS / "reference_1080p.json")
        self.assertEqual(reference.readout.sensor_rows, 1080)
        self.assertEqual(reference.readout.source_frame_rate, 32400.0)
        desk = load_run_config(CONFIGS / "sweep_desk.json")
        self.assertEqual(desk.speed_multipliers, (0, 1, 10))
        self.assertEqual(desk.readout.scan_direction, ScanDirection.TOP_TO_BOTTOM)

    def test_echo_round_trip(self) -> None:
        """Test that the echoed config loads to the same config."""
        config = RunConfig.from_dict(generator_config(captures=5, fragment_policy="merge"))
        self.assertEqual(RunConfig.from_dict(config.to_dict()).to_dict(), config.to_dict())

    def test_echo_omits_machine_settings(self) -> None:
        """Test that workers and bursts_dir are not echoed."""
        config = RunConfig.from_dict(generator_config(workers=4, bursts_dir="/tmp/bursts"))
        self.assertNotIn("workers", config.to_dict())
        self.assertNotIn("bursts_dir", config.to_dict())

    def test_overrides(self) -> None:
        """Test CLI overrides, ignoring None values."""
        config = RunConfig.from_dict(generator_config(), seed=11, workers=None, format="coco")
        self.assertEqual(config.effective_seed, 11)
        self.assertIsNone(config.workers)
        self.assertTrue(config.writes_coco)
        self.assertFalse(config.writes_yolo)

    def test_generator_seed_fallback(self) -> None:
        """Test that the generator block's seed is used when no run seed is set."""
        data = generator_config(generator={"canvas": [64, 32], "seed": 9})
        del data["seed"]
        self.assertEqual(RunConfig.from_dict(data).effective_seed, 9)

    def test_invalid_configs(self) -> None:
        """Test that invalid configs raise ConfigError."""
        missing_seed = generator_config()
        del missing_seed["seed"]
        both = generator_config(scene={"width": 64, "height": 32})
        fractional_width = generator_config(scene={"width": 64.5, "height": 32})
        del fractional_width["generator"]
        cases = [
            generator_config(schema_version=2),
            generator_config(unexpected=True),
            generator_config(readout={"sensor_rows": 32}),
            generator_config(readout={"sensor_rows": 32, "frames_per_capture": 64}),
            generator_config(readout={"sensor_rows": 32, "frames_per_capture": 32, "scan_direction": "sideways"}),
            generator_config(generator={"canvas": [64, 40]}),
            generator_config(captures=0),
            generator_config(format="xml"),
            generator_config(fragment_policy="glue"),
            generator_config(splits={"train": 0.9, "test": 0.2}),
            generator_config(metrics={"interpolation": "5-point"}),
            missing_seed,
            both,
            fractional_width,
        ]
        for data in cases:
            with self.assertRaises(ConfigError, msg=str(data)):
                RunConfig.from_dict(data)

    def test_invalid_json(self) -> None:
        """Test that unparsable config files are config errors."""
        with mock.patch("rollscan.services.pipeline_service.read_json") as read_json:
            read_json.side_effect = DataValidationError("config.json: invalid JSON")
            with self.assertRaises(ConfigError):
                load_run_config("config.json")

    def test_workers_from_environment(self) -> None:
        """Test ROLLSCAN_WORKERS resolution."""
        config = RunConfig.from_dict(generator_config())
        with mock.patch.dict(os.environ, {"ROLLSCAN_WORKERS": "3"}):
            self.assertEqual(config.resolve_workers(), 3)
        with mock.patch.dict(os.environ, {"ROLLSCAN_WORKERS": "many"}):
            with self.assertRaises(ConfigError):
                config.resolve_workers()
        with mock.patch.dict(os.environ, {"ROLLSCAN_WORKERS": "3"}):
            self.assertEqual(RunConfig.from_dict(generator_config(workers=2)).resolve_workers(), 2)

    def test_workers_default(self) -> None:
        """Test the single-worker default."""
        config = RunConfig.from_dict(generator_config())
        with mock.patch.dict(os.environ, {}, clear=True):
            self.assertEqual(config.resolve_workers(), 1)


class TestLogging(unittest.TestCase):
    """Test cases for configure_logging."""

    def tearDown(self) -> None:
        """Restore the default level."""
        logging.getLogger().setLevel(logging.WARNING)

    def test_explicit_level(self) -> None:
        """Test an explicit level name."""
        self.assertEqual(configure_logging("debug"), logging.DEBUG)
        self.assertEqual(logging.getLogger().level, logging.DEBUG)

    def test_environment_level(self) -> None:
        """Test ROLLSCAN_LOG."""
        with mock.patch.dict(os.environ, {"ROLLSCAN_LOG": "ERROR"}):
            self.assertEqual(configure_logging(), logging.ERROR)

    def test_unknown_level_falls_back(self) -> None:
        """Test that an unknown level name warns and uses the default."""
        with mock.patch.dict(os.environ, {"ROLLSCAN_LOG": "chatty"}):
            with self.assertLogs("rollscan.common.log_config", level="WARNING"):
                self.assertEqual(configure_logging(), logging.WARNING)


if __name__ == "__main__":
    unittest.main()
