"""Tests for the readout model and RS composition."""

import unittest

import numpy as np

from rollscan.common.exceptions import DataValidationError, RowRangeError, ValidationError
from rollscan.models.image import FrameSequence, ImageBuffer, get_row, images_equal
from rollscan.models.readout import ReadoutModel, ScanDirection
from rollscan.models.scene import Actor, Scene, ShapeKind, Trajectory
from rollscan.services.scene_service import render_burst, render_frame
from rollscan.services.shutter_service import (
    capture_pair,
    compose_gs,
    compose_rs,
    compose_rs_streaming,
    row_to_frame,
)


def random_burst(rng: np.random.Generator, frames: int, height: int, width: int = 8) -> FrameSequence:
    """Burst of random frames."""
    return FrameSequence(
        [ImageBuffer(rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8)) for _ in range(frames)],
        30.0 * frames,
    )


class TestReadoutModel(unittest.TestCase):
    """Test cases for ReadoutModel."""

    def test_identity_when_f_equals_h(self) -> None:
        """Test that row r maps to frame r when F == H."""
        model = ReadoutModel(64, 64)
        self.assertEqual([row_to_frame(model, r) for r in range(64)], list(range(64)))

    def test_grouped_rows(self) -> None:
        """Test floor mapping when F < H."""
        model = ReadoutModel(8, 4)
        self.assertEqual([model.row_to_frame(r) for r in range(8)], [0, 0, 1, 1, 2, 2, 3, 3])

    def test_bottom_to_top(self) -> None:
        """Test the reversed scan order."""
        model = ReadoutModel(8, 4, ScanDirection.BOTTOM_TO_TOP)
        self.assertEqual([model.row_to_frame(r) for r in range(8)], [3, 3, 2, 2, 1, 1, 0, 0])

    def test_frame_map_matches_row_to_frame(self) -> None:
        """Test the vectorized map against the scalar one."""
        for direction in ScanDirection:
            model = ReadoutModel(30, 7, direction)
            expected = [model.row_to_frame(r) for r in range(30)]
            self.assertEqual(model.frame_map().tolist(), expected)

    def test_row_out_of_range(self) -> None:
        """Test RowRangeError outside [0, H)."""
        model = ReadoutModel(8, 8)
        with self.assertRaises(RowRangeError):
            row_to_frame(model, 8)
        with self.assertRaises(RowRangeError):
            row_to_frame(model, -1)

    def test_frames_exceeding_rows_rejected(self) -> None:
        """Test that F > H is unsupported."""
        with self.assertRaises(ValidationError):
            ReadoutModel(8, 9)

    def test_non_positive_values_rejected(self) -> None:
        """Test rejection of zero rows and a zero frame rate."""
        with self.assertRaises(ValidationError):
            ReadoutModel(0, 1)
        with self.assertRaises(ValidationError):
            ReadoutModel(8, 8, gs_frame_rate=0.0)

    def test_source_frame_rate(self) -> None:
        """Test burst rate and row timing."""
        model = ReadoutModel.reference_default()
        self.assertEqual(model.source_frame_rate, 32400.0)
        self.assertAlmostEqual(model.row_time(1079), 1079 / 32400.0)

    def test_dict_round_trip(self) -> None:
        """Test config serialization."""
        model = ReadoutModel(16, 4, ScanDirection.BOTTOM_TO_TOP, 60.0)
        self.assertEqual(ReadoutModel.from_dict(model.to_dict()), model)


class TestComposition(unittest.TestCase):
    """Test cases for RS composition."""

    def setUp(self) -> None:
        """Set up test fixtures."""
        self.rng = np.random.default_rng(2024)

    def test_row_provenance(self) -> None:
        """Test that every output row is the mapped row of the mapped frame."""
        for trial in range(50):
            height = (16, 64, 128)[trial % 3]
            direction = list(ScanDirection)[trial % 2]
            model = ReadoutModel(height, height, direction)
            seq = random_burst(self.rng, height, height)
            rs = compose_rs(seq, model)
            self.assertEqual(rs.size, seq[0].size)
            for r in range(height):
                np.testing.assert_array_equal(get_row(rs, r), get_row(seq[row_to_frame(model, r)], r))

    def test_row_provenance_grouped(self) -> None:
        """Test provenance when several rows share a frame."""
        model = ReadoutModel(64, 16)
        seq = random_burst(self.rng, 16, 64)
        rs = compose_rs(seq, model)
        for r in range(64):
            np.testing.assert_array_equal(get_row(rs, r), get_row(seq[r // 4], r))

    def test_static_identity(self) -> None:
        """Test that a static scene composes to its GS frame."""
        model = ReadoutModel(64, 64)
        for trial in range(25):
            scene = Scene(
                96,
                64,
                [
                    Actor(
                        i,
                        list(ShapeKind)[(trial + i) % 2],
                        (float(self.rng.uniform(4, 30)), float(self.rng.uniform(4, 30))),
                        tuple(int(c) for c in self.rng.integers(0, 256, size=3)),
                        Trajectory.stationary(float(self.rng.uniform(0, 96)), float(self.rng.uniform(0, 64))),
                    )
                    for i in range(3)
                ],
            )
            gs, rs = capture_pair(render_burst(scene, model), model)
            self.assertTrue(images_equal(gs, rs))

    def test_direction_symmetry(self) -> None:
        """Test that bottom-to-top equals the flipped top-to-bottom of the flipped burst."""
        seq = random_burst(self.rng, 12, 24)
        up = ReadoutModel(24, 12, ScanDirection.BOTTOM_TO_TOP)
        down = ReadoutModel(24, 12, ScanDirection.TOP_TO_BOTTOM)
        expected = compose_rs(seq.flipped_vertical(), down).flipped_vertical()
        self.assertTrue(images_equal(compose_rs(seq, up), expected))

    def test_extra_frames_ignored(self) -> None:
        """Test that frames beyond F are not used."""
        seq = random_burst(self.rng, 10, 8)
        model = ReadoutModel(8, 8)
        truncated = FrameSequence(seq.frames[:8], seq.frame_rate)
        self.assertTrue(images_equal(compose_rs(seq, model), compose_rs(truncated, model)))

    def test_short_burst_rejected(self) -> None:
        """Test DataValidationError for fewer than F frames."""
        with self.assertRaises(DataValidationError):
            compose_rs(random_burst(self.rng, 7, 8), ReadoutModel(8, 8))

    def test_height_mismatch_rejected(self) -> None:
        """Test DataValidationError when frame height differs from H."""
        with self.assertRaises(DataValidationError):
            compose_rs(random_burst(self.rng, 8, 9), ReadoutModel(8, 8))

    def test_gs_is_first_frame(self) -> None:
        """Test that the GS image is frame 0."""
        seq = random_burst(self.rng, 4, 8)
        self.assertTrue(images_equal(compose_gs(seq, ReadoutModel(8, 4)), seq[0]))

    def test_streaming_matches_batch(self) -> None:
        """Test that streaming composition equals the materialised one."""
        scene = Scene(
            40,
            32,
            [Actor(0, ShapeKind.ELLIPSE, (10.0, 14.0), (255, 0, 0), Trajectory.linear((20.0, 16.0), (900.0, 300.0), 1.0))],
        )
        model = ReadoutModel(32, 16)
        requested = []

        def render(k: int) -> ImageBuffer:
            requested.append(k)
            return render_frame(scene, model.frame_time(k))

        streamed = compose_rs_streaming(render, model)
        self.assertEqual(requested, list(range(16)))
        self.assertTrue(images_equal(streamed, compose_rs(render_burst(scene, model), model)))


if __name__ == "__main__":
    unittest.main()
