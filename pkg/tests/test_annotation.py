"""Tests for box models, the RS ground-truth transform and dataset statistics."""

import unittest

import numpy as np

from rollscan.common.exceptions import DataValidationError, ValidationError
from rollscan.models.annotation import BBox, DetectionSet, GroundTruthSet, Track, pixel_span
from rollscan.models.readout import ReadoutModel, ScanDirection
from rollscan.models.scene import Actor, Scene, ShapeKind, Trajectory
from rollscan.services.annotation_service import (
    dataset_stats,
    ground_truth_as_detections,
    gs_boxes,
    merge_ground_truth,
    transform_gt_gs,
    transform_gt_rs,
    transform_track_to_rs,
)
from rollscan.services.scene_service import gt_tracks
from tests.oracles import actor_masks, compose_mask, rs_oracle_boxes


def static_track(box: BBox, frames: int, actor_id: int = 0) -> Track:
    """Track that repeats one box."""
    return Track(actor_id, tuple([box] * frames))


class TestBBox(unittest.TestCase):
    """Test cases for BBox."""

    def test_geometry(self) -> None:
        """Test width, height and area."""
        box = BBox(1.0, 2.0, 4.0, 7.0)
        self.assertEqual((box.width, box.height, box.area), (3.0, 5.0, 15.0))

    def test_inverted_box_rejected(self) -> None:
        """Test validation of corner order."""
        with self.assertRaises(ValidationError):
            BBox(5.0, 0.0, 4.0, 1.0)

    def test_non_finite_rejected(self) -> None:
        """Test validation of NaN coordinates."""
        with self.assertRaises(ValidationError):
            BBox(0.0, 0.0, float("nan"), 1.0)

    def test_clamp(self) -> None:
        """Test clamping to the image rectangle."""
        clamped = BBox(-3.0, 5.0, 4.0, 30.0, 2).clamp(10, 20)
        self.assertEqual(clamped, BBox(0.0, 5.0, 4.0, 20.0, 2))
        self.assertTrue(BBox(12.0, 0.0, 15.0, 5.0).clamp(10, 20).is_empty())

    def test_pixel_span(self) -> None:
        """Test pixel-centre sampling of extents."""
        self.assertEqual(pixel_span(2.0, 5.0), (2, 5))
        self.assertEqual(pixel_span(2.5, 5.5), (2, 5))
        self.assertEqual(pixel_span(2.6, 3.4), (3, 3))
        self.assertEqual(pixel_span(2.0 - 1e-12, 5.0 + 1e-12), (2, 5))

    def test_occupies_row(self) -> None:
        """Test row occupancy at row centres."""
        box = BBox(0.0, 2.4, 1.0, 4.6)
        self.assertEqual([r for r in range(6) if box.occupies_row(r)], [2, 3, 4])


class TestTransformTrackToRs(unittest.TestCase):
    """Test cases for transform_track_to_rs."""

    def setUp(self) -> None:
        """Set up test fixtures."""
        self.rng = np.random.default_rng(99)
        self.model = ReadoutModel(64, 64)

    def test_static_fixpoint(self) -> None:
        """Test that a static actor keeps its exact box, fractional edges included."""
        for _ in range(30):
            x0 = float(self.rng.uniform(0, 150))
            y0 = float(self.rng.uniform(0, 40))
            box = BBox(x0, y0, x0 + float(self.rng.uniform(2, 40)), y0 + float(self.rng.uniform(2, 20)))
            result = transform_track_to_rs(static_track(box, 64), self.model, (200, 64))
            self.assertEqual(result, [box])

    def test_shear(self) -> None:
        """Test horizontal skew of one pixel per row."""
        track = Track(0, tuple(BBox(10.0 + k, 20.0, 20.0 + k, 40.0) for k in range(64)))
        (box,) = transform_track_to_rs(track, self.model, (200, 64))
        self.assertEqual(box.width, 29.0)
        self.assertEqual((box.y_min, box.y_max), (20.0, 40.0))
        self.assertEqual((box.x_min, box.x_max), (30.0, 59.0))

    def test_shear_law_random(self) -> None:
        """Test width w + v(h - 1) and the rendered RS mask extent on random horizontal motion."""
        for trial in range(20):
            w = int(self.rng.integers(2, 21))
            h = int(self.rng.integers(2, 41))
            v = float(self.rng.uniform(0.0, 5.0))
            x0 = int(self.rng.integers(5, 40))
            y0 = int(self.rng.integers(0, 64 - h + 1))
            rate = self.model.source_frame_rate
            actor = Actor(
                0,
                ShapeKind.RECTANGLE,
                (float(w), float(h)),
                (255, 0, 0),
                Trajectory.linear((x0 + w / 2, y0 + h / 2), (v * rate, 0.0), 1.0),
            )
            scene = Scene(400, 64, [actor], (96, 96, 96))

            (box,) = transform_track_to_rs(gt_tracks(scene, self.model)[0], self.model, (400, 64))
            self.assertLessEqual(abs(box.width - (w + v * (h - 1))), 1.0, f"trial {trial}")
            self.assertEqual((box.y_min, box.y_max), (float(y0), float(y0 + h)))

            mask = compose_mask(actor_masks(scene, self.model), self.model)
            rows = np.flatnonzero(mask.any(axis=1))
            cols = np.flatnonzero(mask.any(axis=0))
            tight = (cols[0], rows[0], cols[-1] + 1, rows[-1] + 1)
            for got, want in zip((box.x_min, box.y_min, box.x_max, box.y_max), tight):
                self.assertLessEqual(abs(got - float(want)), 1.0, f"trial {trial}")

    def test_fragments_split_and_merge(self) -> None:
        """Test fragment policies for an actor outrunning the scan."""
        model = ReadoutModel(16, 4)
        track = Track(0, tuple(BBox(2.0, 1.0 + 4 * k, 6.0, 3.0 + 4 * k) for k in range(4)))
        split = transform_track_to_rs(track, model, (10, 16))
        self.assertEqual(
            split,
            [BBox(2.0, 1.0 + 4 * k, 6.0, 3.0 + 4 * k) for k in range(4)],
        )
        merged = transform_track_to_rs(track, model, (10, 16), policy="merge")
        self.assertEqual(merged, [BBox(2.0, 1.0, 6.0, 15.0)])

    def test_actor_never_sampled(self) -> None:
        """Test that an actor missed by every row yields no box."""
        model = ReadoutModel(16, 4)
        # rows 0-3 see the box at rows 8-9, later rows see it above them
        track = Track(0, tuple(BBox(2.0, 8.0 - 8 * k, 6.0, 10.0 - 8 * k) for k in range(4)))
        self.assertEqual(transform_track_to_rs(track, model, (10, 16)), [])

    def test_clamped_to_image(self) -> None:
        """Test clamping of partly visible actors."""
        box = BBox(-4.0, 60.0, 6.0, 70.0)
        result = transform_track_to_rs(static_track(box, 64), self.model, (200, 64))
        self.assertEqual(result, [BBox(0.0, 60.0, 6.0, 64.0)])

    def test_class_id_kept(self) -> None:
        """Test that the track's class id is carried."""
        box = BBox(5.0, 5.0, 9.0, 9.0, 3)
        (result,) = transform_track_to_rs(static_track(box, 64), self.model, (20, 64))
        self.assertEqual(result.class_id, 3)

    def test_short_track_rejected(self) -> None:
        """Test DataValidationError for fewer boxes than frames."""
        with self.assertRaises(DataValidationError):
            transform_track_to_rs(static_track(BBox(0.0, 0.0, 1.0, 1.0), 10), self.model, (20, 64))

    def test_height_mismatch_rejected(self) -> None:
        """Test DataValidationError when image height differs from H."""
        with self.assertRaises(DataValidationError):
            transform_track_to_rs(static_track(BBox(0.0, 0.0, 1.0, 1.0), 64), self.model, (20, 63))

    def test_unknown_policy_rejected(self) -> None:
        """Test fragment policy validation."""
        with self.assertRaises(DataValidationError):
            transform_track_to_rs(static_track(BBox(0.0, 0.0, 1.0, 1.0), 64), self.model, (20, 64), "join")

    def test_matches_rendered_oracle(self) -> None:
        """Test agreement with boxes of the rendered RS mask on random single-actor scenes."""
        for trial in range(120):
            height = (32, 64)[trial % 2]
            frames = height // (1, 2, 4)[(trial // 2) % 3]
            direction = list(ScanDirection)[(trial // 6) % 2]
            model = ReadoutModel(height, frames, direction)
            rate = model.source_frame_rate

            w = int(self.rng.integers(2, 20))
            h = int(self.rng.integers(2, 24))
            x0 = int(self.rng.integers(70, 110))
            y0 = int(self.rng.integers(-h + 1, height))
            vx = int(self.rng.integers(-1, 2))
            vy = int(self.rng.integers(-4, 5))
            actor = Actor(
                0,
                ShapeKind.RECTANGLE,
                (float(w), float(h)),
                (255, 0, 0),
                Trajectory.linear((x0 + w / 2, y0 + h / 2), (vx * rate, vy * rate), 1.0),
            )
            scene = Scene(200, height, [actor], (96, 96, 96))

            expected = rs_oracle_boxes(scene, model)
            result = transform_track_to_rs(gt_tracks(scene, model)[0], model, (200, height))
            self.assertEqual(len(result), len(expected), f"trial {trial}")
            for got, want in zip(result, expected):
                for a, b in zip((got.x_min, got.y_min, got.x_max, got.y_max), want):
                    self.assertAlmostEqual(a, b, places=6, msg=f"trial {trial}")


class TestGroundTruthSets(unittest.TestCase):
    """Test cases for per-capture GT sets and statistics."""

    def setUp(self) -> None:
        """Set up test fixtures."""
        self.model = ReadoutModel(32, 32)
        self.tracks = [
            static_track(BBox(2.0, 2.0, 12.0, 12.0), 32, 0),
            Track(1, tuple(BBox(20.0 + k, 4.0, 30.0 + k, 14.0) for k in range(32))),
            static_track(BBox(50.0, 0.0, 60.0, 0.3), 32, 2),
        ]

    def test_gs_boxes_drop_uncovered(self) -> None:
        """Test that boxes covering no row centre are dropped."""
        boxes = gs_boxes(self.tracks, (64, 32))
        self.assertEqual(boxes, [BBox(2.0, 2.0, 12.0, 12.0), BBox(20.0, 4.0, 30.0, 14.0)])

    def test_transform_gt_gs_and_rs(self) -> None:
        """Test per-capture GT sets."""
        gs = transform_gt_gs(self.tracks, self.model, (64, 32), "capture_000000")
        rs = transform_gt_rs(self.tracks, self.model, (64, 32), "capture_000000")
        self.assertEqual(gs.count(), 2)
        self.assertEqual(rs.count(), 2)
        self.assertEqual(rs.image_info("capture_000000").size, (64, 32))
        sheared = rs.get_or_raise("capture_000000")[1]
        self.assertEqual((sheared.x_min, sheared.x_max), (24.0, 43.0))

    def test_merge_rejects_duplicates(self) -> None:
        """Test that merging two sets with the same image id fails."""
        gs = transform_gt_gs(self.tracks, self.model, (64, 32), "capture_000000")
        with self.assertRaises(DataValidationError):
            merge_ground_truth([gs, gs])

    def test_ground_truth_as_detections(self) -> None:
        """Test GT replay as detections."""
        gs = transform_gt_gs(self.tracks, self.model, (64, 32), "capture_000000")
        dets = ground_truth_as_detections(gs)
        self.assertIsInstance(dets, DetectionSet)
        self.assertEqual(dets.count(), 2)
        self.assertTrue(all(det.confidence == 1.0 for det in dets.all_items()))

    def test_dataset_stats(self) -> None:
        """Test box statistics."""
        gts = GroundTruthSet()
        gts.add_image("a", 100, 100)
        gts.add_image("b", 100, 100)
        gts.add_all("a", [BBox(0.0, 0.0, 10.0, 10.0), BBox(0.0, 0.0, 10.0, 30.0)])
        stats = dataset_stats(gts)
        self.assertEqual(stats["total_boxes"], 2)
        self.assertEqual(stats["mean_box_area"], 200.0)
        self.assertEqual(stats["annotated_images"], 1)
        self.assertEqual(stats["mean_boxes_per_annotated_image"], 2.0)
        self.assertEqual(stats["boxes_per_image_histogram"], {"0": 1, "2": 1})

    def test_dataset_stats_empty(self) -> None:
        """Test that statistics of an empty set are absent."""
        stats = dataset_stats(GroundTruthSet())
        self.assertEqual(stats["total_boxes"], 0)
        self.assertIsNone(stats["mean_box_area"])
        self.assertIsNone(stats["mean_boxes_per_annotated_image"])


if __name__ == "__main__":
    unittest.main()
