"""
Unit Tests for Segmentation Metrics

Tests DSC, contour extraction, percentile distances and HD95, including an
all-pairs brute-force oracle for HD95.
"""

import math

import numpy as np
import pytest

from src.metrics import (
    MaskMismatchError,
    SurfacePointSet,
    default_empty_penalty,
    dice,
    directed_percentile_distance,
    evaluate_case,
    hd95,
    surface_voxels,
)
from src.volumes import BinaryMask, LabelVolume


def _mask(shape, voxels, spacing=(1.0, 1.0, 1.0)):
    data = np.zeros(shape, dtype=bool)
    for voxel in voxels:
        data[voxel] = True
    return BinaryMask(data, spacing)


def _random_geometry(rng):
    """Random dims up to 12^3 with unit or anisotropic spacing."""
    shape = tuple(int(n) for n in rng.integers(2, 13, size=3))
    if rng.random() < 0.5:
        return shape, (1.0, 1.0, 1.0)
    return shape, tuple(float(s) for s in rng.uniform(0.5, 2.5, size=3))


def _brute_contour(mask):
    """Foreground voxels with a background (or out-of-volume) 6-neighbor."""
    data = mask.data
    points = []
    for idx in zip(*np.nonzero(data)):
        for axis in range(3):
            for step in (-1, 1):
                neighbor = list(idx)
                neighbor[axis] += step
                outside = not 0 <= neighbor[axis] < data.shape[axis]
                if outside or not data[tuple(neighbor)]:
                    points.append(np.asarray(idx, dtype=float) * np.asarray(mask.spacing))
                    break
            else:
                continue
            break
    return np.array(points).reshape(-1, 3)


def _brute_directed(a, b, p=95.0):
    pairwise = np.sqrt(((a[:, None, :] - b[None, :, :]) ** 2).sum(axis=2))
    dists = sorted(pairwise.min(axis=1).tolist())
    k = max(1, math.ceil(p / 100.0 * len(dists) - 1e-9))
    return dists[k - 1]


def _brute_hd95(pm, gt):
    a, b = _brute_contour(pm), _brute_contour(gt)
    return max(_brute_directed(a, b), _brute_directed(b, a))


class TestDice:
    """Tests for the Dice similarity coefficient."""

    def test_identical_masks(self):
        """Test that identical non-empty masks score 1.0."""
        m = _mask((3, 3, 3), [(0, 0, 0), (1, 1, 1)])
        assert dice(m, m).value == 1.0

    def test_disjoint_masks(self):
        """Test that disjoint masks score 0.0."""
        assert dice(_mask((3, 3, 3), [(0, 0, 0)]), _mask((3, 3, 3), [(2, 2, 2)])).value == 0.0

    def test_two_thirds(self):
        """Test |PM|=2, |GT|=1, overlap 1 gives 2/3."""
        pm = _mask((3, 3, 3), [(0, 0, 0), (0, 0, 1)])
        gt = _mask((3, 3, 3), [(0, 0, 0)])
        assert dice(pm, gt).value == pytest.approx(2.0 / 3.0, abs=1e-12)

    def test_both_empty_is_degenerate_one(self):
        """Test that two empty masks score 1.0 with the degenerate flag."""
        result = dice(_mask((2, 2, 2), []), _mask((2, 2, 2), []))
        assert result.value == 1.0
        assert result.degenerate

    def test_dims_mismatch(self):
        """Test that differently shaped masks are rejected."""
        with pytest.raises(MaskMismatchError):
            dice(_mask((2, 2, 2), []), _mask((2, 2, 3), []))

    def test_spacing_mismatch(self):
        """Test that different spacings are rejected."""
        with pytest.raises(MaskMismatchError):
            dice(_mask((2, 2, 2), [], (1, 1, 1)), _mask((2, 2, 2), [], (1, 1, 2)))

    def test_symmetric_and_matches_counting(self, rng):
        """Test symmetry and exact set counting on 200 random mask pairs."""
        for _ in range(200):
            shape, spacing = _random_geometry(rng)
            density = rng.uniform(0.05, 0.6)
            a = BinaryMask(rng.random(shape) < density, spacing)
            b = BinaryMask(rng.random(shape) < density, spacing)
            if a.is_empty() and b.is_empty():
                continue
            expected = 2 * np.sum(a.data & b.data) / (a.count + b.count)
            assert dice(a, b).value == pytest.approx(expected, abs=1e-12)
            assert dice(a, b).value == dice(b, a).value


class TestSurface:
    """Tests for contour extraction and directed distances."""

    def test_single_voxel(self):
        """Test that a lone voxel is its own contour."""
        points = surface_voxels(_mask((3, 3, 3), [(1, 2, 0)], spacing=(2.0, 1.0, 1.0)))
        assert points.points.tolist() == [[2.0, 2.0, 0.0]]

    def test_block_shell(self):
        """Test that a 3^3 block in a 5^3 volume keeps its 26 shell voxels."""
        block = [(x, y, z) for x in range(1, 4) for y in range(1, 4) for z in range(1, 4)]
        points = surface_voxels(_mask((5, 5, 5), block))
        assert len(points) == 26
        assert [2.0, 2.0, 2.0] not in points.points.tolist()

    def test_volume_boundary_counts_as_contour(self):
        """Test that a full volume's contour is its outer layer."""
        points = surface_voxels(BinaryMask(np.ones((3, 3, 3), dtype=bool)))
        assert len(points) == 26

    def test_empty_mask(self):
        """Test that an empty mask has no contour."""
        assert surface_voxels(_mask((3, 3, 3), [])).is_empty()

    def test_contour_matches_brute_force(self, rng):
        """Test contour extraction against neighbor enumeration."""
        mask = BinaryMask(rng.random((7, 6, 5)) < 0.5, (1.0, 1.5, 0.5))
        fast = sorted(map(tuple, surface_voxels(mask).points.tolist()))
        slow = sorted(map(tuple, _brute_contour(mask).tolist()))
        assert fast == slow

    def test_identical_sets(self):
        """Test that A = B gives distance 0."""
        a = SurfacePointSet(np.array([[0.0, 0, 0], [1, 2, 3]]))
        assert directed_percentile_distance(a, a) == 0.0

    def test_single_distance(self):
        """Test {(0,0,0)} to {(3,0,0)} at p=95."""
        a = SurfacePointSet(np.array([[0.0, 0, 0]]))
        b = SurfacePointSet(np.array([[3.0, 0, 0]]))
        assert directed_percentile_distance(a, b, 95) == 3.0

    def test_nearest_rank_of_hundred(self):
        """Test that distances 1..100 give the 95th value at p=95."""
        a = SurfacePointSet(np.array([[float(d), 0.0, 0.0] for d in range(1, 101)]))
        b = SurfacePointSet(np.array([[0.0, 0.0, 0.0]]))
        assert directed_percentile_distance(a, b, 95) == 95.0

    def test_monotone_in_percentile(self, rng):
        """Test p=100 >= p=95 >= p=50."""
        a = SurfacePointSet(rng.random((40, 3)) * 10)
        b = SurfacePointSet(rng.random((25, 3)) * 10)
        d100, d95, d50 = (directed_percentile_distance(a, b, p) for p in (100, 95, 50))
        assert d100 >= d95 >= d50

    def test_empty_set_rejected(self):
        """Test that empty point sets are an error."""
        with pytest.raises(ValueError):
            directed_percentile_distance(SurfacePointSet(), SurfacePointSet(np.zeros((1, 3))))


class TestHD95:
    """Tests for the 95th-percentile Hausdorff distance."""

    def test_identical_masks(self):
        """Test that identical masks are 0 apart."""
        m = _mask((4, 4, 4), [(1, 1, 1), (2, 2, 2)])
        assert hd95(m, m).value == 0.0

    def test_both_empty(self):
        """Test both-empty policy: 0.0, degenerate."""
        result = hd95(_mask((3, 3, 3), []), _mask((3, 3, 3), []))
        assert result.value == 0.0
        assert result.degenerate

    def test_one_empty_uses_diagonal(self):
        """Test that one empty mask scores the volume diagonal by default."""
        pm = _mask((3, 4, 12), [(0, 0, 0)], spacing=(1.0, 1.0, 1.0))
        result = hd95(pm, _mask((3, 4, 12), []))
        assert result.degenerate
        assert result.value == pytest.approx(13.0)
        assert result.value == default_empty_penalty(pm)

    def test_one_empty_explicit_penalty(self):
        """Test that an explicit penalty wins."""
        result = hd95(_mask((3, 3, 3), []), _mask((3, 3, 3), [(1, 1, 1)]), empty_penalty=373.13)
        assert result.value == 373.13

    def test_singletons(self):
        """Test single voxels at (0,0,0) and (4,0,0) are 4 mm apart."""
        assert hd95(_mask((5, 1, 1), [(0, 0, 0)]), _mask((5, 1, 1), [(4, 0, 0)])).value == 4.0

    def test_matches_brute_force_oracle(self, rng):
        """Test HD95 against all-pairs brute force on 200 random mask pairs."""
        checked = 0
        while checked < 200:
            shape, spacing = _random_geometry(rng)
            density = rng.uniform(0.05, 0.5)
            pm = BinaryMask(rng.random(shape) < density, spacing)
            gt = BinaryMask(rng.random(shape) < density, spacing)
            if pm.is_empty() or gt.is_empty():
                continue
            assert abs(hd95(pm, gt).value - _brute_hd95(pm, gt)) <= 1e-9
            checked += 1

    def test_penalty_caps_distance(self):
        """Test that a configured penalty bounds HD95 of non-empty masks."""
        pm = _mask((12, 1, 1), [(0, 0, 0)])
        gt = _mask((12, 1, 1), [(11, 0, 0)])
        assert hd95(pm, gt).value == 11.0
        capped = hd95(pm, gt, empty_penalty=5.0)
        assert capped.value == 5.0
        assert not capped.degenerate

    def test_never_exceeds_penalty(self, rng):
        """Test HD95 <= penalty for default and explicit penalties."""
        for _ in range(50):
            shape, spacing = _random_geometry(rng)
            pm = BinaryMask(rng.random(shape) < 0.3, spacing)
            gt = BinaryMask(rng.random(shape) < 0.3, spacing)
            assert hd95(pm, gt).value <= default_empty_penalty(gt)
            assert hd95(pm, gt, empty_penalty=2.5).value <= 2.5

    def test_symmetric(self, rng):
        """Test hd95(a, b) == hd95(b, a)."""
        a = BinaryMask(rng.random((6, 6, 6)) < 0.3)
        b = BinaryMask(rng.random((6, 6, 6)) < 0.3)
        assert hd95(a, b).value == hd95(b, a).value

    def test_spacing_scales_distance(self, rng):
        """Test that scaling spacing by s scales HD95 by s and leaves DSC unchanged."""
        data_a = rng.random((6, 6, 6)) < 0.3
        data_b = rng.random((6, 6, 6)) < 0.3
        base = hd95(BinaryMask(data_a), BinaryMask(data_b)).value
        scaled = hd95(BinaryMask(data_a, (2.0, 2.0, 2.0)), BinaryMask(data_b, (2.0, 2.0, 2.0))).value
        assert scaled == pytest.approx(2.0 * base, rel=1e-12)
        assert dice(BinaryMask(data_a), BinaryMask(data_b)).value == \
            dice(BinaryMask(data_a, (2.0, 2.0, 2.0)), BinaryMask(data_b, (2.0, 2.0, 2.0))).value


class TestEvaluateCase:
    """Tests for per-case record generation."""

    def test_perfect_prediction(self):
        """Test that prediction = ground truth gives DSC 1 and HD95 0 for all regions."""
        data = np.zeros((5, 5, 5), dtype=np.uint8)
        data[1:4, 1:4, 1:4] = 1
        data[2, 2, 1:4] = 2
        data[2, 2, 2] = 4
        gt = LabelVolume(data)
        records = evaluate_case(gt, gt, "alg", "inst", "case_0")
        assert len(records) == 6
        assert sorted(r.value for r in records if r.metric == "DSC") == [1.0, 1.0, 1.0]
        assert sorted(r.value for r in records if r.metric == "HD95") == [0.0, 0.0, 0.0]

    def test_missing_prediction(self):
        """Test that a missing prediction yields 6 missing-flagged records."""
        records = evaluate_case(None, LabelVolume.zeros((3, 3, 3)), "alg", "inst", "case_0")
        assert len(records) == 6
        assert all(r.missing and r.value is None for r in records)
