"""
Surface Distance Metrics

95th-percentile Hausdorff distance between mask contours:

    HD95(PM, GT) = max( P95_{p in PM} d(p, GT), P95_{g in GT} d(g, PM) )

with d(x, Y) = min_{y in Y} ||x - y||.

Contours are the foreground voxels with at least one background 6-neighbor or
lying on the volume boundary; points are voxel centers scaled by spacing.
Percentiles use the nearest-rank rule (no interpolation). Nearest-neighbor
queries go through scipy's cKDTree, which returns exact Euclidean distances.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree

from ..exceptions import InputValidationError
from ..settings import HD95_EMPTY_PENALTY
from ..volumes.labels import BinaryMask
from .overlap import MetricKind, MetricValue, check_compatible

SIX_CONNECTIVITY = ndimage.generate_binary_structure(3, 1)


@dataclass(frozen=True)
class SurfacePointSet:
    """
    Contour points in millimeters.

    Attributes:
        points: (n, 3) array of voxel-center coordinates (index * spacing)
    """
    points: np.ndarray = field(default_factory=lambda: np.zeros((0, 3)))

    def __len__(self) -> int:
        return int(self.points.shape[0])

    def is_empty(self) -> bool:
        return len(self) == 0


def surface_voxels(mask: BinaryMask) -> SurfacePointSet:
    """
    Extract the 6-connectivity contour of a mask.

    Args:
        mask: Binary mask

    Returns:
        SurfacePointSet: Boundary voxel centers in millimeters
    """
    # border_value=0 erodes voxels on the volume boundary, keeping them as contour
    interior = ndimage.binary_erosion(mask.data, structure=SIX_CONNECTIVITY, border_value=0)
    contour = mask.data & ~interior
    indices = np.argwhere(contour).astype(np.float64)
    return SurfacePointSet(indices * np.asarray(mask.spacing, dtype=np.float64))


def nearest_rank_index(p: float, n: int) -> int:
    """1-based nearest-rank position ceil(p/100 * n), clamped to [1, n]."""
    # tolerance keeps exact products like 0.95 * 100 from rounding up
    rank = math.ceil(p * n / 100.0 - 1e-9)
    return min(max(rank, 1), n)


def directed_percentile_distance(a: SurfacePointSet, b: SurfacePointSet, p: float = 95.0) -> float:
    """
    Nearest-rank p-th percentile of distances from each point of A to B.

    Args:
        a: Source point set
        b: Target point set
        p: Percentile in (0, 100]

    Returns:
        float: Distance in millimeters

    Raises:
        InputValidationError: A or B is empty, or p out of range
    """
    if a.is_empty() or b.is_empty():
        raise InputValidationError("Directed percentile distance needs non-empty point sets")
    if not 0 < p <= 100:
        raise InputValidationError(f"Percentile must be in (0, 100], got {p}")
    distances, _ = cKDTree(b.points).query(a.points, k=1)
    distances = np.sort(np.asarray(distances, dtype=np.float64))
    return float(distances[nearest_rank_index(p, len(distances)) - 1])


def default_empty_penalty(mask: BinaryMask) -> float:
    """Euclidean diagonal of the volume's physical extent."""
    extent = np.asarray(mask.dims, dtype=np.float64) * np.asarray(mask.spacing, dtype=np.float64)
    return float(np.sqrt(np.sum(extent ** 2)))


def hd95(
    pm: BinaryMask,
    gt: BinaryMask,
    empty_penalty: Optional[float] = None
) -> MetricValue:
    """
    95th-percentile symmetric Hausdorff distance.

    Empty-mask policy:
    - both empty -> 0.0 (degenerate)
    - exactly one empty -> penalty (degenerate); penalty defaults to
      FETS_HD95_EMPTY_PENALTY, else the volume diagonal
    - non-empty masks -> distance, capped at the penalty

    Args:
        pm: Predicted mask
        gt: Ground-truth mask
        empty_penalty: Override for the one-empty penalty

    Returns:
        MetricValue: HD95 in millimeters
    """
    check_compatible(pm, gt)
    pm_empty = pm.is_empty()
    gt_empty = gt.is_empty()
    if pm_empty and gt_empty:
        return MetricValue(MetricKind.HD95, 0.0, degenerate=True)
    penalty = empty_penalty if empty_penalty is not None else HD95_EMPTY_PENALTY
    if penalty is None:
        penalty = default_empty_penalty(gt)
    if pm_empty or gt_empty:
        return MetricValue(MetricKind.HD95, float(penalty), degenerate=True)

    pm_surface = surface_voxels(pm)
    gt_surface = surface_voxels(gt)
    value = max(
        directed_percentile_distance(pm_surface, gt_surface, 95.0),
        directed_percentile_distance(gt_surface, pm_surface, 95.0),
    )
    # the penalty caps every value
    return MetricValue(MetricKind.HD95, min(value, float(penalty)))
