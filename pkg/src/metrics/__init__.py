"""
Metrics Module

Per-case segmentation metrics computed per region on binary masks:
- Dice similarity coefficient (overlap)
- 95th-percentile Hausdorff distance between mask contours (surface)
"""

from .case_metrics import evaluate_case
from .overlap import MaskMismatchError, MetricKind, MetricValue, dice
from .surface import (
    SurfacePointSet,
    default_empty_penalty,
    directed_percentile_distance,
    hd95,
    surface_voxels,
)

__all__ = [
    'evaluate_case',
    'MaskMismatchError',
    'MetricKind',
    'MetricValue',
    'dice',
    'SurfacePointSet',
    'default_empty_penalty',
    'directed_percentile_distance',
    'hd95',
    'surface_voxels',
]
