"""
Overlap Metrics

Dice similarity coefficient between a predicted mask (PM) and the ground
truth (GT): DSC = 2|GT ∩ PM| / (|GT| + |PM|).
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..exceptions import InputValidationError
from ..volumes.labels import BinaryMask


class MetricKind(str, Enum):
    DSC = "DSC"
    HD95 = "HD95"


@dataclass(frozen=True)
class MetricValue:
    """
    A single metric result.

    Attributes:
        kind: DSC (dimensionless) or HD95 (millimeters)
        value: Metric value
        degenerate: True when an empty-mask policy produced the value
    """
    kind: MetricKind
    value: float
    degenerate: bool = False


class MaskMismatchError(InputValidationError):
    """Masks compared with different dims or spacing."""


def check_compatible(pm: BinaryMask, gt: BinaryMask) -> None:
    if pm.dims != gt.dims:
        raise MaskMismatchError(f"Mask dims differ: {pm.dims} vs {gt.dims}")
    if pm.spacing != gt.spacing:
        raise MaskMismatchError(f"Mask spacing differs: {pm.spacing} vs {gt.spacing}")


def dice(pm: BinaryMask, gt: BinaryMask) -> MetricValue:
    """
    Dice similarity coefficient.

    Both masks empty counts as perfect agreement (1.0, degenerate).

    Args:
        pm: Predicted mask
        gt: Ground-truth mask

    Returns:
        MetricValue: DSC in [0, 1]

    Raises:
        MaskMismatchError: dims or spacing differ
    """
    check_compatible(pm, gt)
    pm_count = pm.count
    gt_count = gt.count
    if pm_count + gt_count == 0:
        return MetricValue(MetricKind.DSC, 1.0, degenerate=True)
    intersection = int(np.count_nonzero(pm.data & gt.data))
    return MetricValue(MetricKind.DSC, 2.0 * intersection / (pm_count + gt_count))
