"""
Per-Case Evaluation

Scores one predicted label volume against its ground truth for every region
and metric, producing the MetricRecords consumed by the ranking module.
"""

from typing import List, Optional

from loguru import logger

from ..ranking.records import MetricRecord
from ..volumes.labels import DEFAULT_REGION_MAP, LabelVolume, Region, RegionMap, region_mask
from .overlap import MetricKind, dice
from .surface import hd95


def evaluate_case(
    prediction: Optional[LabelVolume],
    ground_truth: LabelVolume,
    algorithm: str,
    institution: str,
    case: str,
    region_map: RegionMap = DEFAULT_REGION_MAP,
    empty_penalty: Optional[float] = None
) -> List[MetricRecord]:
    """
    Compute DSC and HD95 for ET, TC and WT.

    Args:
        prediction: Predicted labels, or None when the prediction is missing
        ground_truth: Reference labels
        algorithm: Algorithm identifier for the records
        institution: Institution identifier for the records
        case: Case identifier for the records
        region_map: Region label sets
        empty_penalty: HD95 value when exactly one mask is empty

    Returns:
        List[MetricRecord]: Six records (3 regions x 2 metrics)
    """
    records: List[MetricRecord] = []
    if prediction is None:
        logger.warning(f"Missing prediction for case {case} ({algorithm}), flagging 6 records")
        for region in Region:
            for kind in MetricKind:
                records.append(MetricRecord(algorithm, institution, case, region.value, kind.value, None, True))
        return records

    for region in Region:
        pm = region_mask(prediction, region, region_map)
        gt = region_mask(ground_truth, region, region_map)
        for result in (dice(pm, gt), hd95(pm, gt, empty_penalty)):
            if result.degenerate:
                logger.debug(f"{case}/{region.value}/{result.kind.value}: empty-mask policy applied")
            records.append(MetricRecord(
                algorithm, institution, case, region.value, result.kind.value, result.value, False
            ))
    return records
