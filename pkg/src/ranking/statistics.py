"""
Robustness Statistics

Institution-level summaries of an algorithm's performance:
- mean performance: unweighted mean over institutions of the per-institution
  case mean (institutions weigh equally, not cases)
- worst case: the institution with the worst per-institution mean
"""

from typing import Sequence, Tuple

import pandas as pd

from ..exceptions import InputValidationError
from .records import MetricRecord, records_to_frame

# Direction of "better" per metric
HIGHER_IS_BETTER = {"DSC": True, "HD95": False}


class MissingRecordsError(InputValidationError):
    """An institution has no usable values for the requested key."""


def per_institution_means(
    records: Sequence[MetricRecord],
    algorithm: str,
    metric: str,
    region: str
) -> pd.Series:
    """
    Mean case value per institution for one (algorithm, metric, region).

    Args:
        records: Metric records
        algorithm: Algorithm identifier
        metric: DSC or HD95
        region: ET, TC or WT

    Returns:
        pd.Series: institution -> mean value, sorted by institution

    Raises:
        MissingRecordsError: No records, or an institution with only missing values
    """
    frame = records_to_frame(records)
    subset = frame[
        (frame["algorithm"] == algorithm)
        & (frame["metric"] == metric)
        & (frame["region"] == region)
    ]
    if subset.empty:
        raise MissingRecordsError(f"No records for {algorithm}/{metric}/{region}")
    means = subset.groupby("institution", sort=True)["value"].mean()
    empty = means[means.isna()]
    if not empty.empty:
        raise MissingRecordsError(
            f"No present values for {algorithm}/{metric}/{region} at institutions {list(empty.index)}"
        )
    return means


def mean_performance(
    records: Sequence[MetricRecord],
    algorithm: str,
    metric: str,
    region: str
) -> float:
    """
    Mean performance across institutions (two-level mean).

    Example:
        Institution A cases {0.8, 0.6} and B cases {1.0} give
        mean(0.7, 1.0) = 0.85, while the pooled case mean is 0.8.
    """
    means = per_institution_means(records, algorithm, metric, region)
    return float(means.mean())


def worst_case_performance(
    records: Sequence[MetricRecord],
    algorithm: str,
    metric: str,
    region: str
) -> Tuple[str, float]:
    """
    Worst per-institution mean (minimum for DSC, maximum for HD95).

    Returns:
        tuple: (institution, value); ties resolve to the first institution by name
    """
    means = per_institution_means(records, algorithm, metric, region)
    institution = means.idxmax() if not HIGHER_IS_BETTER[metric] else means.idxmin()
    return str(institution), float(means[institution])
