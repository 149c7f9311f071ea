"""
Metric Records

One MetricRecord per (algorithm, institution, case, region, metric). Records
travel as CSV with header:

    algorithm,institution,case,region,metric,value,missing
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from loguru import logger

from ..exceptions import InputValidationError

RECORD_COLUMNS = ["algorithm", "institution", "case", "region", "metric", "value", "missing"]
RECORD_KEY = ["algorithm", "institution", "case", "region", "metric"]
REGIONS = ("ET", "TC", "WT")
METRICS = ("DSC", "HD95")


class DuplicateRecordError(InputValidationError):
    """More than one record for the same key."""


@dataclass(frozen=True)
class MetricRecord:
    """
    A single per-case metric value.

    Attributes:
        algorithm: Algorithm identifier
        institution: Institution the case belongs to
        case: Case identifier
        region: ET, TC or WT
        metric: DSC or HD95
        value: Metric value, None when the prediction is missing
        missing: True when no prediction was available
    """
    algorithm: str
    institution: str
    case: str
    region: str
    metric: str
    value: Optional[float]
    missing: bool = False

    def __post_init__(self):
        if self.region not in REGIONS:
            raise InputValidationError(f"Unknown region {self.region!r}")
        if self.metric not in METRICS:
            raise InputValidationError(f"Unknown metric {self.metric!r}")
        if not self.missing and (self.value is None or not np.isfinite(self.value)):
            raise InputValidationError(f"Record {self.key} has no finite value and is not flagged missing")

    @property
    def key(self) -> tuple:
        return (self.algorithm, self.institution, self.case, self.region, self.metric)


def records_to_frame(records: Iterable[MetricRecord]) -> pd.DataFrame:
    """
    Convert records to a DataFrame, rejecting duplicate keys.

    Args:
        records: Metric records

    Returns:
        pd.DataFrame: Columns RECORD_COLUMNS; missing values are NaN
    """
    rows = [
        {
            "algorithm": r.algorithm,
            "institution": r.institution,
            "case": r.case,
            "region": r.region,
            "metric": r.metric,
            "value": np.nan if r.missing else float(r.value),
            "missing": bool(r.missing),
        }
        for r in records
    ]
    frame = pd.DataFrame(rows, columns=RECORD_COLUMNS)
    duplicated = frame.duplicated(subset=RECORD_KEY, keep=False)
    if duplicated.any():
        first = tuple(frame.loc[duplicated, RECORD_KEY].iloc[0])
        raise DuplicateRecordError(f"Duplicate metric record for key {first}")
    return frame


def frame_to_records(frame: pd.DataFrame) -> List[MetricRecord]:
    records = []
    for row in frame.itertuples(index=False):
        missing = bool(row.missing)
        records.append(MetricRecord(
            algorithm=str(row.algorithm),
            institution=str(row.institution),
            case=str(row.case),
            region=str(row.region),
            metric=str(row.metric),
            value=None if missing else float(row.value),
            missing=missing,
        ))
    return records


def write_metric_csv(records: Sequence[MetricRecord], path: Union[str, Path]) -> Path:
    """
    Write records as CSV (missing values as empty fields).

    Args:
        records: Metric records
        path: Output CSV path

    Returns:
        Path: The written file
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = records_to_frame(records)
    frame["missing"] = frame["missing"].astype(int)
    frame.to_csv(path, index=False, float_format="%.17g")
    logger.info(f"Wrote {len(frame)} metric records to {path}")
    return path


def _parse_missing(value) -> bool:
    if isinstance(value, str):
        return value.strip().lower() in {"1", "true", "yes"}
    if pd.isna(value):
        return False
    return bool(int(value))


def read_metric_csv(paths: Union[str, Path, Sequence[Union[str, Path]]]) -> List[MetricRecord]:
    """
    Read one or more metric CSV files.

    Args:
        paths: A CSV path or a list of them

    Returns:
        List[MetricRecord]: Records from all files

    Raises:
        InputValidationError: Missing columns
        DuplicateRecordError: Same key in more than one row
    """
    if isinstance(paths, (str, Path)):
        paths = [paths]
    frames = []
    for path in paths:
        frame = pd.read_csv(path, dtype={"algorithm": str, "institution": str, "case": str})
        absent = set(RECORD_COLUMNS) - set(frame.columns)
        if absent:
            raise InputValidationError(f"{path}: missing columns {sorted(absent)}")
        frame["missing"] = frame["missing"].map(_parse_missing)
        frames.append(frame[RECORD_COLUMNS])
        logger.debug(f"Read {len(frame)} records from {path}")
    combined = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame(columns=RECORD_COLUMNS)
    records = frame_to_records(combined)
    records_to_frame(records)  # duplicate check across files
    return records
