"""
Dataset Manifest

CSV index of a generated dataset, one row per case:

    case_id,institution_id,split,image,labels
    inst_a_000,inst_a,train,images/inst_a_000.nii,labels/inst_a_000.nii

Image and label paths are relative to the manifest's directory.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Union

import pandas as pd
from loguru import logger

from ..exceptions import InputValidationError
from ..volumes.labels import IntensityVolume, LabelVolume
from ..volumes.nifti_io import read_nifti

MANIFEST_COLUMNS = ["case_id", "institution_id", "split", "image", "labels"]
SPLITS = ("train", "val", "test")


@dataclass(frozen=True)
class ManifestCase:
    case_id: str
    institution_id: str
    split: str
    image: IntensityVolume
    labels: LabelVolume


def write_manifest(rows: Sequence[dict], path: Union[str, Path]) -> Path:
    """Write manifest rows (dicts keyed by MANIFEST_COLUMNS)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(list(rows), columns=MANIFEST_COLUMNS).to_csv(path, index=False)
    logger.info(f"Wrote manifest with {len(rows)} cases to {path}")
    return path


def read_manifest(path: Union[str, Path]) -> pd.DataFrame:
    """
    Read and validate a manifest.

    Raises:
        InputValidationError: Missing columns, unknown split names or duplicate case ids
    """
    path = Path(path)
    frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    missing = [c for c in MANIFEST_COLUMNS if c not in frame.columns]
    if missing:
        raise InputValidationError(f"{path}: manifest is missing columns {missing}")
    bad_splits = sorted(set(frame["split"]) - set(SPLITS))
    if bad_splits:
        raise InputValidationError(f"{path}: unknown split names {bad_splits}")
    duplicated = frame["case_id"][frame["case_id"].duplicated()].tolist()
    if duplicated:
        raise InputValidationError(f"{path}: duplicate case ids {duplicated}")
    logger.debug(f"Read manifest {path}: {len(frame)} cases")
    return frame[MANIFEST_COLUMNS]


def load_cases(
    manifest_path: Union[str, Path],
    institution: Optional[str] = None,
    split: Optional[str] = None
) -> List[ManifestCase]:
    """
    Load the cases of a manifest, optionally filtered by institution and split.

    Args:
        manifest_path: Manifest CSV
        institution: Keep only this institution
        split: Keep only this split (train, val or test)

    Returns:
        List[ManifestCase]: Cases in manifest order
    """
    manifest_path = Path(manifest_path)
    frame = read_manifest(manifest_path)
    if institution is not None:
        frame = frame[frame["institution_id"] == institution]
    if split is not None:
        frame = frame[frame["split"] == split]

    base = manifest_path.parent
    cases = [
        ManifestCase(
            case_id=row.case_id,
            institution_id=row.institution_id,
            split=row.split,
            image=read_nifti(base / row.image, as_labels=False),
            labels=read_nifti(base / row.labels, as_labels=True),
        )
        for row in frame.itertuples(index=False)
    ]
    logger.info(
        f"Loaded {len(cases)} cases from {manifest_path.name}"
        f" (institution={institution or 'all'}, split={split or 'all'})"
    )
    return cases
