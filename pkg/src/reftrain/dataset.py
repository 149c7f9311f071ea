"""
Case Datasets

Dataset handle passed to trainers as train_set / val_set: per-voxel features
and class targets of a list of cases, computed once.
"""

from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np
from loguru import logger

from ..volumes.labels import IntensityVolume, LabelVolume
from .features import N_FEATURES, voxel_features

# Output class index -> label value
CLASS_LABELS = np.array([0, 1, 2, 4], dtype=np.uint8)
_LABEL_TO_CLASS = np.zeros(5, dtype=np.int64)
_LABEL_TO_CLASS[CLASS_LABELS] = np.arange(len(CLASS_LABELS))


def labels_to_classes(labels: LabelVolume) -> np.ndarray:
    """Class index per voxel (x-fastest order)."""
    return _LABEL_TO_CLASS[labels.data.ravel(order="F")]


def classes_to_labels(classes: np.ndarray, image: IntensityVolume) -> LabelVolume:
    """Inverse of labels_to_classes on the image's grid."""
    data = CLASS_LABELS[classes].reshape(image.dims, order="F")
    return LabelVolume(data, image.spacing)


@dataclass(frozen=True)
class DatasetCase:
    case_id: str
    image: IntensityVolume
    labels: LabelVolume


@dataclass
class CaseDataset:
    """
    Cases plus their stacked feature matrix and targets.

    Attributes:
        cases: The cases, in order
        features: (n_voxels_total, 4) float64
        targets: (n_voxels_total,) class indices into CLASS_LABELS
    """
    cases: List[DatasetCase]
    features: np.ndarray = field(repr=False)
    targets: np.ndarray = field(repr=False)

    @classmethod
    def from_cases(cls, cases: Sequence) -> "CaseDataset":
        """Build from objects exposing case_id, image and labels."""
        items = [DatasetCase(c.case_id, c.image, c.labels) for c in cases]
        if items:
            features = np.concatenate([voxel_features(c.image) for c in items])
            targets = np.concatenate([labels_to_classes(c.labels) for c in items])
        else:
            features = np.zeros((0, N_FEATURES))
            targets = np.zeros(0, dtype=np.int64)
        logger.debug(f"Built dataset: {len(items)} cases, {len(targets)} voxels")
        return cls(items, features, targets)

    @classmethod
    def concat(cls, datasets: Sequence["CaseDataset"]) -> "CaseDataset":
        """Pool several datasets (used by the pooled-data baseline)."""
        return cls(
            cases=[c for d in datasets for c in d.cases],
            features=np.concatenate([d.features for d in datasets]),
            targets=np.concatenate([d.targets for d in datasets]),
        )

    def __len__(self) -> int:
        return len(self.cases)

    @property
    def n_voxels(self) -> int:
        return int(self.targets.size)

    def case_slices(self) -> List[slice]:
        """Row range of each case in features / targets."""
        slices, start = [], 0
        for case in self.cases:
            size = int(np.prod(case.image.dims))
            slices.append(slice(start, start + size))
            start += size
        return slices
