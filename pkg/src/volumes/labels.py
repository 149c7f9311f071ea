"""
Label Volumes and Region Masks

This module defines the voxel-grid types used throughout the toolkit and the
mapping from tumor sub-region labels to the three evaluated regions:
- LabelVolume: labels {0, 1, 2, 4} (NCR = 1, ED = 2, ET = 4, background = 0)
- BinaryMask: foreground flags for one region
- IntensityVolume: single-channel image intensities

Arrays are indexed [x, y, z]; flattening uses x-fastest (Fortran) order, the
NIfTI voxel order.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Tuple

import numpy as np
from loguru import logger

from ..settings import tc_labels

VALID_LABELS: FrozenSet[int] = frozenset({0, 1, 2, 4})
TUMOR_LABELS: FrozenSet[int] = frozenset({1, 2, 4})

Spacing = Tuple[float, float, float]
Dims = Tuple[int, int, int]


def _check_geometry(data: np.ndarray, spacing: Spacing) -> Spacing:
    if data.ndim != 3:
        raise ValueError(f"Volume data must be 3D, got shape {data.shape}")
    if any(n < 1 for n in data.shape):
        raise ValueError(f"Volume dims must all be >= 1, got {data.shape}")
    spacing = tuple(float(s) for s in spacing)
    if len(spacing) != 3 or not all(np.isfinite(s) and s > 0 for s in spacing):
        raise ValueError(f"Spacing must be three positive values, got {spacing}")
    return spacing


def _freeze(data: np.ndarray) -> np.ndarray:
    frozen = np.array(data, copy=True)
    frozen.setflags(write=False)
    return frozen


@dataclass(frozen=True, eq=False)
class LabelVolume:
    """
    3D grid of tumor sub-region labels with physical spacing.

    Attributes:
        data: uint8 array of shape (nx, ny, nz), values in {0, 1, 2, 4}
        spacing: Millimeters per voxel along x, y, z
    """
    data: np.ndarray
    spacing: Spacing = (1.0, 1.0, 1.0)

    def __post_init__(self):
        data = np.asarray(self.data)
        spacing = _check_geometry(data, self.spacing)
        present = set(np.unique(data).tolist())
        invalid = present - VALID_LABELS
        if invalid:
            raise ValueError(f"Label values outside {{0,1,2,4}}: {sorted(invalid)}")
        object.__setattr__(self, "data", _freeze(data.astype(np.uint8)))
        object.__setattr__(self, "spacing", spacing)

    @property
    def dims(self) -> Dims:
        return tuple(int(n) for n in self.data.shape)

    def labels_present(self) -> FrozenSet[int]:
        return frozenset(np.unique(self.data).tolist())

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabelVolume):
            return NotImplemented
        return self.spacing == other.spacing and np.array_equal(self.data, other.data)

    @classmethod
    def zeros(cls, dims: Dims, spacing: Spacing = (1.0, 1.0, 1.0)) -> "LabelVolume":
        return cls(np.zeros(dims, dtype=np.uint8), spacing)


@dataclass(frozen=True, eq=False)
class BinaryMask:
    """
    Foreground flags for a single region (the PM / GT sets of the overlap metrics).

    Attributes:
        data: bool array of shape (nx, ny, nz)
        spacing: Millimeters per voxel along x, y, z
    """
    data: np.ndarray
    spacing: Spacing = (1.0, 1.0, 1.0)

    def __post_init__(self):
        data = np.asarray(self.data)
        spacing = _check_geometry(data, self.spacing)
        object.__setattr__(self, "data", _freeze(data.astype(bool)))
        object.__setattr__(self, "spacing", spacing)

    @property
    def dims(self) -> Dims:
        return tuple(int(n) for n in self.data.shape)

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.data))

    def is_empty(self) -> bool:
        return self.count == 0

    def as_label_volume(self, label: int = 4) -> LabelVolume:
        """Re-encode the mask as labels: foreground -> label, background -> 0."""
        data = np.where(self.data, np.uint8(label), np.uint8(0))
        return LabelVolume(data, self.spacing)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryMask):
            return NotImplemented
        return self.spacing == other.spacing and np.array_equal(self.data, other.data)


INTENSITY_DTYPES = (np.dtype(np.float32), np.dtype(np.int16))


@dataclass(frozen=True, eq=False)
class IntensityVolume:
    """
    Single-channel image volume (float32 or int16 intensities).

    Attributes:
        data: Array of shape (nx, ny, nz)
        spacing: Millimeters per voxel along x, y, z
    """
    data: np.ndarray
    spacing: Spacing = (1.0, 1.0, 1.0)

    def __post_init__(self):
        data = np.asarray(self.data)
        spacing = _check_geometry(data, self.spacing)
        if data.dtype not in INTENSITY_DTYPES:
            data = data.astype(np.float32)
        if not np.all(np.isfinite(data)):
            raise ValueError("Intensity volume contains non-finite values")
        object.__setattr__(self, "data", _freeze(data))
        object.__setattr__(self, "spacing", spacing)

    @property
    def dims(self) -> Dims:
        return tuple(int(n) for n in self.data.shape)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntensityVolume):
            return NotImplemented
        return (
            self.spacing == other.spacing
            and self.data.dtype == other.data.dtype
            and np.array_equal(self.data, other.data)
        )


class Region(str, Enum):
    """Evaluated tumor regions."""
    ET = "ET"  # enhancing tumor
    TC = "TC"  # tumor core
    WT = "WT"  # whole tumor


DEFAULT_REGION_LABELS: Dict[Region, FrozenSet[int]] = {
    Region.ET: frozenset({4}),
    Region.TC: frozenset({2, 4}),
    Region.WT: frozenset({1, 2, 4}),
}


class RegionMap:
    """
    Region -> label-set mapping used for scoring.

    The default follows the challenge's evaluation definition (TC = {2, 4});
    any region can be overridden, e.g. TC = {1, 4}.
    """

    def __init__(self, overrides: Optional[Mapping[str, Iterable[int]]] = None):
        """
        Args:
            overrides: Optional region name -> labels replacements
        """
        mapping = dict(DEFAULT_REGION_LABELS)
        for name, labels in (overrides or {}).items():
            region = Region(name)
            label_set = frozenset(int(label) for label in labels)
            if not label_set or not label_set <= TUMOR_LABELS:
                raise ValueError(f"Region {name} labels must be a non-empty subset of {{1,2,4}}, got {sorted(label_set)}")
            mapping[region] = label_set
        self._mapping = mapping

    def labels(self, region: Region) -> FrozenSet[int]:
        return self._mapping[Region(region)]

    def as_dict(self) -> Dict[str, list]:
        return {region.value: sorted(labels) for region, labels in self._mapping.items()}

    def __repr__(self) -> str:
        return f"RegionMap({self.as_dict()})"


DEFAULT_REGION_MAP = RegionMap()


def region_map_from_settings() -> RegionMap:
    """
    Build the region map from FETS_TC_LABELS.

    Returns:
        RegionMap: Default mapping with the configured tumor core labels
    """
    labels = tc_labels()
    if frozenset(labels) != DEFAULT_REGION_LABELS[Region.TC]:
        logger.info(f"Using tumor core labels {sorted(labels)} from environment")
    return RegionMap({"TC": labels})


def region_mask(
    vol: LabelVolume,
    region: Region,
    region_map: RegionMap = DEFAULT_REGION_MAP
) -> BinaryMask:
    """
    Extract a region's foreground mask from a label volume.

    Args:
        vol: Label volume
        region: ET, TC or WT
        region_map: Region label sets (default: ET={4}, TC={2,4}, WT={1,2,4})

    Returns:
        BinaryMask: Voxels whose label belongs to the region's label set
    """
    labels = sorted(region_map.labels(region))
    return BinaryMask(np.isin(vol.data, labels), vol.spacing)
