"""
Volumes Module

Label/intensity volume types, region masks per the challenge label semantics
(ET = {4}, TC = {2, 4}, WT = {1, 2, 4} by default) and NIfTI-1 file I/O.
"""

from .labels import (
    BinaryMask,
    DEFAULT_REGION_MAP,
    IntensityVolume,
    LabelVolume,
    Region,
    RegionMap,
    region_map_from_settings,
    region_mask,
)
from .nifti_io import InvalidLabelError, NiftiFormatError, read_nifti, write_nifti

__all__ = [
    'BinaryMask',
    'DEFAULT_REGION_MAP',
    'IntensityVolume',
    'LabelVolume',
    'Region',
    'RegionMap',
    'region_map_from_settings',
    'region_mask',
    'InvalidLabelError',
    'NiftiFormatError',
    'read_nifti',
    'write_nifti',
]
