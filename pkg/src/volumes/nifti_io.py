"""
NIfTI-1 File I/O

Reads and writes the uncompressed single-file NIfTI-1 subset the toolkit uses:
- 348-byte header, magic "n+1", little-endian, vox_offset 352
- 3D data only (dim[0] = 3)
- datatypes uint8 (labels), int16 and float32 (intensities)
- spacing from pixdim[1..3]; no affine beyond the spacing diagonal

nibabel does the encoding; this module pins the subset and validates it.
"""

from pathlib import Path
from typing import Union

import nibabel as nib
import numpy as np
from loguru import logger

from .labels import VALID_LABELS, IntensityVolume, LabelVolume

NIFTI_HEADER_SIZE = 348
NIFTI_VOX_OFFSET = 352
NIFTI_MAGIC = b"n+1"

DATATYPE_UINT8 = 2
DATATYPE_INT16 = 4
DATATYPE_FLOAT32 = 16

SUPPORTED_DATATYPES = {
    DATATYPE_UINT8: np.dtype(np.uint8),
    DATATYPE_INT16: np.dtype(np.int16),
    DATATYPE_FLOAT32: np.dtype(np.float32),
}

Volume = Union[LabelVolume, IntensityVolume]
PathLike = Union[str, Path]


class NiftiFormatError(ValueError):
    """File is not in the supported NIfTI-1 subset."""


class InvalidLabelError(NiftiFormatError):
    """Label file contains values outside {0, 1, 2, 4}."""


def _read_header(path: Path) -> nib.Nifti1Header:
    with open(path, "rb") as fobj:
        raw = fobj.read(NIFTI_HEADER_SIZE)
        if len(raw) < NIFTI_HEADER_SIZE:
            raise NiftiFormatError(f"{path}: truncated header ({len(raw)} bytes)")
        fobj.seek(0)
        try:
            header = nib.Nifti1Header.from_fileobj(fobj, check=False)
        except Exception as e:
            raise NiftiFormatError(f"{path}: unreadable NIfTI header: {e}") from e

    if int(header["sizeof_hdr"]) != NIFTI_HEADER_SIZE:
        raise NiftiFormatError(f"{path}: sizeof_hdr is {int(header['sizeof_hdr'])}, expected 348")
    magic = bytes(header["magic"]).rstrip(b"\x00")
    if magic != NIFTI_MAGIC:
        raise NiftiFormatError(f"{path}: bad magic {magic!r}, expected single-file 'n+1'")
    if int(header["dim"][0]) != 3:
        raise NiftiFormatError(f"{path}: expected 3D volume, dim[0] = {int(header['dim'][0])}")
    datatype = int(header["datatype"])
    if datatype not in SUPPORTED_DATATYPES:
        raise NiftiFormatError(f"{path}: unsupported datatype code {datatype}")
    return header


def read_nifti(path: PathLike, as_labels: bool = True) -> Volume:
    """
    Read a NIfTI-1 file into a label or intensity volume.

    Args:
        path: Path to an uncompressed .nii file
        as_labels: Validate and return a LabelVolume (uint8 only)

    Returns:
        LabelVolume or IntensityVolume with dims/spacing from the header

    Raises:
        NiftiFormatError: Bad magic, unsupported datatype or layout
        InvalidLabelError: Label outside {0, 1, 2, 4} when reading labels
    """
    path = Path(path)
    logger.debug(f"Reading NIfTI: {path}")
    header = _read_header(path)
    datatype = int(header["datatype"])
    spacing = tuple(float(z) for z in header.get_zooms()[:3])

    image = nib.load(str(path))
    data = np.asanyarray(image.dataobj)
    if data.dtype != SUPPORTED_DATATYPES[datatype]:
        data = data.astype(SUPPORTED_DATATYPES[datatype])

    if as_labels:
        if datatype != DATATYPE_UINT8:
            raise NiftiFormatError(f"{path}: label volumes must be uint8, got datatype code {datatype}")
        invalid = set(np.unique(data).tolist()) - VALID_LABELS
        if invalid:
            raise InvalidLabelError(f"{path}: invalid label values {sorted(invalid)}")
        return LabelVolume(data, spacing)
    return IntensityVolume(data, spacing)


def write_nifti(vol: Volume, path: PathLike) -> Path:
    """
    Write a volume as an uncompressed single-file NIfTI-1.

    Args:
        vol: LabelVolume (written as uint8) or IntensityVolume (float32/int16)
        path: Output path; parent directories are created

    Returns:
        Path: The written file
    """
    path = Path(path)
    if path.suffix != ".nii":
        raise NiftiFormatError(f"{path}: only uncompressed .nii output is supported")

    dtype = np.dtype(np.uint8) if isinstance(vol, LabelVolume) else vol.data.dtype
    affine = np.diag([vol.spacing[0], vol.spacing[1], vol.spacing[2], 1.0])

    image = nib.Nifti1Image(np.asarray(vol.data, dtype=dtype), affine)
    header = image.header
    header.set_data_dtype(dtype)
    header.set_zooms(vol.spacing)
    header.set_xyzt_units("mm")
    header["vox_offset"] = NIFTI_VOX_OFFSET

    path.parent.mkdir(parents=True, exist_ok=True)
    nib.save(image, str(path))
    logger.debug(f"Wrote NIfTI: {path} dims={vol.dims} dtype={dtype}")
    return path
