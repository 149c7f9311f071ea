"""
Per-Voxel Features

Fixed feature vector per voxel: intensity, 6-neighbor mean intensity,
normalized distance from the volume center, constant bias. Rows follow the
x-fastest voxel order of the volumes.
"""

import numpy as np
from scipy import ndimage

from ..volumes.labels import IntensityVolume

FEATURE_NAMES = ("intensity", "neighbor_mean", "center_distance", "bias")
N_FEATURES = len(FEATURE_NAMES)

_NEIGHBOR_KERNEL = ndimage.generate_binary_structure(3, 1).astype(np.float64)
_NEIGHBOR_KERNEL[1, 1, 1] = 0.0
_NEIGHBOR_KERNEL /= _NEIGHBOR_KERNEL.sum()


def voxel_features(image: IntensityVolume) -> np.ndarray:
    """
    Feature matrix of an image.

    Args:
        image: Single-channel intensity volume

    Returns:
        np.ndarray: float64 array of shape (n_voxels, 4)
    """
    intensity = np.asarray(image.data, dtype=np.float64)
    neighbor_mean = ndimage.convolve(intensity, _NEIGHBOR_KERNEL, mode="nearest")

    dims = np.asarray(intensity.shape, dtype=np.float64)
    center = (dims - 1.0) / 2.0
    grid = np.indices(intensity.shape, dtype=np.float64)
    distance = np.sqrt(np.sum((grid - center.reshape(3, 1, 1, 1)) ** 2, axis=0))
    max_distance = float(np.linalg.norm(center)) or 1.0

    columns = [
        intensity.ravel(order="F"),
        neighbor_mean.ravel(order="F"),
        (distance / max_distance).ravel(order="F"),
        np.ones(intensity.size, dtype=np.float64),
    ]
    return np.stack(columns, axis=1)
