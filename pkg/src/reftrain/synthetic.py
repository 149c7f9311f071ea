"""
Synthetic Institutions

Generates small multi-institution tumor datasets. Each case holds one
concentric blob: an enhancing core (label 4) inside an edema shell (label 2)
inside a necrotic rim (label 1) on background (label 0). Institutions differ in
intensity offset, noise level and blob size, which stands in for the
acquisition shift between real sites.
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Literal, Sequence, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..seeding import rng_for
from ..volumes.labels import IntensityVolume, LabelVolume

# Radial thresholds as fractions of the blob radius
ET_FRACTION = 0.3
ED_FRACTION = 0.6

DEFAULT_CLASS_MEANS = {0: 0.0, 1: 1.0, 2: 2.0, 4: 3.0}
MIN_BLOB_RADIUS = 3.0


class SyntheticInstitution(BaseModel):
    """
    Generation parameters of one institution.

    Attributes:
        id: Institution identifier
        n_cases: Number of cases (>= 2 so that a train/val split exists)
        intensity_offset: Added to every voxel's class mean
        intensity_noise_sd: Standard deviation of the Gaussian intensity noise
        blob_radius_range: (min, max) blob radius in voxels
        seed: Seed that fully determines the cases
        dims: Volume dimensions
        spacing: Voxel spacing in mm
        class_means: Mean intensity per label
        role: federation (train/val split) or test (held out entirely)
    """
    model_config = ConfigDict(frozen=True)

    id: str = Field(min_length=1)
    n_cases: int = Field(ge=2)
    intensity_offset: float = 0.0
    intensity_noise_sd: float = Field(default=0.1, ge=0.0)
    blob_radius_range: Tuple[float, float] = (4.0, 8.0)
    seed: int = Field(ge=0)
    dims: Tuple[int, int, int] = (24, 24, 24)
    spacing: Tuple[float, float, float] = (1.0, 1.0, 1.0)
    class_means: Dict[int, float] = Field(default_factory=lambda: dict(DEFAULT_CLASS_MEANS))
    role: Literal["federation", "test"] = "federation"

    @field_validator("class_means")
    @classmethod
    def _all_labels(cls, means: Dict[int, float]) -> Dict[int, float]:
        if set(means) != set(DEFAULT_CLASS_MEANS):
            raise ValueError(f"class_means must cover labels 0, 1, 2, 4, got {sorted(means)}")
        return means

    @field_validator("spacing")
    @classmethod
    def _positive_spacing(cls, spacing: Tuple[float, float, float]) -> Tuple[float, float, float]:
        if any(s <= 0 for s in spacing):
            raise ValueError(f"spacing must be positive, got {spacing}")
        return spacing

    @model_validator(mode="after")
    def _radius_feasible(self):
        rmin, rmax = self.blob_radius_range
        if rmin < MIN_BLOB_RADIUS or rmax < rmin:
            raise ValueError(f"blob_radius_range must satisfy {MIN_BLOB_RADIUS} <= min <= max, got {self.blob_radius_range}")
        if 2 * math.ceil(rmax) + 1 > min(self.dims):
            raise ValueError(f"blob radius {rmax} does not fit in volume dims {self.dims}")
        return self


@dataclass(frozen=True)
class SyntheticCase:
    case_id: str
    institution_id: str
    image: IntensityVolume
    labels: LabelVolume


def blob_labels(dims: Sequence[int], center: Sequence[int], radius: float) -> np.ndarray:
    """Nested label blob: 4 within 0.3R, 2 within 0.6R, 1 within R, else 0."""
    grid = np.indices(dims, dtype=np.float64)
    offsets = grid - np.asarray(center, dtype=np.float64).reshape(3, 1, 1, 1)
    distance = np.sqrt(np.sum(offsets ** 2, axis=0))

    labels = np.zeros(dims, dtype=np.uint8)
    labels[distance <= radius] = 1
    labels[distance <= ED_FRACTION * radius] = 2
    labels[distance <= ET_FRACTION * radius] = 4
    return labels


def case_id_for(institution_id: str, index: int) -> str:
    return f"{institution_id}_{index:03d}"


def generate_institution(spec: SyntheticInstitution) -> List[SyntheticCase]:
    """
    Generate all cases of an institution.

    Geometry and noise streams are keyed by (seed, case index) only, so two
    institutions sharing a seed and blob settings get identical label volumes.

    Args:
        spec: Institution parameters

    Returns:
        List[SyntheticCase]: spec.n_cases cases
    """
    rmin, rmax = spec.blob_radius_range
    cases = []
    for index in range(spec.n_cases):
        geometry = rng_for(spec.seed, "geometry", index)
        radius = float(geometry.uniform(rmin, rmax)) if rmax > rmin else float(rmin)
        margin = math.ceil(radius)
        center = [int(geometry.integers(margin, n - margin)) for n in spec.dims]
        labels = blob_labels(spec.dims, center, radius)

        means = np.zeros(5, dtype=np.float64)
        for label, mean in spec.class_means.items():
            means[label] = mean
        noise = rng_for(spec.seed, "noise", index).standard_normal(spec.dims)
        image = means[labels] + spec.intensity_offset + spec.intensity_noise_sd * noise

        cases.append(SyntheticCase(
            case_id=case_id_for(spec.id, index),
            institution_id=spec.id,
            image=IntensityVolume(image.astype(np.float32), spec.spacing),
            labels=LabelVolume(labels, spec.spacing),
        ))

    logger.info(f"Generated {len(cases)} cases for institution {spec.id} (role={spec.role})")
    return cases


def split_cases(cases: Sequence[SyntheticCase]) -> Tuple[List[SyntheticCase], List[SyntheticCase]]:
    """
    Split an institution's cases: the last max(1, n // 5) cases validate.

    Returns:
        Tuple: (train cases, validation cases)
    """
    if len(cases) < 2:
        raise ValueError(f"Need at least 2 cases to split, got {len(cases)}")
    n_val = max(1, len(cases) // 5)
    return list(cases[:-n_val]), list(cases[-n_val:])


def case_splits(spec: SyntheticInstitution) -> List[str]:
    """Split name of each case index: train/val for federation institutions, test otherwise."""
    if spec.role == "test":
        return ["test"] * spec.n_cases
    n_val = max(1, spec.n_cases // 5)
    return ["train"] * (spec.n_cases - n_val) + ["val"] * n_val
