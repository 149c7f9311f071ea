"""
Reference Trainer

Per-voxel multinomial linear classifier over the fixed voxel features, with
four output classes (labels 0, 1, 2, 4), trained by mini-batch gradient
descent on the mean cross-entropy. Small enough (16 parameters) that a full
federation runs in seconds and byte ledgers stay readable.
"""

from typing import Optional, Tuple

import numpy as np
from loguru import logger
from scipy.special import log_softmax

from ..federation.params import ModelParams
from ..metrics.overlap import dice
from ..volumes.labels import (
    DEFAULT_REGION_MAP,
    IntensityVolume,
    LabelVolume,
    Region,
    RegionMap,
    region_map_from_settings,
    region_mask,
)
from .contract import register_trainer
from .dataset import CLASS_LABELS, CaseDataset, classes_to_labels
from .features import N_FEATURES, voxel_features

N_CLASSES = len(CLASS_LABELS)
N_PARAMS = N_FEATURES * N_CLASSES


def loss_and_gradient(weights: np.ndarray, features: np.ndarray, targets: np.ndarray) -> Tuple[float, np.ndarray]:
    """
    Mean cross-entropy of a softmax classifier and its gradient.

    Args:
        weights: (n_features, n_classes) weight matrix
        features: (n, n_features) feature rows
        targets: (n,) class indices

    Returns:
        Tuple: (loss, gradient of shape (n_features, n_classes))
    """
    n = len(targets)
    rows = np.arange(n)
    log_probs = log_softmax(features @ weights, axis=1)
    loss = -float(np.mean(log_probs[rows, targets]))

    residual = np.exp(log_probs)
    residual[rows, targets] -= 1.0
    gradient = features.T @ residual / n
    return loss, gradient


def segment_dice(
    prediction: LabelVolume,
    ground_truth: LabelVolume,
    region_map: RegionMap = DEFAULT_REGION_MAP
) -> float:
    """Mean DSC over ET, TC and WT."""
    scores = [
        dice(region_mask(prediction, r, region_map), region_mask(ground_truth, r, region_map)).value
        for r in Region
    ]
    return float(np.mean(scores))


@register_trainer("reference")
class ReferenceTrainer:
    """
    Softmax-regression voxel classifier.

    Args:
        batch_size: Mini-batch size; None uses the full batch
        init_scale: Standard deviation of the initial weights
        region_map: Regions scored by validate (default: FETS_TC_LABELS settings)
    """

    def __init__(
        self,
        batch_size: Optional[int] = 1024,
        init_scale: float = 0.01,
        region_map: Optional[RegionMap] = None
    ):
        if batch_size is not None and batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {batch_size}")
        self.batch_size = batch_size
        self.init_scale = init_scale
        self.region_map = region_map if region_map is not None else region_map_from_settings()

    @staticmethod
    def weights(params: ModelParams) -> np.ndarray:
        if params.dimension != N_PARAMS:
            raise ValueError(f"Expected {N_PARAMS} parameters, got {params.dimension}")
        return params.values.reshape(N_FEATURES, N_CLASSES)

    def init_params(self, seed: int) -> ModelParams:
        rng = np.random.default_rng(seed)
        return ModelParams(rng.normal(0.0, self.init_scale, size=N_PARAMS))

    def train(
        self,
        params: ModelParams,
        train_set: CaseDataset,
        epochs: int,
        learning_rate: float,
        seed: int
    ) -> ModelParams:
        """
        Mini-batch gradient descent.

        Args:
            params: Starting model
            train_set: Training cases
            epochs: Passes over the data
            learning_rate: Step size
            seed: Seed of the batch shuffling stream

        Returns:
            ModelParams: Trained model (same wire width as params)
        """
        weights = self.weights(params).copy()
        if epochs == 0 or learning_rate == 0:
            return params.with_values(weights.ravel())
        if train_set.n_voxels == 0:
            raise ValueError("Cannot train on an empty dataset")

        rng = np.random.default_rng(seed)
        features, targets = train_set.features, train_set.targets
        n = len(targets)
        batch = n if self.batch_size is None else min(self.batch_size, n)

        loss = float("nan")
        for _ in range(epochs):
            order = rng.permutation(n) if batch < n else np.arange(n)
            for start in range(0, n, batch):
                idx = order[start:start + batch]
                loss, gradient = loss_and_gradient(weights, features[idx], targets[idx])
                weights -= learning_rate * gradient

        logger.debug(f"Trained {epochs} epoch(s) on {n} voxels, last batch loss {loss:.4f}")
        return params.with_values(weights.ravel())

    def loss(self, params: ModelParams, dataset: CaseDataset) -> float:
        return loss_and_gradient(self.weights(params), dataset.features, dataset.targets)[0]

    def _classes(self, params: ModelParams, features: np.ndarray) -> np.ndarray:
        return np.argmax(features @ self.weights(params), axis=1)

    def predict(self, params: ModelParams, image: IntensityVolume) -> LabelVolume:
        return classes_to_labels(self._classes(params, voxel_features(image)), image)

    def validate(self, params: ModelParams, val_set: CaseDataset) -> float:
        """Mean over cases of the mean DSC over ET/TC/WT."""
        if len(val_set) == 0:
            raise ValueError("Cannot validate on an empty dataset")
        scores = []
        for case, rows in zip(val_set.cases, val_set.case_slices()):
            prediction = classes_to_labels(self._classes(params, val_set.features[rows]), case.image)
            scores.append(segment_dice(prediction, case.labels, self.region_map))
        return float(np.clip(np.mean(scores), 0.0, 1.0))


def reference_trainer(batch_size: Optional[int] = 1024, init_scale: float = 0.01) -> ReferenceTrainer:
    """
    Create the reference trainer.

    Args:
        batch_size: Mini-batch size (None for full-batch steps)
        init_scale: Standard deviation of the initial weights

    Returns:
        ReferenceTrainer: Trainer satisfying the TrainerContract
    """
    return ReferenceTrainer(batch_size=batch_size, init_scale=init_scale)
