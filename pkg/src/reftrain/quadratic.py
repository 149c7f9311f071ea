"""
Quadratic Trainer

Least-squares regression of the whole-tumor indicator on the voxel features.
Each epoch is exactly one full-batch gradient step, so a federated round with
one local epoch can be compared against one pooled gradient step.
"""

import numpy as np

from ..federation.params import ModelParams
from ..volumes.labels import IntensityVolume, LabelVolume
from .contract import register_trainer
from .dataset import CaseDataset
from .features import N_FEATURES, voxel_features


@register_trainer("quadratic")
class QuadraticTrainer:
    def __init__(self, threshold: float = 0.5, init_scale: float = 0.01):
        self.threshold = threshold
        self.init_scale = init_scale

    @staticmethod
    def _targets(dataset: CaseDataset) -> np.ndarray:
        return (dataset.targets > 0).astype(np.float64)

    def init_params(self, seed: int) -> ModelParams:
        return ModelParams(np.random.default_rng(seed).normal(0.0, self.init_scale, size=N_FEATURES))

    def gradient(self, weights: np.ndarray, dataset: CaseDataset) -> np.ndarray:
        """Gradient of 0.5 * mean((Xw - t)^2)."""
        residual = dataset.features @ weights - self._targets(dataset)
        return dataset.features.T @ residual / dataset.n_voxels

    def train(self, params: ModelParams, train_set: CaseDataset, epochs: int, learning_rate: float, seed: int) -> ModelParams:
        if train_set.n_voxels == 0:
            raise ValueError("Cannot train on an empty dataset")
        weights = np.array(params.values, dtype=np.float64)
        for _ in range(epochs):
            weights = weights - learning_rate * self.gradient(weights, train_set)
        return params.with_values(weights)

    def validate(self, params: ModelParams, val_set: CaseDataset) -> float:
        """1 / (1 + mean squared error)."""
        residual = val_set.features @ params.values - self._targets(val_set)
        return float(1.0 / (1.0 + np.mean(residual ** 2)))

    def predict(self, params: ModelParams, image: IntensityVolume) -> LabelVolume:
        tumor = (voxel_features(image) @ params.values) > self.threshold
        data = np.where(tumor, 1, 0).astype(np.uint8).reshape(image.dims, order="F")
        return LabelVolume(data, image.spacing)
