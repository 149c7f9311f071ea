"""
Pytest configuration and fixtures for the FeTS simulator tests
"""

import threading
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import pytest

# Load .env file for test configuration
try:
    from dotenv import load_dotenv
    env_path = Path(__file__).resolve().parent.parent.parent / '.env'
    load_dotenv(env_path)
except ImportError:
    pass

from src.federation import CollaboratorState, FederationConfig, ModelParams
from src.reftrain import CaseDataset, SyntheticInstitution, generate_institution
from src.volumes import LabelVolume


class ToyTrainer:
    """
    Deterministic trainer over plain vectors.

    train_set is a target vector; each epoch moves the parameters a fraction
    `learning_rate` of the way towards it. val_set is either a fixed score or a
    callable scoring the received parameters. Every call is recorded.
    """

    name = "toy"

    def __init__(self, dimension: int = 10):
        self.dimension = dimension
        self.calls: List[tuple] = []
        self._lock = threading.Lock()

    def init_params(self, seed: int) -> ModelParams:
        return ModelParams(np.zeros(self.dimension))

    def train(self, params, train_set, epochs, learning_rate, seed):
        with self._lock:
            self.calls.append(("train", params.values.copy()))
        values = params.values.copy()
        for _ in range(epochs):
            values = values + learning_rate * (np.asarray(train_set, dtype=np.float64) - values)
        return ModelParams(values, params.wire_width)

    def validate(self, params, val_set):
        with self._lock:
            self.calls.append(("validate", params.values.copy()))
        return float(val_set(params)) if callable(val_set) else float(val_set)

    def predict(self, params, image):
        return LabelVolume.zeros(image.dims, image.spacing)


@pytest.fixture
def toy_trainer():
    """Recording vector trainer with P = 10."""
    return ToyTrainer(dimension=10)


def make_federation_config(
    ids: Sequence[str],
    rounds: int = 2,
    seed: Optional[int] = 7,
    availability: Optional[Dict[str, dict]] = None,
    **fields
) -> FederationConfig:
    """FederationConfig for the given collaborator ids."""
    availability = availability or {}
    collaborators = [{"id": cid, "availability": availability.get(cid, {"mode": "always"})} for cid in ids]
    return FederationConfig.model_validate({
        "rounds": rounds,
        "seed": seed,
        "collaborators": collaborators,
        **fields,
    })


def make_toy_collaborators(
    targets: Dict[str, Sequence[float]],
    scores: Optional[Dict[str, object]] = None,
    n_samples: Optional[Dict[str, int]] = None,
    availability: Optional[Dict[str, object]] = None
) -> List[CollaboratorState]:
    """Collaborators for ToyTrainer: target vectors as train sets, scores as val sets."""
    scores = scores or {}
    n_samples = n_samples or {}
    availability = availability or {}
    return [
        CollaboratorState(
            id=cid,
            train_set=np.asarray(target, dtype=np.float64),
            val_set=scores.get(cid, 0.5),
            n_samples=n_samples.get(cid, 1),
            availability=availability.get(cid),
        )
        for cid, target in targets.items()
    ]


@pytest.fixture
def small_institution():
    """Three 12^3 cases with a little noise."""
    return SyntheticInstitution(
        id="inst_a",
        n_cases=3,
        seed=11,
        dims=(12, 12, 12),
        blob_radius_range=(3.0, 4.0),
        intensity_noise_sd=0.05,
    )


@pytest.fixture
def small_cases(small_institution):
    return generate_institution(small_institution)


@pytest.fixture
def small_dataset(small_cases):
    return CaseDataset.from_cases(small_cases)


@pytest.fixture
def rng():
    """Seeded generator for randomized fixtures."""
    return np.random.default_rng(1234)
