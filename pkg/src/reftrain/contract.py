"""
Trainer Contract

The interface the federation loop needs from a segmentation trainer, and a
registry so that federation configs can name their trainer.
"""

from typing import Any, Callable, Dict, List, Mapping, Optional, Protocol, Type, runtime_checkable

from loguru import logger

from ..exceptions import ConfigurationError
from ..federation.params import ModelParams
from ..volumes.labels import IntensityVolume, LabelVolume

_TRAINERS: Dict[str, Type] = {}


@runtime_checkable
class TrainerContract(Protocol):
    """
    Deterministic trainer operations. The parameter dimension never changes.

    - init_params(seed) -> initial model
    - train(params, train_set, epochs, learning_rate, seed) -> trained model
    - validate(params, val_set) -> score in [0, 1]
    - predict(params, image) -> label volume
    """

    name: str

    def init_params(self, seed: int) -> ModelParams:
        ...

    def train(self, params: ModelParams, train_set: Any, epochs: int, learning_rate: float, seed: int) -> ModelParams:
        ...

    def validate(self, params: ModelParams, val_set: Any) -> float:
        ...

    def predict(self, params: ModelParams, image: IntensityVolume) -> LabelVolume:
        ...


class UnknownTrainerError(ConfigurationError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Unknown trainer '{name}'. Registered trainers: {', '.join(available_trainers())}")


def register_trainer(name: str) -> Callable[[Type], Type]:
    """Class decorator registering a trainer under `name`."""
    def decorator(cls: Type) -> Type:
        cls.name = name
        _TRAINERS[name] = cls
        return cls
    return decorator


def available_trainers() -> List[str]:
    return sorted(_TRAINERS)


def create_trainer(name: str, params: Optional[Mapping[str, Any]] = None) -> TrainerContract:
    """
    Instantiate a registered trainer.

    Args:
        name: Registered trainer name ("reference", "quadratic")
        params: Keyword arguments for the trainer's constructor

    Raises:
        UnknownTrainerError: Name not registered
    """
    if name not in _TRAINERS:
        raise UnknownTrainerError(name)
    try:
        trainer = _TRAINERS[name](**dict(params or {}))
    except TypeError as e:
        raise ConfigurationError(f"Invalid parameters for trainer '{name}': {e}") from e
    logger.info(f"Created trainer {name}")
    return trainer
