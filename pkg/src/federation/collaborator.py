"""
Collaborators

A collaborator holds an institution's local data and runs its part of a round:
validate the received consensus model first, then train it locally.
"""

from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Optional, Protocol

from loguru import logger

from ..seeding import derive_seed
from .errors import ContractViolationError
from .params import ModelParams, ModelUpdate

if TYPE_CHECKING:
    from ..reftrain.contract import TrainerContract


class Availability(Protocol):
    def is_available(self, round_index: int) -> bool:
        ...


@dataclass
class CollaboratorState:
    """
    A participating institution.

    Attributes:
        id: Institution identifier, unique within the federation
        train_set: Local training dataset handle
        val_set: Local validation dataset handle
        n_samples: Local training-case count
        availability: Outage model; None means always available
    """
    id: str
    train_set: Any
    val_set: Any
    n_samples: int
    availability: Optional[Availability] = None

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError(f"Collaborator {self.id}: n_samples must be >= 1, got {self.n_samples}")

    def is_available(self, round_index: int) -> bool:
        if self.availability is None:
            return True
        return bool(self.availability.is_available(round_index))


def local_round(
    state: CollaboratorState,
    consensus: ModelParams,
    trainer: "TrainerContract",
    round_index: int,
    epochs: int,
    learning_rate: float,
    seed: int
) -> ModelUpdate:
    """
    Run one collaborator's validate-then-train step.

    The validation score always refers to the consensus model received, never
    to the locally trained one.

    Args:
        state: The collaborator
        consensus: Consensus model sent by the aggregator
        trainer: Trainer implementing the TrainerContract
        round_index: Current round (1-based)
        epochs: Local epochs
        learning_rate: Local learning rate
        seed: Federation seed; the training stream is derived from (seed, round, id)

    Returns:
        ModelUpdate: Trained parameters, validation score and sample count

    Raises:
        ContractViolationError: Trainer returned a wrong dimension or score
    """
    val_score = float(trainer.validate(consensus, state.val_set))
    if not 0.0 <= val_score <= 1.0:
        raise ContractViolationError(f"Collaborator {state.id}: validation score {val_score} outside [0, 1]")

    train_seed = derive_seed(seed, "train", round_index, state.id)
    trained = trainer.train(consensus, state.train_set, epochs, learning_rate, train_seed)
    if trained.dimension != consensus.dimension:
        raise ContractViolationError(
            f"Collaborator {state.id}: trainer returned {trained.dimension} parameters, expected {consensus.dimension}"
        )

    logger.debug(f"Round {round_index}: {state.id} validated {val_score:.4f} and trained {epochs} epoch(s)")
    return ModelUpdate(
        collaborator_id=state.id,
        params=ModelParams(trained.values, consensus.wire_width),
        val_score=val_score,
        n_samples=state.n_samples,
        round_index=round_index,
    )
