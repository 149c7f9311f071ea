"""
Pooled-Data Baseline

Centralised training on the union of all collaborators' training sets, starting
from the same initial model as the federation. Used to compare a federated
consensus against what sharing the data would have achieved.
"""

from typing import TYPE_CHECKING, Dict, Optional, Sequence

from loguru import logger

from ..seeding import derive_seed
from .collaborator import CollaboratorState
from .errors import ContractViolationError
from .params import ModelParams

if TYPE_CHECKING:
    from ..reftrain.contract import TrainerContract


def pool_train_sets(collaborators: Sequence[CollaboratorState]):
    """Merge the collaborators' training sets (their type must provide `concat`)."""
    if not collaborators:
        raise ValueError("Cannot pool an empty collaborator list")
    sets = [c.train_set for c in collaborators]
    concat = getattr(type(sets[0]), "concat", None)
    if concat is None:
        raise TypeError(f"{type(sets[0]).__name__} does not support pooling (no concat)")
    return concat(sets)


def train_pooled(
    trainer: "TrainerContract",
    collaborators: Sequence[CollaboratorState],
    epochs: int,
    learning_rate: float,
    seed: int,
    initial: Optional[ModelParams] = None
) -> ModelParams:
    """
    Train one model on the pooled training data.

    Args:
        trainer: Trainer implementing the TrainerContract
        collaborators: Collaborators whose training sets are merged
        epochs: Training epochs
        learning_rate: Learning rate
        seed: Federation seed; the initial model matches run_federation's
        initial: Explicit starting model (defaults to trainer.init_params)

    Returns:
        ModelParams: Model trained on the pooled data
    """
    pooled = pool_train_sets(collaborators)
    if initial is None:
        initial = trainer.init_params(derive_seed(seed, "init"))
    trained = trainer.train(initial, pooled, epochs, learning_rate, derive_seed(seed, "pooled"))
    if trained.dimension != initial.dimension:
        raise ContractViolationError(
            f"Pooled training returned {trained.dimension} parameters, expected {initial.dimension}"
        )
    logger.info(f"Pooled baseline trained on {len(collaborators)} training sets for {epochs} epoch(s)")
    return ModelParams(trained.values, initial.wire_width)


def weighted_validation(
    trainer: "TrainerContract",
    params: ModelParams,
    collaborators: Sequence[CollaboratorState]
) -> Dict[str, float]:
    """
    Validate a model on every collaborator's validation split.

    Returns:
        Dict[str, float]: Per-collaborator scores plus the sample-weighted "mean"
    """
    scores = {c.id: float(trainer.validate(params, c.val_set)) for c in collaborators}
    total = sum(c.n_samples for c in collaborators)
    scores["mean"] = sum(c.n_samples * scores[c.id] for c in collaborators) / total
    return scores
