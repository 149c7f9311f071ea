"""
Federation Configuration

Pydantic models for the federation JSON config:

    {
      "rounds": 20, "seed": 7, "epochs_per_round": 1, "learning_rate": 0.5,
      "collaborators": [{"id": "inst_a", "availability": {"mode": "always"}}],
      "strategy": {"name": "fedavg", "params": {"straggler_policy": "drop"}},
      "trainer": {"name": "reference", "params": {"batch_size": 1024}}
    }
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

from loguru import logger
from pydantic import BaseModel, Field, field_validator, model_validator

from ..settings import DEFAULT_METADATA_BYTES, DEFAULT_WIRE_WIDTH


class AvailabilityConfig(BaseModel):
    """Outage model of one collaborator."""
    mode: Literal["always", "schedule", "bernoulli"] = "always"
    schedule: Optional[List[bool]] = None  # one flag per round
    p_avail: float = Field(default=1.0, gt=0.0, le=1.0)

    @model_validator(mode="after")
    def _schedule_present(self):
        if self.mode == "schedule" and not self.schedule:
            raise ValueError("availability mode 'schedule' needs a non-empty schedule")
        return self


class CollaboratorConfig(BaseModel):
    """A federation participant; `institution` defaults to the id."""
    id: str = Field(min_length=1)
    institution: Optional[str] = None
    availability: AvailabilityConfig = Field(default_factory=AvailabilityConfig)

    @property
    def institution_id(self) -> str:
        return self.institution or self.id


class StrategyConfig(BaseModel):
    name: str = "fedavg"
    params: Dict[str, Any] = Field(default_factory=dict)


class TrainerConfig(BaseModel):
    name: str = "reference"
    params: Dict[str, Any] = Field(default_factory=dict)


class FederationConfig(BaseModel):
    """
    Complete federation setup.

    Attributes:
        rounds: Number of federated rounds R
        seed: Root seed for every random stream
        epochs_per_round: Local epochs per round
        learning_rate: Local learning rate
        wire_width: Bytes per parameter on the wire
        metadata_bytes: Envelope bytes per update (score, sample count, id)
        collaborators: Participants (K >= 1)
        strategy: Aggregation strategy name + params
        trainer: Trainer name + params
        on_round_failure: abort (raise) or skip (keep the consensus, continue)
        compare_pooled: Also train a pooled-data baseline for comparison
    """
    rounds: int = Field(ge=1)
    seed: Optional[int] = Field(default=None, ge=0)
    epochs_per_round: int = Field(default=1, ge=0)
    learning_rate: float = Field(default=0.5, ge=0.0)
    wire_width: int = Field(default=DEFAULT_WIRE_WIDTH, ge=1)
    metadata_bytes: int = Field(default=DEFAULT_METADATA_BYTES, ge=0)
    collaborators: List[CollaboratorConfig] = Field(min_length=1)
    strategy: StrategyConfig = Field(default_factory=StrategyConfig)
    trainer: TrainerConfig = Field(default_factory=TrainerConfig)
    on_round_failure: Literal["abort", "skip"] = "abort"
    compare_pooled: bool = False

    @field_validator("collaborators")
    @classmethod
    def _unique_ids(cls, collaborators: List[CollaboratorConfig]) -> List[CollaboratorConfig]:
        ids = [c.id for c in collaborators]
        if len(ids) != len(set(ids)):
            raise ValueError(f"Collaborator ids must be unique, got {ids}")
        return collaborators

    @model_validator(mode="after")
    def _schedules_cover_rounds(self):
        for collaborator in self.collaborators:
            schedule = collaborator.availability.schedule
            if collaborator.availability.mode == "schedule" and len(schedule) < self.rounds:
                raise ValueError(
                    f"Collaborator {collaborator.id}: schedule has {len(schedule)} entries for {self.rounds} rounds"
                )
        return self

    def require_seed(self) -> int:
        if self.seed is None:
            raise ValueError("A seed is required (config 'seed' or --seed)")
        return self.seed


def load_federation_config(path: Union[str, Path], **overrides: Any) -> FederationConfig:
    """
    Load and validate a federation config file.

    Args:
        path: JSON config path
        **overrides: Field values replacing the file's (None values are ignored)

    Returns:
        FederationConfig: Validated config
    """
    data = json.loads(Path(path).read_text())
    data.update({key: value for key, value in overrides.items() if value is not None})
    config = FederationConfig.model_validate(data)
    logger.info(
        f"Loaded federation config: rounds={config.rounds}, collaborators={len(config.collaborators)}, "
        f"strategy={config.strategy.name}, trainer={config.trainer.name}"
    )
    return config
