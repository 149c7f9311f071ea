"""
Model Parameters and Updates

ModelParams is the unit of federation exchange: a flat real vector with a
declared wire width (bytes per parameter). ModelUpdate is what a collaborator
returns at the end of its local round.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..settings import DEFAULT_WIRE_WIDTH


@dataclass(frozen=True, eq=False)
class ModelParams:
    """
    Flat parameter vector.

    Attributes:
        values: float64 vector of P parameters (read-only copy)
        wire_width: Bytes per parameter on the wire
    """
    values: np.ndarray
    wire_width: int = DEFAULT_WIRE_WIDTH

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True).reshape(-1)
        if values.size == 0:
            raise ValueError("ModelParams must hold at least one parameter")
        if not np.all(np.isfinite(values)):
            raise ValueError("ModelParams values must be finite")
        if self.wire_width <= 0:
            raise ValueError(f"wire_width must be positive, got {self.wire_width}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def dimension(self) -> int:
        return int(self.values.size)

    @property
    def nbytes(self) -> int:
        """Serialized size: P * wire_width."""
        return self.dimension * self.wire_width

    def with_values(self, values: np.ndarray) -> "ModelParams":
        return ModelParams(values, self.wire_width)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModelParams):
            return NotImplemented
        return self.wire_width == other.wire_width and np.array_equal(self.values, other.values)


@dataclass(frozen=True)
class ModelUpdate:
    """
    A collaborator's contribution to one round.

    Attributes:
        collaborator_id: Sender
        params: Locally trained parameters
        val_score: Validation score of the consensus model received this round
        n_samples: Local training-case count (aggregation weight)
        round_index: Round in which the update was produced
    """
    collaborator_id: str
    params: ModelParams
    val_score: float
    n_samples: int
    round_index: Optional[int] = None

    def __post_init__(self):
        if not 0.0 <= self.val_score <= 1.0:
            raise ValueError(f"val_score must be in [0, 1], got {self.val_score}")
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be >= 1, got {self.n_samples}")
