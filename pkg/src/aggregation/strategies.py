"""
Aggregation Strategies

A strategy bundles the hooks the aggregator calls each round:
- select: which collaborators take part
- encode_update: what an upload looks like on the wire (compression)
- apply_stragglers: which updates enter aggregation
- combine: how the effective updates become the next consensus
"""

from typing import Any, List, Mapping, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..federation.params import ModelParams, ModelUpdate
from .combine import fedavg_combine, uniform_combine, val_weighted_combine
from .registry import register_strategy
from .selection import SelectionPolicy, select_clients
from .stragglers import StragglerOutcome, StragglerPolicy, apply_straggler_policy


class StrategyParams(BaseModel):
    """Parameter block shared by the built-in strategies."""
    model_config = ConfigDict(extra="forbid")

    selection_fraction: Optional[float] = Field(default=None, gt=0.0, le=1.0)
    straggler_policy: StragglerPolicy = StragglerPolicy.DROP
    deadline_fraction: float = Field(default=1.0, gt=0.0, le=1.0)


class AggregationStrategy:
    """
    Base strategy: full participation, uploads at the model's wire width,
    configurable straggler policy. Subclasses provide combine().
    """

    name = "base"
    params_model = StrategyParams

    def __init__(self, params: Optional[StrategyParams] = None):
        self.params = params or self.params_model()
        self.selection = SelectionPolicy(self.params.selection_fraction)

    @classmethod
    def from_params(cls, params: Mapping[str, Any]) -> "AggregationStrategy":
        return cls(cls.params_model.model_validate(dict(params)))

    def select(self, round_index: int, collaborators: Sequence[str], seed: int) -> List[str]:
        return select_clients(self.selection, round_index, collaborators, seed)

    def encode_update(self, params: ModelParams) -> ModelParams:
        return params

    def apply_stragglers(
        self,
        selected: Sequence[str],
        responded: Sequence[ModelUpdate],
        stale_cache: Mapping[str, ModelUpdate]
    ) -> StragglerOutcome:
        return apply_straggler_policy(
            self.params.straggler_policy, selected, responded, stale_cache, self.params.deadline_fraction
        )

    def combine(self, updates: Sequence[ModelUpdate], prev: ModelParams) -> ModelParams:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.params.model_dump()})"


@register_strategy("fedavg")
class FedAvgStrategy(AggregationStrategy):
    """Sample-count-weighted averaging (default)."""

    def combine(self, updates, prev):
        return fedavg_combine(updates, prev)


@register_strategy("uniform")
class UniformStrategy(AggregationStrategy):
    def combine(self, updates, prev):
        return uniform_combine(updates, prev)


@register_strategy("val_weighted")
class ValWeightedStrategy(AggregationStrategy):
    """Weights each update by its collaborator's validation score of the received model."""

    def combine(self, updates, prev):
        return val_weighted_combine(updates, prev)


@register_strategy("fedavg_fp16")
class FedAvgFp16Strategy(FedAvgStrategy):
    """FedAvg with uploads quantized to float16 (2 bytes per parameter on the wire)."""

    def encode_update(self, params: ModelParams) -> ModelParams:
        with np.errstate(over="raise"):
            quantized = params.values.astype(np.float16)
        return ModelParams(quantized.astype(np.float64), wire_width=2)
