"""
Aggregation Module

Pluggable aggregation strategies and round policies:
- combination rules (fedavg, uniform, validation-weighted)
- client selection
- straggler policies and outage models
- strategy registry (select a strategy by name from the federation config)
"""

from .combine import fedavg_combine, uniform_combine, val_weighted_combine, weighted_combine
from .registry import UnknownStrategyError, available_strategies, create_strategy, register_strategy
from .selection import SelectionPolicy, select_clients
from .strategies import (
    AggregationStrategy,
    FedAvgFp16Strategy,
    FedAvgStrategy,
    StrategyParams,
    UniformStrategy,
    ValWeightedStrategy,
)
from .stragglers import (
    OutageModel,
    StragglerOutcome,
    StragglerPolicy,
    apply_straggler_policy,
    create_outage_model,
    deadline_quota,
)

__all__ = [
    'fedavg_combine',
    'uniform_combine',
    'val_weighted_combine',
    'weighted_combine',
    'UnknownStrategyError',
    'available_strategies',
    'create_strategy',
    'register_strategy',
    'SelectionPolicy',
    'select_clients',
    'AggregationStrategy',
    'FedAvgFp16Strategy',
    'FedAvgStrategy',
    'StrategyParams',
    'UniformStrategy',
    'ValWeightedStrategy',
    'OutageModel',
    'StragglerOutcome',
    'StragglerPolicy',
    'apply_straggler_policy',
    'create_outage_model',
    'deadline_quota',
]
