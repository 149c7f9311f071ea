"""
Federation Module

Round-synchronous federation simulator:
- ModelParams / ModelUpdate exchanged between aggregator and collaborators
- collaborator validate-then-train step
- aggregator loop with consensus checkpointing
- communication ledger and cost report
- pooled-data baseline
"""

from .aggregator import (
    FederationHistory,
    FederationResult,
    RoundSnapshot,
    best_snapshot,
    checkpoint_select,
    run_federation,
    weighted_val_score,
)
from .baseline import pool_train_sets, train_pooled, weighted_validation
from .collaborator import CollaboratorState, local_round
from .config import (
    AvailabilityConfig,
    CollaboratorConfig,
    FederationConfig,
    StrategyConfig,
    TrainerConfig,
    load_federation_config,
)
from .errors import ContractViolationError, RoundFailedError
from .ledger import CommLedger, CostReport, RoundRecord, communication_cost
from .params import ModelParams, ModelUpdate

__all__ = [
    'FederationHistory',
    'FederationResult',
    'RoundSnapshot',
    'best_snapshot',
    'checkpoint_select',
    'run_federation',
    'weighted_val_score',
    'pool_train_sets',
    'train_pooled',
    'weighted_validation',
    'CollaboratorState',
    'local_round',
    'AvailabilityConfig',
    'CollaboratorConfig',
    'FederationConfig',
    'StrategyConfig',
    'TrainerConfig',
    'load_federation_config',
    'ContractViolationError',
    'RoundFailedError',
    'CommLedger',
    'CostReport',
    'RoundRecord',
    'communication_cost',
    'ModelParams',
    'ModelUpdate',
]
