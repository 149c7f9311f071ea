"""
Aggregator - Round-Synchronous Federation

Each round:
1. the strategy selects collaborators
2. the consensus model is sent to every selected collaborator (bytes_down)
3. available collaborators validate the received model, then train locally
4. updates and validation scores come back (bytes_up)
5. the strategy combines the effective updates into the new consensus

Collaborator steps may run on a thread pool; aggregation is a barrier and all
randomness is derived from (seed, round, collaborator id), so results do not
depend on the number of workers.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Dict, List, NamedTuple, Optional, Sequence

from loguru import logger

from ..seeding import derive_seed, response_order
from .collaborator import CollaboratorState, local_round
from .config import FederationConfig
from .errors import ContractViolationError, RoundFailedError
from .ledger import CommLedger, RoundRecord
from .params import ModelParams, ModelUpdate

if TYPE_CHECKING:
    from ..aggregation.strategies import AggregationStrategy
    from ..reftrain.contract import TrainerContract


@dataclass(frozen=True)
class RoundSnapshot:
    """
    Consensus produced at the end of a round.

    Attributes:
        round_index: Round number
        consensus: New consensus model
        consensus_val_score: Sample-weighted validation score reported this round
        val_scores: Per-collaborator fresh validation scores
    """
    round_index: int
    consensus: ModelParams
    consensus_val_score: Optional[float]
    val_scores: Dict[str, float] = field(default_factory=dict)


@dataclass
class FederationHistory:
    initial: Optional[ModelParams] = None
    snapshots: List[RoundSnapshot] = field(default_factory=list)

    def scores(self) -> List[Optional[float]]:
        return [s.consensus_val_score for s in self.snapshots]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rounds": [
                {
                    "round_index": s.round_index,
                    "consensus_val_score": s.consensus_val_score,
                    "val_scores": dict(sorted(s.val_scores.items())),
                }
                for s in self.snapshots
            ],
        }


class FederationResult(NamedTuple):
    final_model: ModelParams
    ledger: CommLedger
    history: FederationHistory


def best_snapshot(history: FederationHistory) -> RoundSnapshot:
    """
    Snapshot with the highest consensus validation score (earliest on ties).

    Raises:
        ValueError: No round carries a score
    """
    scored = [s for s in history.snapshots if s.consensus_val_score is not None]
    if not scored:
        raise ValueError("Federation history has no scored rounds")
    best = scored[0]
    for snapshot in scored[1:]:
        if snapshot.consensus_val_score > best.consensus_val_score:
            best = snapshot
    return best


def checkpoint_select(history: FederationHistory) -> ModelParams:
    """
    Pick the consensus model of the best-scoring round.

    Args:
        history: Federation history

    Returns:
        ModelParams: Consensus of the round maximizing consensus_val_score;
        ties resolve to the earliest round
    """
    return best_snapshot(history).consensus


def weighted_val_score(updates: Sequence[ModelUpdate]) -> Optional[float]:
    """Sample-count-weighted mean of the updates' validation scores."""
    total = sum(u.n_samples for u in updates)
    if total == 0:
        return None
    return sum(u.n_samples * u.val_score for u in updates) / total


def _collect_updates(
    states: Sequence[CollaboratorState],
    consensus: ModelParams,
    trainer: "TrainerContract",
    config: FederationConfig,
    round_index: int,
    seed: int,
    jobs: int
) -> List[ModelUpdate]:
    args = (consensus, trainer, round_index, config.epochs_per_round, config.learning_rate, seed)
    if jobs <= 1 or len(states) <= 1:
        return [local_round(state, *args) for state in states]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(local_round, state, *args) for state in states]
        return [future.result() for future in futures]


def run_federation(
    config: FederationConfig,
    trainer: "TrainerContract",
    strategy: "AggregationStrategy",
    collaborators: Sequence[CollaboratorState],
    jobs: int = 1
) -> FederationResult:
    """
    Run a complete federation.

    Args:
        config: Federation config (rounds, seed, local training, wire accounting)
        trainer: Trainer implementing the TrainerContract
        strategy: Aggregation strategy (selection, stragglers, combination)
        collaborators: Participating collaborators
        jobs: Worker threads for the collaborator steps of a round

    Returns:
        FederationResult: (best-scoring consensus, ledger, history)

    Raises:
        RoundFailedError: A round had no usable update and on_round_failure is abort
        ContractViolationError: Trainer or strategy broke its contract
    """
    seed = config.require_seed()
    states = {state.id: state for state in collaborators}
    if len(states) != len(collaborators) or not states:
        raise ValueError("Collaborators must be non-empty with unique ids")
    ids = sorted(states)

    initial = trainer.init_params(derive_seed(seed, "init"))
    consensus = ModelParams(initial.values, config.wire_width)
    dimension = consensus.dimension
    ledger = CommLedger()
    history = FederationHistory(initial=consensus)
    stale_cache: Dict[str, ModelUpdate] = {}

    logger.info(
        f"Starting federation: {config.rounds} rounds, {len(ids)} collaborators, "
        f"P={dimension}, strategy={strategy.name}, jobs={jobs}"
    )

    for round_index in range(1, config.rounds + 1):
        selected = list(strategy.select(round_index, ids, seed))
        bytes_down = len(selected) * consensus.nbytes

        available = [states[cid] for cid in selected if states[cid].is_available(round_index)]
        updates = _collect_updates(available, consensus, trainer, config, round_index, seed, jobs)
        updates = [
            ModelUpdate(u.collaborator_id, strategy.encode_update(u.params), u.val_score, u.n_samples, u.round_index)
            for u in updates
        ]
        by_id = {u.collaborator_id: u for u in updates}
        arrivals = [by_id[cid] for cid in response_order(seed, round_index, list(by_id))]

        try:
            outcome = strategy.apply_stragglers(selected, arrivals, stale_cache)
        except RoundFailedError as e:
            ledger.append(RoundRecord(
                round_index=round_index,
                selected=tuple(selected),
                responded=(),
                bytes_down=bytes_down,
                bytes_up=0,
                late=tuple(sorted(by_id)),
                failed=True,
            ))
            if config.on_round_failure == "abort":
                logger.error(f"Round {round_index} failed: {e}")
                raise RoundFailedError(str(e), round_index=round_index, ledger=ledger) from e
            logger.warning(f"Round {round_index} failed, keeping previous consensus: {e}")
            history.snapshots.append(RoundSnapshot(round_index, consensus, None))
            continue

        accepted = [by_id[cid] for cid in outcome.accepted]
        bytes_up = sum(u.params.nbytes + config.metadata_bytes for u in accepted)

        combined = strategy.combine(outcome.effective, consensus)
        if combined.dimension != dimension:
            raise ContractViolationError(
                f"Strategy {strategy.name} produced {combined.dimension} parameters, expected {dimension}"
            )
        consensus = ModelParams(combined.values, config.wire_width)

        score = weighted_val_score(accepted)
        if score is None:
            logger.warning(f"Round {round_index}: no fresh validation scores, consensus left unscored")
        ledger.append(RoundRecord(
            round_index=round_index,
            selected=tuple(selected),
            responded=tuple(sorted(outcome.accepted)),
            bytes_down=bytes_down,
            bytes_up=bytes_up,
            consensus_val_score=score,
            late=tuple(sorted(outcome.late)),
            stale=tuple(sorted(outcome.stale)),
        ))
        history.snapshots.append(RoundSnapshot(
            round_index, consensus, score, {u.collaborator_id: u.val_score for u in accepted}
        ))
        for update in accepted:
            stale_cache[update.collaborator_id] = update

        logger.info(
            f"Round {round_index}/{config.rounds}: {len(accepted)}/{len(selected)} responded, "
            f"stale={len(outcome.stale)}, val={'n/a' if score is None else f'{score:.4f}'}"
        )

    try:
        final = best_snapshot(history)
    except ValueError as e:
        raise RoundFailedError(str(e), ledger=ledger) from e
    logger.info(f"Federation complete: best round {final.round_index} (score {final.consensus_val_score:.4f})")
    return FederationResult(final.consensus, ledger, history)
