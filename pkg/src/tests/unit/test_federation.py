"""
Unit Tests for the Federation Simulator

Runs small federations with the recording ToyTrainer and checks byte
accounting, straggler handling, outages, checkpointing, call order and
determinism.
"""

import numpy as np
import pytest

from src.aggregation import create_outage_model, create_strategy
from src.federation import (
    CollaboratorState,
    ContractViolationError,
    FederationHistory,
    ModelParams,
    ModelUpdate,
    RoundFailedError,
    RoundSnapshot,
    best_snapshot,
    checkpoint_select,
    communication_cost,
    local_round,
    pool_train_sets,
    run_federation,
    weighted_val_score,
    weighted_validation,
)
from src.tests.conftest import ToyTrainer, make_federation_config, make_toy_collaborators

P = 10


def _targets(**values):
    return {cid: np.full(P, float(v)) for cid, v in values.items()}


def _with_outages(collaborators, config):
    """Attach outage models built from the config's availability blocks."""
    blocks = {c.id: c.availability for c in config.collaborators}
    for state in collaborators:
        state.availability = create_outage_model(blocks[state.id], config.seed, state.id)
    return collaborators


def _run(config, collaborators, strategy="fedavg", params=None, trainer=None, jobs=1):
    return run_federation(
        config, trainer or ToyTrainer(P), create_strategy(strategy, params or {}), collaborators, jobs=jobs
    )


def _config(ids, **fields):
    fields.setdefault("wire_width", 4)
    fields.setdefault("metadata_bytes", 16)
    fields.setdefault("learning_rate", 0.5)
    return make_federation_config(ids, **fields)


class TestLedgerAccounting:
    """Tests for bytes recorded by a federation run."""

    def test_full_participation_bytes(self):
        """Test K=3, R=2, P=10, width 4, metadata 16 -> 576 bytes."""
        config = _config(["a", "b", "c"], rounds=2)
        result = _run(config, make_toy_collaborators(_targets(a=1, b=2, c=3)))
        cost = communication_cost(result.ledger)
        assert cost.bytes_down == 240
        assert cost.bytes_up == 336
        assert cost.cumulative_bytes == 576
        assert cost.product_metric == 576

    def test_outage_still_costs_downlink(self):
        """Test that an unavailable collaborator counts for bytes_down only."""
        availability = {"c": {"mode": "schedule", "schedule": [True, False]}}
        config = _config(["a", "b", "c"], rounds=2, availability=availability)
        collaborators = _with_outages(make_toy_collaborators(_targets(a=1, b=2, c=3)), config)
        result = _run(config, collaborators)
        second = result.ledger.records[1]
        assert second.responded == ("a", "b")
        assert second.bytes_down == 120
        assert second.bytes_up == 112
        assert communication_cost(result.ledger).cumulative_bytes == 520

    def test_certain_availability_matches_across_policies(self):
        """Test that p_avail = 1 gives identical ledgers under every straggler policy."""
        availability = {cid: {"mode": "bernoulli", "p_avail": 1.0} for cid in "abc"}
        config = _config(["a", "b", "c"], rounds=3, availability=availability)
        ledgers = []
        for policy in ("drop", "reuse_stale", "deadline"):
            collaborators = _with_outages(make_toy_collaborators(_targets(a=1, b=2, c=3)), config)
            result = _run(config, collaborators, params={"straggler_policy": policy, "deadline_fraction": 0.5})
            ledgers.append(result.ledger.to_dict())
        assert ledgers[0] == ledgers[1] == ledgers[2]

    def test_fp16_uploads_are_half_size(self):
        """Test that fp16 uploads use 2 bytes per parameter while the downlink keeps its width."""
        config = _config(["a", "b", "c"], rounds=1)
        result = _run(config, make_toy_collaborators(_targets(a=1, b=2, c=3)), strategy="fedavg_fp16")
        record = result.ledger.records[0]
        assert record.bytes_down == 3 * P * 4
        assert record.bytes_up == 3 * (P * 2 + 16)
        assert result.final_model.wire_width == 4

    def test_partial_selection(self):
        """Test that a selection fraction bounds the selected set."""
        ids = [f"c{i}" for i in range(5)]
        config = _config(ids, rounds=4)
        result = _run(
            config, make_toy_collaborators(_targets(**{cid: i for i, cid in enumerate(ids)})),
            params={"selection_fraction": 0.4},
        )
        for record in result.ledger.records:
            assert len(record.selected) == 2
            assert record.bytes_down == 2 * P * 4


class TestRoundSemantics:
    """Tests for what happens inside a round."""

    def test_single_collaborator_single_round(self):
        """Test K=1, R=1: the final model is the locally trained one."""
        config = _config(["a"], rounds=1)
        result = _run(config, make_toy_collaborators(_targets(a=2)))
        assert np.allclose(result.final_model.values, 1.0)

    def test_validate_before_train(self):
        """Test that each collaborator validates the received model, then trains it."""
        trainer = ToyTrainer(P)
        config = _config(["a", "b"], rounds=3)
        _run(config, make_toy_collaborators(_targets(a=1, b=2)), trainer=trainer)
        assert [kind for kind, _ in trainer.calls] == ["validate", "train"] * 6
        for (_, validated), (_, trained) in zip(trainer.calls[0::2], trainer.calls[1::2]):
            assert np.array_equal(validated, trained)

    def test_score_refers_to_received_model(self):
        """Test that round r's score validates the consensus received in round r."""
        scorer = lambda params: float(params.values[0])  # noqa: E731
        config = _config(["a", "b"], rounds=2)
        collaborators = make_toy_collaborators(_targets(a=1, b=1), scores={"a": scorer, "b": scorer})
        result = _run(config, collaborators)
        assert result.history.scores() == [0.0, pytest.approx(0.5)]
        assert np.allclose(result.final_model.values, 0.75)

    def test_sample_weighted_score(self):
        """Test the consensus score weighting by sample counts."""
        config = _config(["a", "b"], rounds=1)
        collaborators = make_toy_collaborators(
            _targets(a=1, b=1), scores={"a": 0.2, "b": 0.6}, n_samples={"a": 3, "b": 1}
        )
        result = _run(config, collaborators)
        assert result.ledger.records[0].consensus_val_score == pytest.approx(0.3)

    def test_reuse_stale_update(self):
        """Test that a missing collaborator's previous update is reused."""
        availability = {"b": {"mode": "schedule", "schedule": [True, False]}}
        config = _config(["a", "b"], rounds=2, availability=availability)
        collaborators = _with_outages(make_toy_collaborators(_targets(a=1, b=3)), config)
        result = _run(config, collaborators, strategy="uniform", params={"straggler_policy": "reuse_stale"})
        record = result.ledger.records[1]
        assert record.stale == ("b",)
        assert record.responded == ("a",)
        assert record.bytes_up == P * 4 + 16
        assert np.allclose(result.history.snapshots[1].consensus.values, 1.25)

    def test_drop_straggler(self):
        """Test that drop aggregates only the fresh updates."""
        availability = {"b": {"mode": "schedule", "schedule": [True, False]}}
        config = _config(["a", "b"], rounds=2, availability=availability)
        collaborators = _with_outages(make_toy_collaborators(_targets(a=1, b=3)), config)
        result = _run(config, collaborators, strategy="uniform")
        assert np.allclose(result.history.snapshots[1].consensus.values, 1.0)

    def test_deadline_marks_late_responders(self):
        """Test that responders after the deadline quota are late and not counted."""
        availability = {"d": {"mode": "schedule", "schedule": [False]}}
        config = _config(["a", "b", "c", "d"], rounds=1, availability=availability)
        collaborators = _with_outages(make_toy_collaborators(_targets(a=1, b=2, c=3, d=4)), config)
        result = _run(config, collaborators, params={"straggler_policy": "deadline", "deadline_fraction": 0.5})
        record = result.ledger.records[0]
        assert len(record.responded) == 2
        assert len(record.late) == 1
        assert record.bytes_up == 2 * (P * 4 + 16)
        assert set(record.responded) | set(record.late) == {"a", "b", "c"}


class TestCheckpoint:
    """Tests for choosing the final model."""

    @staticmethod
    def _history(scores):
        return FederationHistory(snapshots=[
            RoundSnapshot(r, ModelParams(np.full(2, float(r))), s) for r, s in enumerate(scores, start=1)
        ])

    def test_best_round(self):
        """Test scores [0.2, 0.9, 0.5] -> round 2."""
        assert checkpoint_select(self._history([0.2, 0.9, 0.5])).values.tolist() == [2.0, 2.0]

    def test_ties_pick_earliest(self):
        """Test that equal scores pick round 1."""
        assert best_snapshot(self._history([0.4, 0.4, 0.4])).round_index == 1

    def test_unscored_rounds_are_skipped(self):
        """Test that rounds without a score are ignored."""
        assert best_snapshot(self._history([None, 0.1, None])).round_index == 2

    def test_nothing_scored(self):
        """Test that a history without scores has no checkpoint."""
        with pytest.raises(ValueError):
            checkpoint_select(self._history([None, None]))

    def test_run_returns_earliest_best(self):
        """Test that a run with constant scores returns round 1's consensus."""
        config = _config(["a", "b"], rounds=3)
        result = _run(config, make_toy_collaborators(_targets(a=1, b=2)))
        assert result.final_model == result.history.snapshots[0].consensus
        assert result.final_model != result.history.snapshots[-1].consensus

    def test_weighted_val_score(self):
        """Test the sample-weighted mean of update scores."""
        updates = [
            ModelUpdate("a", ModelParams(np.zeros(1)), 0.2, 3),
            ModelUpdate("b", ModelParams(np.zeros(1)), 0.6, 1),
        ]
        assert weighted_val_score(updates) == pytest.approx(0.3)
        assert weighted_val_score([]) is None


class TestDeterminism:
    """Tests for reproducibility."""

    @staticmethod
    def _scenario(jobs):
        ids = [f"c{i}" for i in range(6)]
        availability = {cid: {"mode": "bernoulli", "p_avail": 0.7} for cid in ids}
        config = _config(ids, rounds=5, availability=availability, on_round_failure="skip")
        collaborators = _with_outages(
            make_toy_collaborators(
                _targets(**{cid: i for i, cid in enumerate(ids)}),
                scores={cid: (lambda p: float(np.clip(p.values.mean() / 10, 0, 1))) for cid in ids},
                n_samples={cid: i + 1 for i, cid in enumerate(ids)},
            ),
            config,
        )
        return _run(
            config, collaborators, params={"selection_fraction": 0.5, "straggler_policy": "reuse_stale"}, jobs=jobs
        )

    def test_repeatable(self):
        """Test that the same seed reproduces model, ledger and history."""
        first, second = self._scenario(1), self._scenario(1)
        assert first.final_model == second.final_model
        assert first.ledger.to_dict() == second.ledger.to_dict()
        assert first.history.to_dict() == second.history.to_dict()

    def test_independent_of_workers(self):
        """Test that jobs=1 and jobs=4 give identical results."""
        serial, parallel = self._scenario(1), self._scenario(4)
        assert serial.final_model == parallel.final_model
        assert serial.ledger.to_dict() == parallel.ledger.to_dict()
        assert serial.history.to_dict() == parallel.history.to_dict()

    def test_seed_required(self):
        """Test that a run without a seed is refused."""
        config = _config(["a"], rounds=1, seed=None)
        with pytest.raises(ValueError):
            _run(config, make_toy_collaborators(_targets(a=1)))


class TestRoundFailures:
    """Tests for rounds without any usable update."""

    @staticmethod
    def _outage_round_two(on_failure, rounds=3, schedule=(True, False, True)):
        availability = {cid: {"mode": "schedule", "schedule": list(schedule)} for cid in "ab"}
        config = _config(["a", "b"], rounds=rounds, availability=availability, on_round_failure=on_failure)
        collaborators = _with_outages(make_toy_collaborators(_targets(a=1, b=2)), config)
        return config, collaborators

    def test_abort(self):
        """Test that abort raises with the ledger up to the failed round."""
        config, collaborators = self._outage_round_two("abort")
        with pytest.raises(RoundFailedError) as info:
            _run(config, collaborators)
        assert info.value.round_index == 2
        assert len(info.value.ledger.records) == 2
        assert info.value.ledger.records[-1].failed

    def test_skip_keeps_consensus(self):
        """Test that skip records the failure and carries the consensus forward."""
        config, collaborators = self._outage_round_two("skip")
        result = _run(config, collaborators)
        assert [r.failed for r in result.ledger.records] == [False, True, False]
        assert result.ledger.records[1].bytes_up == 0
        assert result.history.snapshots[1].consensus_val_score is None
        assert result.history.snapshots[1].consensus == result.history.snapshots[0].consensus

    def test_every_round_failed(self):
        """Test that a run with no scored round fails even under skip."""
        config, collaborators = self._outage_round_two("skip", rounds=2, schedule=(False, False))
        with pytest.raises(RoundFailedError):
            _run(config, collaborators)


class TestContracts:
    """Tests for trainer contract checks."""

    def test_wrong_dimension(self):
        """Test that a trainer returning the wrong dimension is rejected."""

        class Shrinking(ToyTrainer):
            def train(self, params, train_set, epochs, learning_rate, seed):
                return ModelParams(params.values[:-1])

        with pytest.raises(ContractViolationError):
            _run(_config(["a"], rounds=1), make_toy_collaborators(_targets(a=1)), trainer=Shrinking(P))

    def test_score_out_of_range(self):
        """Test that validation scores outside [0, 1] are rejected."""
        collaborators = make_toy_collaborators(_targets(a=1), scores={"a": 1.5})
        with pytest.raises(ContractViolationError):
            _run(_config(["a"], rounds=1), collaborators)

    def test_local_round_update(self):
        """Test the update returned by one collaborator step."""
        state = CollaboratorState("a", np.full(P, 2.0), 0.25, n_samples=4)
        update = local_round(state, ModelParams(np.zeros(P)), ToyTrainer(P), 1, 2, 0.5, seed=1)
        assert update.val_score == 0.25
        assert update.n_samples == 4
        assert np.allclose(update.params.values, 1.5)

    def test_collaborator_needs_samples(self):
        """Test that collaborators must hold at least one training case."""
        with pytest.raises(ValueError):
            CollaboratorState("a", None, None, n_samples=0)


class TestBaseline:
    """Tests for the pooled baseline helpers."""

    def test_weighted_validation(self):
        """Test per-collaborator and sample-weighted validation scores."""
        collaborators = make_toy_collaborators(
            _targets(a=1, b=1), scores={"a": 0.2, "b": 0.6}, n_samples={"a": 3, "b": 1}
        )
        scores = weighted_validation(ToyTrainer(P), ModelParams(np.zeros(P)), collaborators)
        assert scores["a"] == 0.2
        assert scores["mean"] == pytest.approx(0.3)

    def test_pooling_needs_concat(self):
        """Test that plain arrays cannot be pooled."""
        with pytest.raises(TypeError):
            pool_train_sets(make_toy_collaborators(_targets(a=1)))

    def test_pooling_empty(self):
        """Test that pooling nobody is an error."""
        with pytest.raises(ValueError):
            pool_train_sets([])
