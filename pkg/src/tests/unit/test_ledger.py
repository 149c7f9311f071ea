"""
Unit Tests for the Communication Ledger and Model Parameters
"""

import numpy as np
import pandas as pd
import pytest

from src.federation import CommLedger, ModelParams, ModelUpdate, RoundRecord, communication_cost
from src.federation.ledger import LEDGER_COLUMNS


def _record(r, selected=("a", "b"), responded=("a", "b"), down=80, up=112, **fields):
    return RoundRecord(r, tuple(selected), tuple(responded), down, up, **fields)


class TestRoundRecord:
    """Tests for single ledger entries."""

    def test_responders_subset_of_selected(self):
        """Test that responders must have been selected."""
        with pytest.raises(ValueError):
            _record(1, selected=("a",), responded=("a", "b"))

    def test_total_bytes(self):
        """Test total = down + up."""
        assert _record(1).total_bytes == 192

    def test_row_joins_ids(self):
        """Test the CSV row representation."""
        row = _record(1, late=("c",)).to_row()
        assert row["selected"] == "a;b"
        assert row["late"] == "c"
        assert row["stale"] == ""


class TestCommLedger:
    """Tests for the append-only ledger and cost summary."""

    def test_cost_example(self):
        """Test K=3, R=2, P=10, width 4, metadata 16 -> 576 under both readings."""
        ledger = CommLedger()
        for r in (1, 2):
            ledger.append(_record(r, ("a", "b", "c"), ("a", "b", "c"), down=3 * 40, up=3 * 56))
        cost = communication_cost(ledger)
        assert cost.cumulative_bytes == 576
        assert cost.mean_bytes_per_round == 288.0
        assert cost.product_metric == 576
        assert cost.rounds == 2

    def test_product_metric_is_exact(self):
        """Test that mean-per-round times rounds equals the cumulative bytes exactly."""
        ledger = CommLedger()
        for r in range(1, 8):
            ledger.append(_record(r, down=5 if r == 1 else 4, up=0))
        cost = communication_cost(ledger)
        assert cost.cumulative_bytes == 29
        assert cost.product_metric == 29
        assert isinstance(cost.product_metric, int)

    def test_empty_ledger(self):
        """Test that an empty ledger costs nothing."""
        cost = communication_cost(CommLedger())
        assert cost.cumulative_bytes == 0
        assert cost.product_metric == 0

    def test_totals_are_sums(self):
        """Test that totals equal the per-round sums."""
        ledger = CommLedger()
        ledger.append(_record(1, down=10, up=5))
        ledger.append(_record(2, down=20, up=0, responded=(), failed=True))
        assert ledger.totals == {"rounds": 2, "bytes_down": 30, "bytes_up": 5, "bytes_total": 35}

    def test_append_only_in_order(self):
        """Test that rounds must be appended in increasing order."""
        ledger = CommLedger()
        ledger.append(_record(2))
        with pytest.raises(ValueError):
            ledger.append(_record(1))

    def test_csv(self, tmp_path):
        """Test one CSV row per round with the ledger columns."""
        ledger = CommLedger()
        ledger.append(_record(1, consensus_val_score=0.25))
        ledger.append(_record(2))
        frame = pd.read_csv(ledger.to_csv(tmp_path / "run" / "ledger.csv"))
        assert list(frame.columns) == LEDGER_COLUMNS
        assert frame["bytes_down"].tolist() == [80, 80]
        assert frame["consensus_val_score"].iloc[0] == 0.25


class TestModelParams:
    """Tests for the exchanged parameter vector."""

    def test_nbytes(self):
        """Test size = P * wire width."""
        assert ModelParams(np.zeros(10), wire_width=4).nbytes == 40
        assert ModelParams(np.zeros(10), wire_width=2).nbytes == 20

    def test_read_only(self):
        """Test that parameter values cannot be modified in place."""
        params = ModelParams(np.zeros(3))
        with pytest.raises(ValueError):
            params.values[0] = 1.0

    def test_rejects_non_finite(self):
        """Test that NaN parameters are rejected."""
        with pytest.raises(ValueError):
            ModelParams(np.array([0.0, np.nan]))

    def test_rejects_empty(self):
        """Test that a model needs at least one parameter."""
        with pytest.raises(ValueError):
            ModelParams(np.zeros(0))

    def test_update_score_range(self):
        """Test that update scores must be in [0, 1]."""
        with pytest.raises(ValueError):
            ModelUpdate("a", ModelParams(np.zeros(1)), 1.01, 1)
