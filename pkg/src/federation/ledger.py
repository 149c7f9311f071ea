"""
Communication Ledger

Per-round accounting of the bytes exchanged between the aggregator and the
collaborators:
- bytes_down = |selected| * P * wire_width (consensus sent to every selected collaborator)
- bytes_up   = sum over accepted responders of (update size + metadata_bytes)

The ledger is append-only; totals are always recomputed from the records.
"""

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import pandas as pd
from loguru import logger

LEDGER_COLUMNS = [
    "round_index", "selected", "responded", "late", "stale", "failed",
    "bytes_down", "bytes_up", "consensus_val_score",
]


@dataclass(frozen=True)
class RoundRecord:
    """
    Ledger entry for one federated round.

    Attributes:
        round_index: 1-based round number
        selected: Collaborators the consensus was sent to
        responded: Collaborators whose fresh update was accepted (subset of selected)
        bytes_down: Bytes sent by the aggregator
        bytes_up: Bytes received by the aggregator
        consensus_val_score: Sample-weighted mean of fresh val_scores, None without any
        late: Collaborators that answered after a deadline closed (not counted)
        stale: Collaborators whose cached update was reused
        failed: True when no usable update arrived
    """
    round_index: int
    selected: Tuple[str, ...]
    responded: Tuple[str, ...]
    bytes_down: int
    bytes_up: int
    consensus_val_score: Optional[float] = None
    late: Tuple[str, ...] = ()
    stale: Tuple[str, ...] = ()
    failed: bool = False

    def __post_init__(self):
        if not set(self.responded) <= set(self.selected):
            raise ValueError(f"Round {self.round_index}: responders must be a subset of the selected collaborators")

    @property
    def total_bytes(self) -> int:
        return self.bytes_down + self.bytes_up

    def to_row(self) -> Dict[str, Any]:
        row = asdict(self)
        for key in ("selected", "responded", "late", "stale"):
            row[key] = ";".join(row[key])
        return row


@dataclass(frozen=True)
class CostReport:
    """
    Communication-cost summary.

    The "bytes sent/received multiplied by number of rounds" metric is reported
    under both readings: cumulative bytes, and mean bytes per round times rounds.
    They are equal by construction.
    """
    rounds: int
    bytes_down: int
    bytes_up: int
    cumulative_bytes: int
    mean_bytes_per_round: float
    product_metric: int

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class CommLedger:
    """Append-only list of RoundRecords."""
    records: List[RoundRecord] = field(default_factory=list)

    def append(self, record: RoundRecord) -> None:
        if self.records and record.round_index <= self.records[-1].round_index:
            raise ValueError(f"Round {record.round_index} appended after round {self.records[-1].round_index}")
        self.records.append(record)
        logger.debug(
            f"Ledger round {record.round_index}: down={record.bytes_down} up={record.bytes_up} "
            f"responded={len(record.responded)}/{len(record.selected)}"
        )

    @property
    def totals(self) -> Dict[str, int]:
        down = sum(r.bytes_down for r in self.records)
        up = sum(r.bytes_up for r in self.records)
        return {"rounds": len(self.records), "bytes_down": down, "bytes_up": up, "bytes_total": down + up}

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.to_row() for r in self.records], columns=LEDGER_COLUMNS)

    def to_csv(self, path: Union[str, Path]) -> Path:
        """Write one row per round."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format="%.17g")
        logger.info(f"Wrote ledger ({len(self.records)} rounds) to {path}")
        return path

    def to_dict(self) -> Dict[str, Any]:
        return {
            "records": [asdict(r) for r in self.records],
            "totals": self.totals,
        }


def communication_cost(ledger: CommLedger) -> CostReport:
    """
    Summarize a ledger's communication cost.

    Args:
        ledger: Communication ledger

    Returns:
        CostReport: Both readings of the cost metric (all zeros for an empty ledger)

    Example:
        K=3 collaborators, R=2 rounds, P=10, wire width 4, 16 metadata bytes:
        cumulative 2*3*40 + 2*3*56 = 576 bytes; product metric 288 * 2 = 576.
    """
    totals = ledger.totals
    rounds = totals["rounds"]
    cumulative = totals["bytes_total"]
    mean_per_round = Fraction(cumulative, rounds) if rounds else Fraction(0)
    return CostReport(
        rounds=rounds,
        bytes_down=totals["bytes_down"],
        bytes_up=totals["bytes_up"],
        cumulative_bytes=cumulative,
        mean_bytes_per_round=float(mean_per_round),
        product_metric=int(mean_per_round * rounds),
    )
