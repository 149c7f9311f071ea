"""
Challenge Ranking (rank-then-aggregate)

At each institution k, algorithms are ranked on every comparison
(N_k cases x 3 regions x 2 metrics); an algorithm's per-institution rank is the
mean of its N_k * 3 * 2 ranks. The final rank orders algorithms by the mean of
their per-institution ranks. Ties take the minimum rank at every level, and a
missing prediction ranks strictly below any present value.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Mapping, Sequence, Union

import numpy as np
import pandas as pd
from loguru import logger

from ..exceptions import InputValidationError
from .records import MetricRecord, records_to_frame
from .statistics import HIGHER_IS_BETTER

COMPARISON_KEY = ["case", "region", "metric"]


class RaggedRecordsError(InputValidationError):
    """Algorithms are not evaluated on the same comparisons."""


@dataclass
class RankTable:
    """
    Ranking result for a set of algorithms.

    Attributes:
        per_institution_ranks: algorithm -> institution -> average rank
        mean_ranks: algorithm -> mean of per-institution ranks
        final_ranks: algorithm -> integer final rank (ties share the minimum)
    """
    per_institution_ranks: Dict[str, Dict[str, float]] = field(default_factory=dict)
    mean_ranks: Dict[str, float] = field(default_factory=dict)
    final_ranks: Dict[str, int] = field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        """Rows sorted by (final rank, algorithm); one column per institution."""
        institutions = sorted({inst for ranks in self.per_institution_ranks.values() for inst in ranks})
        rows = []
        for algorithm in sorted(self.final_ranks, key=lambda a: (self.final_ranks[a], a)):
            row = {"algorithm": algorithm}
            for institution in institutions:
                row[institution] = self.per_institution_ranks[algorithm][institution]
            row["mean_rank"] = self.mean_ranks[algorithm]
            row["final_rank"] = self.final_ranks[algorithm]
            rows.append(row)
        return pd.DataFrame(rows, columns=["algorithm"] + institutions + ["mean_rank", "final_rank"])

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format="%.17g")
        return path


def _comparison_scores(frame: pd.DataFrame) -> pd.Series:
    """Lower-is-better score per row; missing predictions map to +inf."""
    higher = frame["metric"].map(HIGHER_IS_BETTER).astype(bool)
    scores = np.where(higher, -frame["value"], frame["value"])
    scores = np.where(frame["missing"] | frame["value"].isna(), np.inf, scores)
    return pd.Series(scores, index=frame.index, dtype=np.float64)


def _exact_institution_ranks(records: Sequence[MetricRecord], institution: str) -> Dict[str, Fraction]:
    """Per-institution average ranks as exact fractions (rank sum / comparison count)."""
    frame = records_to_frame(records)
    frame = frame[frame["institution"] == institution].copy()
    if frame.empty:
        raise InputValidationError(f"No records for institution {institution!r}")

    keysets = {
        algorithm: set(map(tuple, group[COMPARISON_KEY].to_numpy().tolist()))
        for algorithm, group in frame.groupby("algorithm", sort=True)
    }
    reference = set().union(*keysets.values())
    for algorithm, keys in keysets.items():
        if keys != reference:
            raise RaggedRecordsError(
                f"Institution {institution!r}: algorithm {algorithm!r} covers {len(keys)} of "
                f"{len(reference)} comparisons"
            )

    frame["score"] = _comparison_scores(frame)
    frame["rank"] = frame.groupby(COMPARISON_KEY)["score"].rank(method="min", ascending=True)
    sums = frame.groupby("algorithm", sort=True)["rank"].sum()
    logger.debug(f"Institution {institution}: ranked {len(keysets)} algorithms on {len(reference)} comparisons")
    return {str(algorithm): Fraction(int(total), len(reference)) for algorithm, total in sums.items()}


def per_institution_rank(records: Sequence[MetricRecord], institution: str) -> Dict[str, float]:
    """
    Average rank of each algorithm over one institution's comparisons.

    Args:
        records: Metric records (any institutions; others are ignored)
        institution: Institution to rank

    Returns:
        Dict[str, float]: algorithm -> mean of its N_k * 3 * 2 ranks

    Raises:
        RaggedRecordsError: Algorithms cover different comparison sets
    """
    return {algorithm: float(rank) for algorithm, rank in _exact_institution_ranks(records, institution).items()}


def _min_rank(values: Mapping[str, Union[float, Fraction]]) -> Dict[str, int]:
    """Integer ranks, ascending, equal values share the minimum rank."""
    return {
        name: 1 + sum(1 for other in values.values() if other < value)
        for name, value in values.items()
    }


def final_rank(per_institution_ranks: Mapping[str, Mapping[str, Union[float, Fraction]]]) -> RankTable:
    """
    Final ranks from per-institution ranks.

    Args:
        per_institution_ranks: institution -> algorithm -> average rank (floats
            or exact fractions; means and ties are computed exactly)

    Returns:
        RankTable: Per-institution ranks, their means and final integer ranks

    Raises:
        RaggedRecordsError: An algorithm is missing at some institution
    """
    if not per_institution_ranks:
        raise InputValidationError("No per-institution ranks to aggregate")
    algorithms = sorted({alg for ranks in per_institution_ranks.values() for alg in ranks})
    for institution, ranks in per_institution_ranks.items():
        absent = set(algorithms) - set(ranks)
        if absent:
            raise RaggedRecordsError(f"Institution {institution!r} has no rank for {sorted(absent)}")

    exact = {
        algorithm: {inst: Fraction(ranks[algorithm]) for inst, ranks in per_institution_ranks.items()}
        for algorithm in algorithms
    }
    exact_means = {algorithm: sum(ranks.values()) / len(ranks) for algorithm, ranks in exact.items()}
    return RankTable(
        per_institution_ranks={
            algorithm: {inst: float(rank) for inst, rank in ranks.items()} for algorithm, ranks in exact.items()
        },
        mean_ranks={algorithm: float(mean) for algorithm, mean in exact_means.items()},
        final_ranks=_min_rank(exact_means),
    )


def rank_algorithms(records: Sequence[MetricRecord]) -> RankTable:
    """
    Full rank-then-aggregate ranking over every institution in the records.

    Args:
        records: Metric records for all algorithms

    Returns:
        RankTable: Ranking result
    """
    institutions: List[str] = sorted({r.institution for r in records})
    logger.info(f"Ranking {len({r.algorithm for r in records})} algorithms across {len(institutions)} institutions")
    per_institution = {inst: _exact_institution_ranks(records, inst) for inst in institutions}
    table = final_rank(per_institution)
    logger.info(f"Final ranks: {table.final_ranks}")
    return table
