"""
Ranking Report

Assembles the JSON report written by the rank command: final ranks plus the
institution-level mean and worst-case statistics per algorithm, metric and
region.
"""

import json
from pathlib import Path
from typing import Any, Dict, Sequence, Union

from loguru import logger

from .ranker import RankTable
from .records import METRICS, REGIONS, MetricRecord
from .statistics import MissingRecordsError, mean_performance, worst_case_performance


def build_report(records: Sequence[MetricRecord], table: RankTable) -> Dict[str, Any]:
    """
    Build a JSON-ready ranking report.

    Statistics that cannot be computed (an institution with only missing
    values) are reported as null.

    Args:
        records: Metric records used for the ranking
        table: Ranking result

    Returns:
        Dict[str, Any]: Report with "institutions" and per-algorithm entries
    """
    algorithms = sorted(table.final_ranks, key=lambda a: (table.final_ranks[a], a))
    report: Dict[str, Any] = {
        "institutions": sorted({r.institution for r in records}),
        "algorithms": [],
    }
    for algorithm in algorithms:
        statistics: Dict[str, Dict[str, Any]] = {}
        for metric in METRICS:
            for region in REGIONS:
                key = f"{metric}/{region}"
                try:
                    worst_institution, worst_value = worst_case_performance(records, algorithm, metric, region)
                    statistics[key] = {
                        "mean": mean_performance(records, algorithm, metric, region),
                        "worst_institution": worst_institution,
                        "worst_value": worst_value,
                    }
                except MissingRecordsError as e:
                    logger.warning(f"Statistic {key} unavailable for {algorithm}: {e}")
                    statistics[key] = {"mean": None, "worst_institution": None, "worst_value": None}
        report["algorithms"].append({
            "algorithm": algorithm,
            "final_rank": table.final_ranks[algorithm],
            "mean_rank": table.mean_ranks[algorithm],
            "per_institution_ranks": dict(sorted(table.per_institution_ranks[algorithm].items())),
            "statistics": statistics,
        })
    return report


def write_report(report: Dict[str, Any], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    logger.info(f"Wrote ranking report to {path}")
    return path
