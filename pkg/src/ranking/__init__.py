"""
Ranking Module

Robustness statistics across institutions and the rank-then-aggregate
challenge ranking:
- MetricRecord CSV I/O
- mean / worst-case performance across institutions
- per-institution and final ranks with minimum-rank ties
"""

from .ranker import RaggedRecordsError, RankTable, final_rank, per_institution_rank, rank_algorithms
from .records import (
    DuplicateRecordError,
    MetricRecord,
    read_metric_csv,
    records_to_frame,
    write_metric_csv,
)
from .report import build_report, write_report
from .statistics import MissingRecordsError, mean_performance, worst_case_performance

__all__ = [
    'RaggedRecordsError',
    'RankTable',
    'final_rank',
    'per_institution_rank',
    'rank_algorithms',
    'DuplicateRecordError',
    'MetricRecord',
    'read_metric_csv',
    'records_to_frame',
    'write_metric_csv',
    'build_report',
    'write_report',
    'MissingRecordsError',
    'mean_performance',
    'worst_case_performance',
]
