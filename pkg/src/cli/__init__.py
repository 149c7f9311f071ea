"""
CLI Module

Command-line entry point tying data generation, federated simulation,
prediction, evaluation and ranking into reproducible runs.
"""

from .commands import cmd_evaluate, cmd_gen_data, cmd_predict, cmd_rank, cmd_simulate
from .main import EXIT_OK, EXIT_RUNTIME, EXIT_VALIDATION, build_parser, main

__all__ = [
    'cmd_evaluate',
    'cmd_gen_data',
    'cmd_predict',
    'cmd_rank',
    'cmd_simulate',
    'EXIT_OK',
    'EXIT_RUNTIME',
    'EXIT_VALIDATION',
    'build_parser',
    'main',
]
