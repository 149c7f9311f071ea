"""
Federation Errors
"""

from typing import Optional


class RoundFailedError(RuntimeError):
    """
    No usable update arrived in a round.

    Attributes:
        round_index: The failed round
        ledger: Ledger up to and including the failed round, when available
    """

    def __init__(self, message: str, round_index: Optional[int] = None, ledger=None):
        super().__init__(message)
        self.round_index = round_index
        self.ledger = ledger


class ContractViolationError(RuntimeError):
    """A trainer or strategy broke its contract (e.g. wrong parameter dimension)."""
