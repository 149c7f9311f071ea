"""
Client Selection
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

from loguru import logger

from ..seeding import rng_for


@dataclass(frozen=True)
class SelectionPolicy:
    """
    Which collaborators take part in a round.

    Attributes:
        fraction: None selects everyone; otherwise ceil(fraction * K) collaborators
            are drawn without replacement from the round's seeded stream
    """
    fraction: Optional[float] = None

    def __post_init__(self):
        if self.fraction is not None and not 0.0 < self.fraction <= 1.0:
            raise ValueError(f"Selection fraction must be in (0, 1], got {self.fraction}")

    def count(self, n_collaborators: int) -> int:
        if self.fraction is None:
            return n_collaborators
        # absorb float error, e.g. 0.7 * 10 -> 7.000000000000001
        return max(1, min(n_collaborators, math.ceil(self.fraction * n_collaborators - 1e-9)))


def select_clients(
    policy: SelectionPolicy,
    round_index: int,
    collaborators: Sequence[str],
    seed: int
) -> List[str]:
    """
    Select the collaborators of one round.

    Args:
        policy: Selection policy
        round_index: 1-based round number
        collaborators: Candidate collaborator ids (non-empty)
        seed: Federation seed

    Returns:
        List[str]: Selected ids, sorted

    Example:
        >>> select_clients(SelectionPolicy(0.4), 1, ["a", "b", "c", "d", "e"], seed=7)  # 2 ids
    """
    if not collaborators:
        raise ValueError("Cannot select from an empty collaborator list")
    candidates = sorted(collaborators)
    k = policy.count(len(candidates))
    if k == len(candidates):
        return candidates

    rng = rng_for(seed, "select", round_index)
    picked = rng.choice(len(candidates), size=k, replace=False)
    selected = sorted(candidates[i] for i in picked)
    logger.debug(f"Round {round_index}: selected {selected} of {len(candidates)}")
    return selected
