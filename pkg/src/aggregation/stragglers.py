"""
Stragglers and Outages

OutageModel decides whether a collaborator is reachable in a round;
apply_straggler_policy decides which updates enter aggregation when some
selected collaborators did not answer.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Mapping, Optional, Sequence, Tuple

from loguru import logger

from ..federation.config import AvailabilityConfig
from ..federation.errors import RoundFailedError
from ..federation.params import ModelUpdate
from ..seeding import rng_for


class StragglerPolicy(str, Enum):
    DROP = "drop"
    REUSE_STALE = "reuse_stale"
    DEADLINE = "deadline"


@dataclass(frozen=True)
class StragglerOutcome:
    """
    Result of applying a straggler policy.

    Attributes:
        effective: Updates entering aggregation (fresh, then reused stale ones)
        accepted: Ids of fresh updates accepted (these are the round's responders)
        late: Ids that answered after the deadline closed
        stale: Ids whose cached update was reused
    """
    effective: Tuple[ModelUpdate, ...]
    accepted: Tuple[str, ...]
    late: Tuple[str, ...] = ()
    stale: Tuple[str, ...] = ()


def deadline_quota(fraction: float, n_selected: int) -> int:
    """Number of responders accepted before the deadline closes: ceil(f * |selected|)."""
    return max(1, math.ceil(fraction * n_selected - 1e-9))


def apply_straggler_policy(
    policy: StragglerPolicy,
    selected: Sequence[str],
    responded: Sequence[ModelUpdate],
    stale_cache: Mapping[str, ModelUpdate],
    deadline_fraction: float = 1.0
) -> StragglerOutcome:
    """
    Decide the effective update set of a round.

    Args:
        policy: drop, reuse_stale or deadline
        selected: Collaborators selected this round
        responded: Fresh updates in the round's response order (subset of selected)
        stale_cache: Last accepted update per collaborator from earlier rounds
        deadline_fraction: f for the deadline policy, in (0, 1]

    Returns:
        StragglerOutcome: Effective updates and per-collaborator bookkeeping

    Raises:
        ValueError: A responder was not selected
        RoundFailedError: No update at all can enter aggregation
    """
    policy = StragglerPolicy(policy)
    selected_set = set(selected)
    responder_ids = [u.collaborator_id for u in responded]
    unexpected = set(responder_ids) - selected_set
    if unexpected:
        raise ValueError(f"Responses from unselected collaborators: {sorted(unexpected)}")

    effective: List[ModelUpdate] = list(responded)
    late: List[str] = []
    stale: List[str] = []

    if policy is StragglerPolicy.REUSE_STALE:
        for cid in sorted(selected_set - set(responder_ids)):
            if cid in stale_cache:
                effective.append(stale_cache[cid])
                stale.append(cid)
    elif policy is StragglerPolicy.DEADLINE and len(responded) < len(selected_set):
        # the timer only fires when someone is still missing
        quota = deadline_quota(deadline_fraction, len(selected_set))
        effective = list(responded[:quota])
        late = [u.collaborator_id for u in responded[quota:]]

    if not effective:
        raise RoundFailedError(
            f"No usable update: {len(selected_set)} selected, 0 responded (policy {policy.value})"
        )
    if late or stale:
        logger.debug(f"Straggler policy {policy.value}: late={late} stale={stale}")

    accepted = tuple(u.collaborator_id for u in effective if u.collaborator_id not in stale)
    return StragglerOutcome(tuple(effective), accepted, tuple(late), tuple(stale))


class OutageModel:
    """
    Per-collaborator availability process.

    Modes:
        always: reachable every round
        schedule: explicit per-round flags (round r uses schedule[r - 1])
        bernoulli: independent draws with probability p_avail, from the stream
            (seed, "outage", round, collaborator)
    """

    def __init__(
        self,
        mode: str = "always",
        schedule: Optional[Sequence[bool]] = None,
        p_avail: float = 1.0,
        seed: int = 0,
        collaborator_id: str = ""
    ):
        if mode not in ("always", "schedule", "bernoulli"):
            raise ValueError(f"Unknown availability mode: {mode}")
        if not 0.0 < p_avail <= 1.0:
            raise ValueError(f"p_avail must be in (0, 1], got {p_avail}")
        if mode == "schedule" and not schedule:
            raise ValueError("Schedule mode needs a non-empty schedule")
        self.mode = mode
        self.schedule = tuple(bool(flag) for flag in schedule) if schedule else ()
        self.p_avail = p_avail
        self.seed = seed
        self.collaborator_id = collaborator_id

    def is_available(self, round_index: int) -> bool:
        if self.mode == "schedule":
            if round_index > len(self.schedule):
                raise ValueError(
                    f"Schedule of {self.collaborator_id} has {len(self.schedule)} entries, round {round_index} requested"
                )
            return self.schedule[round_index - 1]
        if self.mode == "bernoulli" and self.p_avail < 1.0:
            draw = rng_for(self.seed, "outage", round_index, self.collaborator_id).random()
            return bool(draw < self.p_avail)
        return True

    def __repr__(self) -> str:
        return f"OutageModel(mode={self.mode!r}, p_avail={self.p_avail}, collaborator={self.collaborator_id!r})"


def create_outage_model(config: AvailabilityConfig, seed: int, collaborator_id: str) -> OutageModel:
    """Build a collaborator's OutageModel from its availability block."""
    return OutageModel(
        mode=config.mode,
        schedule=config.schedule,
        p_avail=config.p_avail,
        seed=seed,
        collaborator_id=collaborator_id,
    )
