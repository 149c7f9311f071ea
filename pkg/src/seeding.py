"""
Deterministic Seed Derivation

Every random stream in the simulator is derived from one top-level seed and a
path of keys (purpose, round, collaborator id, case index). Derivation hashes the
path, so the stream a collaborator sees never depends on scheduling order.
"""

import hashlib
from typing import Any, List, Sequence

import numpy as np


def derive_seed(seed: int, *keys: Any) -> int:
    """
    Derive a 64-bit child seed from a root seed and a key path.

    Args:
        seed: Root seed
        *keys: Path components (converted with str())

    Returns:
        int: Derived seed in [0, 2**64)

    Example:
        >>> derive_seed(7, "train", 3, "inst_a") == derive_seed(7, "train", 3, "inst_a")
        True
    """
    path = "/".join([str(int(seed))] + [str(key) for key in keys])
    digest = hashlib.sha256(path.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def rng_for(seed: int, *keys: Any) -> np.random.Generator:
    """Numpy generator for the stream identified by (seed, *keys)."""
    return np.random.default_rng(derive_seed(seed, *keys))


def response_order(seed: int, round_index: int, collaborator_ids: Sequence[str]) -> List[str]:
    """
    Deterministic arrival order of collaborator responses within a round.

    Stands in for network latency: ascending hash of (seed, round, id).

    Args:
        seed: Federation seed
        round_index: 1-based round number
        collaborator_ids: Collaborators that responded

    Returns:
        List[str]: Ids sorted by simulated arrival
    """
    return sorted(
        collaborator_ids,
        key=lambda cid: (derive_seed(seed, "latency", round_index, cid), cid),
    )
