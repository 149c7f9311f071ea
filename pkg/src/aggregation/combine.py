"""
Update Combination Rules

Coordinatewise combinations of collaborator parameter vectors into the next
consensus model. All rules are convex combinations of the update vectors.
"""

from typing import Optional, Sequence

import numpy as np
from loguru import logger

from ..federation.errors import ContractViolationError
from ..federation.params import ModelParams, ModelUpdate


def _stack(updates: Sequence[ModelUpdate]) -> np.ndarray:
    if not updates:
        raise ValueError("Cannot combine an empty update list")
    dimensions = {u.params.dimension for u in updates}
    if len(dimensions) != 1:
        raise ContractViolationError(f"Update dimensions differ: {sorted(dimensions)}")
    return np.stack([u.params.values for u in updates])


def weighted_combine(
    updates: Sequence[ModelUpdate],
    weights: Sequence[float],
    prev: Optional[ModelParams] = None
) -> ModelParams:
    """
    Weighted coordinatewise mean of update parameters.

    Args:
        updates: Non-empty list of updates with equal dimensions
        weights: Non-negative weights with a positive sum, one per update
        prev: Previous consensus; supplies the wire width when given

    Returns:
        ModelParams: sum_k w_k * theta_k / sum_k w_k
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (len(updates),) or np.any(w < 0) or not w.sum() > 0:
        raise ValueError(f"Invalid combination weights: {list(weights)}")
    # summation order follows collaborator id, not arrival order
    order = sorted(range(len(updates)), key=lambda i: updates[i].collaborator_id)
    stacked = _stack([updates[i] for i in order])
    w = w[order]
    if len(updates) == 1:
        combined = stacked[0]
    else:
        combined = (w / w.sum()) @ stacked
    wire_width = prev.wire_width if prev is not None else updates[0].params.wire_width
    return ModelParams(combined, wire_width)


def fedavg_combine(updates: Sequence[ModelUpdate], prev: Optional[ModelParams] = None) -> ModelParams:
    """
    Federated averaging: sample-count-weighted coordinatewise mean.

    Example:
        updates a (n=3) and b (n=1) -> 0.75 * a + 0.25 * b
    """
    logger.debug(f"FedAvg over {len(updates)} update(s)")
    return weighted_combine(updates, [u.n_samples for u in updates], prev)


def uniform_combine(updates: Sequence[ModelUpdate], prev: Optional[ModelParams] = None) -> ModelParams:
    """Unweighted coordinatewise mean; sample counts are ignored."""
    return weighted_combine(updates, [1.0] * len(updates), prev)


def val_weighted_combine(updates: Sequence[ModelUpdate], prev: Optional[ModelParams] = None) -> ModelParams:
    """
    Mean weighted by each collaborator's validation score.

    Falls back to uniform weights when every score is zero.
    """
    weights = [u.val_score for u in updates]
    if not any(weights):
        logger.warning("All validation scores are zero, combining uniformly")
        weights = [1.0] * len(updates)
    return weighted_combine(updates, weights, prev)
