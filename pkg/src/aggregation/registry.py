"""
Strategy Registry

Aggregation strategies register under a string name so that federation configs
can pick them (and third-party strategies can be plugged in) by name.
"""

from typing import Any, Callable, Dict, List, Mapping, Optional, Type

from loguru import logger

from ..exceptions import ConfigurationError

_STRATEGIES: Dict[str, Type] = {}


class UnknownStrategyError(ConfigurationError):
    """Requested strategy name is not registered."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(
            f"Unknown aggregation strategy '{name}'. Registered strategies: {', '.join(available_strategies())}"
        )


def register_strategy(name: str) -> Callable[[Type], Type]:
    """
    Class decorator registering an aggregation strategy.

    Example:
        @register_strategy("my_strategy")
        class MyStrategy(AggregationStrategy):
            ...
    """
    def decorator(cls: Type) -> Type:
        if name in _STRATEGIES and _STRATEGIES[name] is not cls:
            raise ValueError(f"Strategy '{name}' is already registered")
        cls.name = name
        _STRATEGIES[name] = cls
        return cls
    return decorator


def available_strategies() -> List[str]:
    return sorted(_STRATEGIES)


def create_strategy(name: str, params: Optional[Mapping[str, Any]] = None):
    """
    Instantiate a registered strategy.

    Args:
        name: Registered strategy name
        params: Strategy parameter block from the federation config

    Returns:
        AggregationStrategy: Configured strategy

    Raises:
        UnknownStrategyError: Name not registered
        pydantic.ValidationError: Invalid parameter block
    """
    if name not in _STRATEGIES:
        raise UnknownStrategyError(name)
    strategy = _STRATEGIES[name].from_params(params or {})
    logger.info(f"Created aggregation strategy {name} with {strategy.params.model_dump()}")
    return strategy
