"""
Shared Exception Types

Input problems derive from InputValidationError so the CLI can report them with
the validation exit code; everything else is treated as a runtime failure.
"""


class InputValidationError(ValueError):
    """Bad configuration or input data supplied by the caller."""


class ConfigurationError(InputValidationError):
    """Invalid or inconsistent configuration."""
