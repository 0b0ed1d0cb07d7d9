"""Command-line driver: run configuration, sweep commands and the validation suite."""

from .commands import COMMAND_CLASS_MAPPINGS, COMMAND_DISPLAY_NAME_MAPPINGS
from .validation import (
    COMMAND_CLASS_MAPPINGS as VALIDATION_CLASS_MAPPINGS,
    COMMAND_DISPLAY_NAME_MAPPINGS as VALIDATION_DISPLAY_NAME_MAPPINGS,
)

COMMAND_CLASS_MAPPINGS = {
    **COMMAND_CLASS_MAPPINGS,
    **VALIDATION_CLASS_MAPPINGS,
}

COMMAND_DISPLAY_NAME_MAPPINGS = {
    **COMMAND_DISPLAY_NAME_MAPPINGS,
    **VALIDATION_DISPLAY_NAME_MAPPINGS,
}

__all__ = ["COMMAND_CLASS_MAPPINGS", "COMMAND_DISPLAY_NAME_MAPPINGS"]
