"""
EPR Spin Memory

Transfer of continuous-variable EPR entanglement from two light beams onto
two atomic ensembles in optical cavities: Gaussian-state tools, the reduced
and three-level mapping models, storage and homodyne readout, and a
command-line driver for sweeps and validation.
"""

import logging

__version__ = "1.0.0"

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

from .cli import COMMAND_CLASS_MAPPINGS, COMMAND_DISPLAY_NAME_MAPPINGS

__all__ = ["COMMAND_CLASS_MAPPINGS", "COMMAND_DISPLAY_NAME_MAPPINGS", "__version__"]
