"""Identifiability and estimability diagnostics for inverse problems."""

from ._core import *  # noqa: F401,F403
from ._core import (
    CompositionError,
    EstimabilityError,
    InvalidInput,
    NoSolution,
    NumericalFailure,
    ParseError,
)

__version__ = "0.1.0"
