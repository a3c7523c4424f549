"""Exact analysis of two-agent no-signaling strategies."""

from .bell import ChshVariant, chsh_value, correlator, max_chsh_violation
from .catalog import get_example
from .fileformat import emit_strategy, parse_strategy
from .nosignaling import check_no_signaling, check_posterior
from .polytope import local_membership
from .tables import Alphabets, ObservationPrior, Strategy, validate_strategy

__all__ = [
    "Alphabets",
    "ChshVariant",
    "ObservationPrior",
    "Strategy",
    "check_no_signaling",
    "check_posterior",
    "chsh_value",
    "correlator",
    "emit_strategy",
    "get_example",
    "local_membership",
    "max_chsh_violation",
    "parse_strategy",
    "validate_strategy",
]
