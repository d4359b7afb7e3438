"""Certified bounds for stable commutator length and the relative Gromov seminorm."""

from .errors import GuardError, Inconclusive, InvariantBreach, NotAPower, ParseError, SclCertError
from .words import Alphabet, CyclicWord, Word

__all__ = [
    "Alphabet",
    "CyclicWord",
    "Word",
    "SclCertError",
    "ParseError",
    "GuardError",
    "NotAPower",
    "Inconclusive",
    "InvariantBreach",
]

__version__ = "0.1.0"
