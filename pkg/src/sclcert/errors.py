"""Exception hierarchy shared by the library and the command line.

Each exception carries the process exit code the CLI uses for it.
"""

from __future__ import annotations


class SclCertError(Exception):
    exit_code = 1


class ParseError(SclCertError, ValueError):
    """Malformed word, chain, expression or configuration text."""

    exit_code = 2

    def __init__(self, message: str, text: str = "", position: int | None = None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
            if text:
                message += f"\n  {text}\n  {' ' * position}^"
        super().__init__(message)


class GuardError(SclCertError):
    """A hypothesis needed to emit a certificate does not hold."""

    exit_code = 3


class NotAPower(GuardError):
    """The evaluated expression is not a power of the target element."""


class Inconclusive(SclCertError):
    """A bounded scan finished without deciding the question."""

    exit_code = 4


class InvariantBreach(SclCertError):
    """An internal consistency check failed; results must not be trusted."""

    exit_code = 5
