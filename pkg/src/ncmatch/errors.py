"""Exception hierarchy for ncmatch."""

from __future__ import annotations


class NCMatchError(Exception):
    """Base class for all library errors."""


class GraphError(NCMatchError):
    pass


class DisconnectedSet(GraphError):
    """A set handed to ``contract`` is not connected in the current minor."""


class EvenSet(GraphError):
    """A set handed to ``contract`` has even total node weight."""


class OverlappingSets(GraphError):
    pass


class NotLaminar(GraphError):
    pass


class OracleError(NCMatchError):
    pass


class NoPerfectMatchingInput(OracleError):
    """An operation that needs a perfectly matchable graph got one without a perfect matching."""


class NoWitness(OracleError):
    """No vertex ``u`` leaves a perfectly matchable graph after deleting ``u`` and ``v``."""


class EvenComponentAtThreshold(OracleError):
    pass


class NoProgress(NCMatchError):
    """No candidate minor decreased the number of non-isolated edges."""


class InvalidWalk(NCMatchError):
    pass


class OddTokens(NCMatchError):
    pass


class LemmaViolation(NCMatchError):
    """A structural guarantee failed; points at a bug or a wrong oracle answer."""


class WeightCapError(NCMatchError):
    pass


class DimacsError(NCMatchError):
    def __init__(self, message: str, line: int, column: int = 1) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
