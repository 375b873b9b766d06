"""Exception types shared across the package."""


class LoopforgeError(Exception):
    """Base class for all package errors."""


class ParseError(LoopforgeError):
    """A text input did not conform to its file format.

    Carries the 1-based line number when one is known.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedLoopError(LoopforgeError):
    """A cell sequence is not a valid loop (duplicates, gaps, too short, off board)."""


class SearchBudgetExceeded(LoopforgeError):
    """A search ran out of its node budget before reaching a verdict."""

    def __init__(self, nodes):
        self.nodes = nodes
        super().__init__(f"search budget exhausted after {nodes} nodes")


class CompileError(LoopforgeError):
    """A puzzle instance could not be built from the given graph and exit plan."""


class LiftError(LoopforgeError):
    """A puzzle solution could not be mapped back to a cycle of the source graph."""
