"""Exception hierarchy shared by all modules."""


class GroupTheoryError(Exception):
    """Base class for errors raised by this package."""


class AlphabetError(GroupTheoryError, ValueError):
    """A word uses a letter outside the alphabet it is supposed to live in."""


class ParseError(GroupTheoryError, ValueError):
    """Malformed text input; carries a 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class UnsupportedPresentation(GroupTheoryError):
    """The presentation is outside the class where our algorithms are complete."""


class UnsupportedCase(GroupTheoryError):
    """A construction relies on a theorem whose effective version is not implemented."""


class BoundExhausted(GroupTheoryError):
    """A bounded search ended without an answer. Never means 'no'."""


class NotASolution(GroupTheoryError, ValueError):
    """An assignment was expected to solve an equation but does not."""
