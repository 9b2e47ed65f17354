"""Exception hierarchy shared by the engine and the command line."""


class KzError(Exception):
    """Base class for all engine errors."""


class RingMismatchError(KzError, ValueError):
    """Operands live over different polynomial rings or free modules."""


class ParseError(KzError, ValueError):
    """Malformed polynomial text or problem file.

    ``line`` and ``column`` are 1-based when known.
    """

    def __init__(self, message, line=None, column=None, source=None):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        where = []
        if source:
            where.append(str(source))
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class NotHomogeneousError(ParseError):
    """An input element is not homogeneous for the ring grading."""


class PreconditionError(KzError, ValueError):
    """An operation was called outside its mathematical hypotheses."""


class InfiniteLengthError(PreconditionError):
    """A length that must be finite turned out to be infinite."""


class SearchFailure(PreconditionError):
    """A bounded search (e.g. for a system of parameters) came up empty."""


class ResourceBudgetExceeded(KzError, RuntimeError):
    """A Groebner computation hit its configured pair or degree budget."""


class VerificationFailure(KzError, AssertionError):
    """Two independent computations of the same quantity disagree."""
