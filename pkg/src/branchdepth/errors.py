"""Exception hierarchy.  Every error is a ``ValueError`` so callers can catch broadly."""


class BranchDepthError(ValueError):
    pass


class FieldError(BranchDepthError):
    """Unsupported or malformed finite field."""


class ElementError(BranchDepthError):
    """An element index outside the ground set."""


class PreconditionError(BranchDepthError):
    """An operation was called outside its documented precondition."""


class GuardExceeded(BranchDepthError):
    """An instance is larger than a brute-force routine accepts."""


class InterpretationError(BranchDepthError):
    """The graph interpretation is not well defined on the given matroid."""


class FormulaError(BranchDepthError):
    """Malformed formula text or evaluation request."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class ParseError(BranchDepthError):
    """Malformed input file; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class AlgorithmError(BranchDepthError):
    """An internal step of the decomposition algorithm could not be carried out."""
