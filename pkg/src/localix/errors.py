"""Exception hierarchy shared by every layer of localix."""


class LocalixError(Exception):
    """Base class for all localix errors."""


class SizeLimitError(LocalixError):
    """An enumeration would exceed a configured bound."""

    def __init__(self, bound_name, bound, size):
        self.bound_name = bound_name
        self.bound = bound
        self.size = size
        super().__init__(
            f"size limit exceeded: {bound_name} bound is {bound}, object has size {size}"
        )


class PreconditionError(LocalixError, ValueError):
    """An operation was called outside its documented domain."""


class ValidationError(LocalixError, ValueError):
    """Input data violates an algebraic law.

    ``report`` is the failing law report, when one is available.
    """

    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


class InvalidDerivationError(ValidationError):
    """A map offered as a delta-derivation fails the derivation identity."""


class ConsistencyError(LocalixError, AssertionError):
    """Two independent computations of the same object disagree.

    Raised when a fast path and its oracle diverge, or when a guaranteed
    invariant fails. Either is a defect, never data.
    """


class ScenarioError(LocalixError, ValueError):
    """A scenario file is malformed; carries the 1-based line and column when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
