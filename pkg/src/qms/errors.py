"""Exception hierarchy shared by every module."""


class QMSError(Exception):
    """Base class for all library errors."""


class DivisionByZero(QMSError, ZeroDivisionError):
    """Inverting the zero quaternion or parsing a rational with denominator 0."""


class DimensionError(QMSError, ValueError):
    """Operands have incompatible shapes."""


class SingularError(QMSError, ValueError):
    """A square matrix without full rank was asked for its inverse."""


class InternalInconsistency(QMSError, RuntimeError):
    """A construction produced output that fails its own verification.

    This signals a bug in the library, never a problem with user input.
    """


class BlockIndexError(QMSError, IndexError):
    """A block index outside 1..11 (or outside the layout)."""


class InconsistentSystem(QMSError):
    """The matrix equation has no solution.

    ``report`` carries the :class:`~qms.solvers.ConsistencyReport`.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ParameterError(QMSError, ValueError):
    """Missing, unknown or wrongly shaped free parameters."""


class PatternError(QMSError, ValueError):
    """A rank pattern is malformed or its block sizes cannot be inferred."""


class SchemaError(QMSError, ValueError):
    """An instance file does not follow the JSON schema.

    ``location`` is a JSON-path-like string such as ``A.entries[0][1][2]``.
    """

    def __init__(self, message, location=""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location
