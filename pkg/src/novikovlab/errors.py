class NovikovLabError(Exception):
    """Base class for every error raised by this package."""


class RingMismatchError(NovikovLabError, TypeError):
    pass


class UnsupportedRingError(NovikovLabError, ValueError):
    pass


class NotAUnitError(NovikovLabError, ArithmeticError):
    pass


class WindowError(NovikovLabError, ValueError):
    """A series window operation would produce an empty determined window."""


class DimensionError(NovikovLabError, ValueError):
    pass


class ValidationError(NovikovLabError, ValueError):
    """A complex, chain map or double complex violates one of its laws.

    ``where`` names the offending degree (an int) or square (a tuple).
    """

    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where


class ContractionError(NovikovLabError, ValueError):
    def __init__(self, message, column=None, precondition=None):
        super().__init__(message)
        self.column = column
        self.precondition = precondition


class SchemaError(NovikovLabError, ValueError):
    pass
