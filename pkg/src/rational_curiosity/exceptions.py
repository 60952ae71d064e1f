"""Exception hierarchy shared by every module."""


class CuriosityError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CuriosityError, ValueError):
    """An argument lies outside the domain of the operation."""


class DimensionError(CuriosityError, ValueError):
    """Two sequences that must have equal length do not."""


class ConfigurationError(CuriosityError, ValueError):
    """A run or experiment configuration is invalid.

    ``key`` names the offending configuration entry when one is known.
    """

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class DegenerateDesignError(CuriosityError, ValueError):
    """The regression design matrix is rank deficient.

    ``column`` names the first column found to be collinear with the ones
    before it.
    """

    def __init__(self, message, column):
        super().__init__(message)
        self.column = column
