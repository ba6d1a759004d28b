"""Exception types shared across the package."""


class IncompleteDataError(Exception):
    """A statistic needed complete factorization data that is not available.

    ``missing`` lists the blocking items (indices n, or cyclotomic indices d,
    depending on the operation that raised).
    """

    def __init__(self, message, missing=()):
        super().__init__(message)
        self.missing = list(missing)


class StoreCorruptionError(Exception):
    """A store record contradicts the exact value implied by its key."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class StoreParseError(Exception):
    """A store file or b-file could not be parsed."""

    def __init__(self, path, lineno, message):
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = path
        self.lineno = lineno
