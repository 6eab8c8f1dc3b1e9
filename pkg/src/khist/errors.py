"""Exception types shared across the package."""


class DataError(ValueError):
    """Malformed or unusable input data."""


class ParseError(DataError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SeedError(DataError):
    """Not enough distinct records to seed the requested number of clusters."""

    def __init__(self, k, distinct):
        self.k = k
        self.distinct = distinct
        super().__init__(f"cannot seed k={k} clusters: only {distinct} distinct records")


class IntegrityError(RuntimeError):
    """Cluster bookkeeping went out of sync; never expected in a correct run."""
