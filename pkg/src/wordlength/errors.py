"""Exception types shared across the package."""


class WordlengthError(Exception):
    """Base class for errors raised by this package."""


class DesignParseError(WordlengthError, ValueError):
    """Malformed design file.

    ``line`` carries the offending 1-based line number when one is known.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ResourceLimitError(WordlengthError, RuntimeError):
    """An operation would materialize more data than its configured cap allows."""


class InconsistentSpectrumError(WordlengthError, ValueError):
    """A spectrum vector does not reconstruct to integer run multiplicities."""
