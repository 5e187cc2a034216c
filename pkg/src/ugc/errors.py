"""Exception types shared across the package."""


class UgcError(Exception):
    """Base class for all errors raised by ugc."""


class EdgeListError(UgcError, ValueError):
    """Malformed edge-list input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CorruptDataError(UgcError, ValueError):
    """Compressed data is malformed or inconsistent."""


class TruncatedStreamError(CorruptDataError):
    """A code stream ended before all symbols could be decoded."""


class ContainerFormatError(CorruptDataError):
    """Bad magic, version, flags or length fields in a .ugc container."""
