"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class FronthaulError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(FronthaulError, ValueError):
    """A configuration value violates its documented invariant."""


class TraceError(FronthaulError):
    """Base class for attenuation-trace problems."""


class TraceParseError(TraceError, ValueError):
    """A trace file row could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class TraceValidationError(TraceError, ValueError):
    """A parsed trace breaks an invariant (ordering, sign, emptiness)."""


class ConfigError(InvalidParameterError):
    """A JSON scenario document is malformed or names unknown fields."""
