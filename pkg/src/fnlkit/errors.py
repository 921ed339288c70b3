"""Shared exception types."""


class FnlError(Exception):
    """Base class for all package errors."""


class ParseError(FnlError):
    """Raised on malformed concrete syntax.

    Carries the offset into the input where the problem was detected.
    """

    def __init__(self, message, pos=None):
        if pos is not None:
            message = f"{message} (at offset {pos})"
        super().__init__(message)
        self.pos = pos


class ValidationError(FnlError):
    """An object is well-formed but not admitted by the system at hand."""


class ModelError(FnlError):
    """A frame or valuation is internally inconsistent."""


class LemmaError(FnlError):
    """A certified-derivation builder was called outside its contract."""
