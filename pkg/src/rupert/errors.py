class RupertError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(RupertError, ValueError):
    pass


class DegenerateProjectionError(RupertError):
    """A silhouette collapsed to a segment or a point."""


class NormalizationError(RupertError):
    """A polygon does not strictly contain the origin."""


class DegeneracyError(RupertError):
    """Input points for a hull are affinely dependent."""

    def __init__(self, message, rank=None):
        super().__init__(message)
        self.rank = rank


class FlatSolidError(RupertError, ValueError):
    pass


class ParseError(RupertError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class LookupFailure(RupertError, KeyError):
    def __init__(self, key, suggestions=()):
        self.key = key
        self.suggestions = list(suggestions)
        super().__init__(key)

    def __str__(self):
        msg = f"unknown solid {self.key!r}"
        if self.suggestions:
            msg += f"; did you mean: {', '.join(self.suggestions)}"
        return msg


class ObjectiveError(RupertError):
    """The objective returned a non-finite value."""
