"""Exception hierarchy shared across the package."""


class SetscapeError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(SetscapeError):
    """Malformed input document (bad JSON/TSV syntax or missing fields)."""


class ValidationError(SetscapeError):
    """Structurally well-formed input that violates a model invariant."""


class UnknownIdError(SetscapeError, KeyError):
    """A referenced id (node, set, category, session) does not exist."""

    def __str__(self) -> str:  # KeyError quotes its arg; keep the plain message
        return Exception.__str__(self)


class ConfigurationError(SetscapeError):
    """A style or configuration value is outside its permitted bounds."""


class CapacityError(SetscapeError):
    """More items than grid cells; reservation training cannot place them."""


class GeometryError(SetscapeError):
    """Degenerate geometric input (e.g. coincident curve endpoints)."""


class SupersededError(SetscapeError):
    """A newer state-changing request arrived while this one was computing."""
