"""Exception hierarchy shared by all modules.

Two top-level families matter to callers: ``ValidationError`` means the input
was bad (CLI exit code 1), ``InternalComputationError`` means the library
detected an inconsistency in its own results (CLI exit code 2).
"""


class ResLocError(Exception):
    pass


class ValidationError(ResLocError):
    """Invalid input data, parameters or files."""


class CatalogError(ValidationError):
    """Unsupported surface descriptor."""


class UnsupportedScopeError(ValidationError):
    """Request outside the implemented scope (e.g. b1 > 0 full-family evaluation)."""


class RankDeficiencyError(ValidationError):
    """Training set does not span the monomial space of the fit."""

    def __init__(self, message, missing_directions=()):
        super().__init__(message)
        self.missing_directions = tuple(missing_directions)


class SeriesInversionError(ValidationError):
    """Series with zero constant term cannot be inverted."""


class CacheError(ValidationError):
    """Corrupt or schema-mismatched cache file."""


class CacheMissError(ResLocError):
    """Requested cache entry does not exist."""


class InternalComputationError(ResLocError):
    """Cross-checks inside the library disagree; signals a bug, not bad input."""


class HoldoutResidualError(InternalComputationError):
    """A fitted universal polynomial failed to reproduce a holdout value exactly."""
