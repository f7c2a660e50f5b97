"""Exception types shared across the library.

Every error carries a stable machine-readable ``code`` so the CLI and the
JSON service can map failures without string matching on messages.
"""

from __future__ import annotations


class PerflawError(Exception):
    """Base class for all perflaw errors."""

    code: str = "ERROR"

    def __init__(self, message: str, *, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class DomainError(PerflawError, ValueError):
    """An input is outside the mathematical domain of an operation."""

    code = "DOMAIN_ERROR"


class SingularDesignError(PerflawError, ValueError):
    """The regression design matrix is rank deficient."""

    code = "RANK_DEFICIENT"


class UnsupportedWeightsError(PerflawError, ValueError):
    """An inverse operation is undefined for the given coefficient signs."""

    code = "UNSUPPORTED_WEIGHTS"


class DatasetError(PerflawError, ValueError):
    """A dataset file is missing, malformed, or violates its schema."""

    code = "DATASET_INVALID"


class RequestError(PerflawError, ValueError):
    """A request or document is structurally malformed (missing or
    mistyped fields), as opposed to violating a mathematical domain."""

    code = "BAD_REQUEST"
