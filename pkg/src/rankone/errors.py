"""Shared exception types, mapped to CLI exit codes in one place."""

from __future__ import annotations


class DescriptorError(ValueError):
    """Invalid descriptor document; carries the offending field path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class UndecidedError(RuntimeError):
    """A certified decision was required but stayed open at the precision cap."""

    def __init__(self, what: str):
        self.what = what
        super().__init__(f"undecided at precision cap: {what}")


class ResourceCapError(RuntimeError):
    """A computation exceeded its configured size budget."""


class UnsupportedOperationError(RuntimeError):
    """The requested operation does not apply to this descriptor class."""


class FitInconsistencyError(RuntimeError):
    """No sign assignment reproduces the exact count sequence."""


class FitAmbiguityError(RuntimeError):
    """Several sign assignments fit; more count terms are needed."""

    def __init__(self, suggested_j_check: int):
        self.suggested_j_check = suggested_j_check
        super().__init__(
            f"multiple sign assignments fit the tested counts; retry with j_check >= {suggested_j_check}"
        )
