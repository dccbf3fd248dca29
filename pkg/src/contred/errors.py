"""Exception types shared across the package."""

from __future__ import annotations


class ContredError(Exception):
    """Base class for errors raised by this package."""


class SpaceMismatchError(ContredError, ValueError):
    """Two objects were combined whose spaces do not line up."""


class CapacityError(ContredError, RuntimeError):
    """A search or construction exceeded its configured budget.

    Raised instead of silently answering "no": callers can retry with a
    larger budget, but must never mistake exhaustion for a negative verdict.
    """


class InvalidWitnessError(ContredError, ValueError):
    """A witness failed to replay against its defining equation."""


class SearchExhaustedError(CapacityError):
    """A generate-and-test search ran out of candidates or budget.

    Distinct from nonexistence: the searched fragment simply did not
    contain a witness within the allotted budget.
    """


class CorpusError(ContredError, ValueError):
    """A corpus text failed to parse or referenced undeclared items.

    Carries the 1-based source line when one is known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
