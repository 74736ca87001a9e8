"""Exception types shared across the package.

Every error that crosses a module boundary (CLI exit codes, HTTP status
mapping, test assertions) is defined here so callers can catch one family.
"""

from __future__ import annotations


class AdtError(Exception):
    """Base class for all errors raised by this package."""


# --- tree structure ---------------------------------------------------------

class InvalidTreeError(AdtError):
    """A tree failed structural validation where a valid tree was required."""

    def __init__(self, violations):
        self.violations = list(violations)
        summary = "; ".join(str(v) for v in self.violations) or "invalid tree"
        super().__init__(summary)


class UnknownNodeError(AdtError):
    """An edit referenced a node id that is not present in the tree."""


class DoubleCounterError(AdtError):
    """Attempt to attach a second countermeasure to a node."""


class EmptyDocumentError(AdtError):
    """Attempt to delete the root; a document always keeps one root."""


class EmptyLabelError(AdtError):
    """A node label was empty (or whitespace only)."""


# --- terms ------------------------------------------------------------------

class PlayerTypeError(AdtError):
    """A term violates the player typing rules (e.g. or_p over an opponent arg)."""

    def __init__(self, message, span=None):
        super().__init__(message)
        self.span = span


class StructureError(AdtError):
    """A term violates a structural rule (arity, nested counter head, blank label)."""

    def __init__(self, message, span=None):
        super().__init__(message)
        self.span = span


class TermParseError(AdtError):
    """Syntax error with source position, expected-token list and found text."""

    def __init__(self, span, expected, found):
        self.span = span
        self.expected = list(expected)
        self.found = found
        super().__init__(
            "parse error at line %d col %d: expected %s, found %r"
            % (span.start_line, span.start_col, " or ".join(self.expected), found)
        )


# --- domains and valuations -------------------------------------------------

class DuplicateDomainIdError(AdtError):
    """A domain with this id is already registered."""


class UnknownDomainError(AdtError):
    """No registered domain under this id."""


class DomainCheckError(AdtError):
    """A candidate domain failed the randomized operator self-checks."""


class UnknownActionError(AdtError):
    """(player, label) does not name a basic action of the current tree."""


class ValueOutOfDomainError(AdtError):
    """A supplied value lies outside the domain's value kind."""


class IncompleteValuationError(AdtError):
    """Evaluation requested but some basic action has no valuation entry."""


class TooLargeError(AdtError):
    """Instance exceeds the size bound of an exhaustive test oracle."""


class SharedLabelError(AdtError):
    """The world-enumeration oracle requires pairwise distinct action keys."""


# --- persistence ------------------------------------------------------------

class FormatError(AdtError):
    """Malformed file: bad JSON, wrong format tag or unsupported version."""


class IntegrityError(AdtError):
    """Well-formed file whose content violates tree or valuation invariants."""


# --- document service -------------------------------------------------------

class UnknownDocumentError(AdtError):
    """No document under this id."""


class UnknownInstanceError(AdtError):
    """No attached domain instance under this id."""


class VersionConflictError(AdtError):
    """Optimistic concurrency check failed: stale base version."""

    def __init__(self, expected, got):
        self.expected = expected
        self.got = got
        super().__init__(f"stale base version {got}, current is {expected}")
