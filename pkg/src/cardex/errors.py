"""Exception hierarchy shared by all cardex modules."""

from __future__ import annotations


class CardexError(Exception):
    """Base class for every error raised by cardex."""


class FormatError(CardexError):
    """Malformed input file. ``line_no`` is 1-based, or None when not line-bound."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class ConflictError(FormatError):
    """One alias claimed by two canonical names in the same gazetteer."""

    def __init__(self, alias: str, canonical_a: str, canonical_b: str, line_no: int | None = None):
        self.alias = alias
        self.canonical_a = canonical_a
        self.canonical_b = canonical_b
        super().__init__(
            f"alias {alias!r} maps to both {canonical_a!r} and {canonical_b!r}", line_no
        )


class DuplicateKey(FormatError):
    pass


class InvalidTree(CardexError):
    pass


class UnknownLabel(CardexError):
    pass


class NoPredicate(CardexError):
    pass


class RejectedTriple(CardexError):
    pass


class RejectedSubject(RejectedTriple):
    def __init__(self, surface: str):
        self.surface = surface
        super().__init__(f"subject {surface!r} is not a known model name")


class UnknownNode(CardexError):
    def __init__(self, node_id: str):
        self.node_id = node_id
        super().__init__(f"unknown node {node_id!r}")


class InvariantViolation(CardexError):
    pass


class KindConflict(InvariantViolation):
    def __init__(self, node_id: str, kind_a: str, kind_b: str):
        self.node_id = node_id
        super().__init__(f"node {node_id!r} has conflicting kinds {kind_a!r} and {kind_b!r}")
