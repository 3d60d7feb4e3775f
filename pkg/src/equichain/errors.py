"""Exception hierarchy shared by every module."""


class EquichainError(Exception):
    """Base class for all library errors."""


class InputError(EquichainError, ValueError):
    """Malformed arguments: dimension mismatch, missing entity, bad syntax."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class StructuralError(EquichainError):
    """A complex, map or action violates its structural invariants."""


class PreconditionError(EquichainError):
    """An operation was called on data outside its domain."""


class ContainmentError(EquichainError):
    """A quotient was requested for subspaces that are not nested."""


class ValidationError(EquichainError):
    """Filtration data violates one of its axioms.

    ``kind`` names the violated axiom (``"bounds"``, ``"monotone"``,
    ``"boundary"``, ``"equivariance"``).
    """

    def __init__(self, kind, message):
        self.kind = kind
        super().__init__(f"{kind}: {message}")


class ExactnessError(EquichainError):
    """A linear system that should be solvable was not; carries a witness."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class UnsupportedGroupError(EquichainError):
    """The operation only supports the two-element group."""


class NoSplitFound(EquichainError):
    """Every search strategy for a splitting was exhausted."""
