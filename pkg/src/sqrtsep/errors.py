"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: validation errors exit 1, resource and
budget errors exit 2, invariant breaches exit 3.
"""


class SqrtSepError(Exception):
    """Base class for all library errors."""


class DomainError(SqrtSepError, ValueError):
    """An argument lies outside the operation's domain."""


class ResourceError(SqrtSepError):
    """A configured budget (precision, enumeration, factoring) ran out."""


class PrecisionError(ResourceError):
    """The working precision cannot certify a required comparison."""


class BudgetError(ResourceError):
    """An enumeration or search budget was exceeded."""


class DimensionError(ResourceError):
    """Lattice dimension exceeds the enumeration cap."""


class UnfactoredRadicandError(ResourceError):
    """A radicand could not be fully factored within the factoring budget."""

    def __init__(self, radicand, cofactor):
        super().__init__(f"could not factor radicand {radicand} (unfactored cofactor {cofactor})")
        self.radicand = radicand
        self.cofactor = cofactor


class InvariantError(SqrtSepError):
    """An internal invariant was violated. Never raised on valid use."""
