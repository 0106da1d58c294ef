"""Exception types raised across the package."""


class QftSchmidtError(Exception):
    """Base class for all package errors."""


class DimensionError(QftSchmidtError, ValueError):
    """Operand shapes are incompatible with the requested operation."""


class DomainError(QftSchmidtError, ValueError):
    """An argument lies outside the domain of the operation."""


class IndexRangeError(QftSchmidtError, IndexError):
    """A digit or flat index is out of range for the bipartite dimensions."""


class NumericalError(QftSchmidtError, ArithmeticError):
    """A numerical routine failed to converge."""


class ContractError(QftSchmidtError, AssertionError):
    """A post-condition check on computed output failed."""
