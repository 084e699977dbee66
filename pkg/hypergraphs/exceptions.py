"""hypergraphs.exceptions

Error hierarchy shared by every app of the project.
"""


class SparsificationError(Exception):
    """Base class for every error raised by the sparsification lab."""


class InvalidInstanceError(SparsificationError, ValueError):
    """A graph, hypergraph or vertex set violates its invariants."""


class GraphFormatError(InvalidInstanceError):
    """An input file could not be parsed."""

    def __init__(self, message, line_number=None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class SizeLimitExceeded(SparsificationError):
    """The instance is larger than the dense linear algebra limit."""

    def __init__(self, what, size, limit):
        self.size = size
        self.limit = limit
        super().__init__(f"{what} has size {size}, above the limit of {limit}")


class UnknownEdgeError(SparsificationError, KeyError):
    """An edge index does not belong to the instance it is mapped through."""


class MissingResistanceError(SparsificationError, KeyError):
    """A resistance table does not cover a pair it was asked about."""
