class GraphSteerError(Exception):
    """Base class for errors raised by graphsteer."""


class ValidationError(GraphSteerError, ValueError):
    """Input has the wrong shape, symmetry or index set."""


class DomainError(GraphSteerError, ValueError):
    """A parameter lies outside its allowed range."""


class NumericalDegeneracyError(GraphSteerError, ArithmeticError):
    """A spectrum could not be paired into symplectic eigenvalues."""
