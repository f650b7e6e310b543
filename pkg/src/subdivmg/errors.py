"""Exception types shared across the package."""


class SubdivMgError(Exception):
    """Base class for all errors raised by this package."""


class InvalidOrder(SubdivMgError):
    """Pseudo-spline order parameters (J, L) outside the valid range."""


class OrderTooLarge(SubdivMgError):
    """Requested derivative order beyond the supported maximum."""


class ParseError(SubdivMgError):
    """Malformed textual symbol or command-line specification."""


class HypothesisViolated(SubdivMgError):
    """Certification hypotheses on the system symbol do not hold."""


class DimensionMismatch(SubdivMgError):
    """Operator and vector dimensions are inconsistent."""


class BadDimension(SubdivMgError):
    """Dimension incompatible with the requested sampling pattern."""


class ZeroDiagonal(SubdivMgError):
    """Matrix diagonal contains zeros; the relaxation is undefined."""


class SingularCoarseMatrix(SubdivMgError):
    """Coarsest-level matrix cannot be factorized or solved."""


class IncompatibleDimension(SubdivMgError):
    """Finest dimension does not support the requested coarsening chain."""


class InvalidDegree(SubdivMgError):
    """Spline degree or breakpoint count outside the supported range."""


class IndexOutOfRange(SubdivMgError):
    """Basis function index outside the basis."""


class TooFewIterations(SubdivMgError):
    """Not enough residual history to estimate a convergence rate."""
