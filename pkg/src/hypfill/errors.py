"""Exception types shared across the package."""


class HypfillError(Exception):
    """Base class for all package errors."""


class InputError(HypfillError):
    """Malformed user input (files, flags, schemas)."""


class DomainError(HypfillError):
    """Numeric argument outside the valid domain."""


class DegenerateInputError(HypfillError):
    """Geometric input collapsed below resolution (coincident / collinear points)."""


class PreconditionError(HypfillError):
    """A documented operation precondition does not hold."""


class GeometryError(HypfillError):
    """Inconsistent geometric structure (angle sums, gluing mismatches)."""


class ConvergenceError(HypfillError):
    """Iterative solver ran out of iterations.

    Carries the last iterate and residual so callers can inspect how close
    the solve got.
    """

    def __init__(self, message, last_iterate=None, residual=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual


class CornerHitError(HypfillError):
    """A traced geodesic passed within resolution of a chart corner."""


class EmbeddednessError(HypfillError):
    """A graph modification would introduce a crossing; caller should retry."""


class InvariantViolation(HypfillError):
    """A checked runtime invariant failed; indicates a bug, not bad input."""
