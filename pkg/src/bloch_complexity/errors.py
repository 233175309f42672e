"""Exception hierarchy.

Two families: ``InputError`` for malformed or physically inconsistent input
(the CLI maps these to exit code 2) and ``NumericalError`` for failures that
arise while evaluating a well-formed request (exit code 3).
"""


class BlochError(Exception):
    """Base class for all package errors."""


class InputError(BlochError, ValueError):
    """Input rejected before any numerics run."""


class NumericalError(BlochError, ArithmeticError):
    """A computation could not produce a trustworthy value."""


class DegeneratePair(InputError):
    pass


class Unreachable(InputError):
    pass


class StepTooCoarse(NumericalError):
    pass


class GridTooCoarse(NumericalError):
    pass


class NeverReached(NumericalError):
    pass


class DegenerateEvolution(NumericalError):
    pass


class ZeroHamiltonian(NumericalError):
    pass


class ZeroDuration(NumericalError):
    pass


class EigenstateSingularity(NumericalError):
    pass


class MissingFieldRate(NumericalError):
    pass


class PointTrajectory(NumericalError):
    pass


class MaximalComplexity(NumericalError):
    pass
