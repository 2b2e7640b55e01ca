"""Exception hierarchy.

Solver failures subclass :class:`SolverFailure`; the CLI maps those to exit
code 1 and prints the class name as the status.
"""


class DyadicError(Exception):
    pass


class PrimeMismatch(DyadicError, ValueError):
    pass


class NonUnit(DyadicError, ArithmeticError):
    pass


class OutOfRange(DyadicError, ValueError):
    pass


class SolverFailure(DyadicError):
    @property
    def status(self) -> str:
        return type(self).__name__


class RankDeficient(SolverFailure):
    """Jacobian (or linear system) is not of full row rank mod 2."""


class RankDrop(SolverFailure):
    """Unit-pivot elimination over Z/2^N failed, or mod-2 rank is too small."""


class RankTestFailed(SolverFailure):
    """No rank-2 witness for the candidate essential matrix."""

    def __init__(self, message, candidate=None):
        super().__init__(message)
        self.candidate = candidate


class NoLiftableRoot(SolverFailure):
    pass


class XYRecoveryFailed(SolverFailure):
    pass


class DegreeAnomaly(SolverFailure):
    pass


class TooManyPoints(DyadicError, ValueError):
    pass
