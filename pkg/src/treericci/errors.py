"""Exception hierarchy shared by all modules."""


class RicciError(Exception):
    """Base class for every error raised by treericci."""


class TreeError(RicciError, ValueError):
    pass


class NotATree(TreeError):
    """Input edges contain a cycle or do not connect all vertices."""


class DuplicateEdge(TreeError):
    pass


class SelfLoop(TreeError):
    pass


class InvalidLabel(TreeError):
    pass


class UnknownVertex(RicciError, KeyError):
    pass


class DimensionMismatch(RicciError, ValueError):
    pass


class NonpositiveWeight(RicciError, ValueError):
    pass


# numerical failures

class NumericalError(RicciError, ArithmeticError):
    pass


class NotSymmetric(NumericalError):
    pass


class NotSymmetrizable(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class SingularBlockSolve(NumericalError):
    pass


class SingularBranchBlock(SingularBlockSolve):
    pass


class DegenerateEigenvalue(NumericalError):
    """The requested eigenvalue is not simple; use the degenerate path."""


class IllConditionedEigenspace(NumericalError):
    pass


# precondition violations

class PreconditionError(RicciError, ValueError):
    pass


class IncompatiblePartition(PreconditionError):
    """Supplied edge classes are not compatible with the Ricci matrix."""


class InvalidK(PreconditionError):
    pass


class DimensionCap(PreconditionError):
    pass


class NeedAtLeastThreeK(PreconditionError):
    pass


class NotUnitVector(PreconditionError):
    pass


class ZeroAtVertex(PreconditionError):
    """The test function vanishes on every edge at the vertex, so rho is undefined."""
