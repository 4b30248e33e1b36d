"""Exception hierarchy. Every domain failure derives from StateffectError."""


class StateffectError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class InvalidLabel(StateffectError):
    pass


class DuplicateLabel(StateffectError):
    pass


class NotNormalized(StateffectError):
    pass


class NegativeProb(StateffectError):
    pass


class OutOfRange(StateffectError):
    """A value that must lie in [0, 1] does not."""


class SpaceMismatch(StateffectError):
    pass


class NotAProductSpace(StateffectError):
    pass


class NotStochastic(StateffectError):
    pass


# metric spaces
class NotSymmetric(StateffectError):
    pass


class TriangleViolation(StateffectError):
    def __init__(self, x, y, z, excess):
        self.triple = (x, y, z)
        self.excess = excess
        super().__init__(
            f"d({x},{y}) > d({x},{z}) + d({z},{y}) by {excess:.3g}")


class NotOneBounded(StateffectError):
    pass


class ZeroDistanceDistinctPoints(StateffectError):
    pass


class NotAMetric(StateffectError):
    """Diagonal entries nonzero or matrix not square."""


class SolverFailure(StateffectError):
    pass


# transport
class Infeasible(StateffectError):
    pass


class DegeneracyLimit(StateffectError):
    pass


class TooLarge(StateffectError):
    pass


# matrices
class NotHermitian(StateffectError):
    pass


class NoConvergence(StateffectError):
    pass


class DimensionMismatch(StateffectError):
    pass


class NotADensityMatrix(StateffectError):
    pass


class NotAnEffect(StateffectError):
    pass


# effect modules
class NotSummable(StateffectError):
    pass


class NotBelow(StateffectError):
    pass


class NotAscending(StateffectError):
    pass


class UnsupportedLattice(StateffectError):
    pass


# representation round trips
class NotAHomomorphism(StateffectError):
    def __init__(self, message, sample=None):
        self.sample = sample
        super().__init__(message)


class NotAffine(StateffectError):
    def __init__(self, message, sample=None):
        self.sample = sample
        super().__init__(message)
