"""Exception hierarchy shared by all modules."""


class LayerTrackError(Exception):
    """Base class for every error raised by this package."""


class ProblemError(LayerTrackError, ValueError):
    pass


class NonPositiveConvection(ProblemError):
    pass


class NegativeReaction(ProblemError):
    pass


class NonFiniteJump(ProblemError):
    pass


class OutOfRange(LayerTrackError, ValueError):
    pass


class InvalidMesh(LayerTrackError, ValueError):
    pass


class NumericalFailure(LayerTrackError, ArithmeticError):
    """Failures that depend on the numbers, not on how the call was made."""


class LayerHitsBoundary(NumericalFailure):
    pass


class SingularSystem(NumericalFailure):
    pass


class StructureViolation(NumericalFailure):
    """An assembled row lost the M-matrix sign pattern."""


class NonPositiveDifference(LayerTrackError, ValueError):
    pass
